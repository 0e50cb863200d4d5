#pragma once

#include "zetalab/metric_geom.hpp"
#include "zetalab/numerics.hpp"
#include "zetalab/report.hpp"

#include <complex>
#include <string>
#include <vector>

namespace zetalab {

using CD = std::complex<double>;

// ---- Dirichlet characters ----

struct CharacterSpec {
    long k = 1;
    long index = 0;             // mixed-radix index of the generator exponents
    std::vector<CD> values;     // values[n mod k]
    bool principal = true;
    bool real_valued = true;
    int parity = 0;             // 0 if chi(-1) = 1, else 1

    CD operator()(long n) const;
    CharacterSpec conj() const;
    std::string label() const;  // "mod:k,index:j"
    void validate() const;
};

// Characters mod k, built on the cyclic factors of (Z/k)*; the generators are the
// least primitive roots of the odd prime-power parts, and -1, 5 for the 2-part,
// lifted by CRT. index j enumerates exponent tuples lexicographically.
std::vector<CharacterSpec> enumerate_characters(long k);
CharacterSpec parse_character(const std::string& spec);
std::vector<long> unit_generators(long k, std::vector<long>* orders = nullptr);

bool is_primitive(const CharacterSpec& chi);
CD gauss_sum(const CharacterSpec& chi);   // sum_r chi(r) e^{2 pi i r/k}
CD omega(const CharacterSpec& chi);       // j G(1, chi) k^{-1/2}, j = 1 or -i by parity

std::vector<long> primes_up_to(long n);

struct LValue {
    CD value;
    double bound = 0;      // truncation plus rounding
    long primes = 0;
};
// prod_{p <= P} (1 - chi(p) p^{-s})^{-1}; P = 0 picks the cap from a 1e-12 log tail target
LValue L_euler(CD s, const CharacterSpec& chi, long P = 0);
// k^{-s} sum_r chi(r) zeta(s, r/k); at s = 1, -(1/k) sum_r chi(r) psi(r/k)
CD L_hurwitz(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);

// ---- completed functions, non-principal chi ----

CD f_parity(CD s, int chi_minus_one);   // sin(pi s/4) for -1, s cos(pi s/4) for +1
CD q_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);
CD v_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);
CD g_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);
CD h_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);
CD j_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);

struct FEResidual {
    CD lhs, rhs;
    double residual = 0;
    double budget = 0;
    bool pass = false;
};
// q(1 - s, chi) against omega(chi) q(s, chi*)
FEResidual fe_residual(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);
// v(-s, chi) against -omega(chi) v(s, chi*)
FEResidual v_reflection_residual(CD s, const CharacterSpec& chi, const PrecisionContext& ctx);

enum class Builder { V, G, H, J };
const char* to_string(Builder b);
Builder parse_builder(const std::string& s);

struct GrooveProbe {
    std::string target;
    ReportClass cls = ReportClass::Conditional;
    RidgeGrooveScan scan;
    std::vector<double> real_zeros;   // sign changes on the real axis, bisected
    double strip_lo = 0, strip_hi = 0, strip_x = 0;
    int sigma = 1;                    // sign of n' at strip_lo
    PDProbeResult pd;
};

struct GrooveGrid {
    std::vector<double> xs;
    std::vector<double> ts;
    double zero_scan_hi = 12;   // real zeros sought on (-zero_scan_hi, zero_scan_hi)
    long pd_m = 16;
    double pd_step = 0.5;
};

GrooveProbe groove_probe_dirichlet(const CharacterSpec& chi, Builder b, const GrooveGrid& grid,
                                   const PrecisionContext& ctx);

// ---- Ramanujan tau ----

struct RamanujanSeries {
    long n_max = 0;
    std::vector<__int128> tau;   // tau[n], tau[0] unused
    double tau_d(long n) const { return static_cast<double>(tau[static_cast<std::size_t>(n)]); }
};
std::string to_string_i128(__int128 v);

// prod (1 - v^n) to degree n_max, then the 24th power by repeated squaring; n_max <= 1e4
RamanujanSeries tau_table(long n_max);
// Jacobi's cube sum_m (-1)^m (2m+1) v^{m(m+1)/2} raised to the 8th power by sparse products
RamanujanSeries tau_table_jacobi(long n_max);

// sum tau(n) n^{-s}; the tail past n_max is modeled from the mean of tau(n)^2 n^{-11}
LValue r_dirichlet(CD s, const RamanujanSeries& t);
// prod_{p <= P} (1 - tau(p) p^{-s} + p^{11-2s})^{-1}, P <= n_max, tail modeled likewise
LValue r_euler(CD s, const RamanujanSeries& t, long P = 0);
// Delta(iy) = sum tau(n) e^{-2 pi n y}
double delta_iy(double y, const RamanujanSeries& t);
// q(s) = int_1^inf Delta(iy)(y^{s-1} + y^{11-s}) dy
LValue q_ram(CD s, const RamanujanSeries& t, double tol = 1e-13);
// n(s) = sin(pi s/2) q(6 + s)
CD n_ram(CD s, const RamanujanSeries& t);

GrooveProbe groove_probe_ramanujan(const RamanujanSeries& t, const GrooveGrid& grid);

}  // namespace zetalab
