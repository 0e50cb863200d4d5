#pragma once

#include "zetalab/numerics.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace zetalab {

struct ZeroTable {
    std::vector<double> gammas;
    long count = 0;
    int digits = 0;  // decimal places in the source file
    bool refined = false;
    std::uint64_t checksum = 0;  // FNV-1a of the source text
    std::string source;

    void validate() const;
};

// Directory from $ZETALAB_ZERO_DIR, else the data directory of the build.
std::string default_zero_table_dir();
std::string default_zero_table_path();

ZeroTable parse_zero_table(const std::string& text, long expected_count = -1);
// expected_count < 0 accepts any count; otherwise the first expected_count lines are
// taken and fewer is an error. A binary sidecar "<path>.bin" caches the parse.
ZeroTable ingest_zero_table(const std::string& path, long expected_count = -1, bool use_cache = true);

std::uint64_t fnv1a(const std::string& bytes);

// Newton on t -> xi(1/2 + i t), which is real on the real line.
Real refine_zero(const Real& seed, const PrecisionContext& ctx);

struct DeriveOptions {
    long n = -1;              // zeros used; -1 = all
    long refine = 100;        // leading zeros refined at context precision
    bool use_cache = true;
    std::string cache_path;   // empty: "<table source>.derived.bin"
};

struct ZeroDerived {
    std::vector<double> gamma;
    std::vector<double> delta;
    std::vector<double> delta_prime;
    std::vector<std::complex<double>> c;           // c(i gamma_k) = 1/(b zeta')
    std::vector<std::complex<double>> zeta_prime;  // zeta'(1/2 + i gamma_k)
    std::vector<unsigned char> flagged;
    // high-precision data for the first refined zeros
    std::vector<Real> gamma_refined;
    std::vector<Complex> c_via_nprime;
    std::vector<Complex> c_via_b;
    std::vector<Complex> zeta_prime_refined;
    // suffix[p][k] = sum_{j >= k} |c_j| gamma_j^{-p}, p = 0, 1, 2; beyond[p] extrapolates past the table
    std::vector<double> suffix[3];
    double beyond[3] = {0, 0, 0};

    std::size_t size() const { return gamma.size(); }
    // sum_{j > N} |c_j| gamma_j^{-p} (1-based N), table remainder plus extrapolation
    double abs_tail(long N, int p = 0) const;
};

ZeroDerived derive(const ZeroTable& table, const PrecisionContext& ctx, const DeriveOptions& opt = {});
// Build a derived set from explicit (gamma, c, zeta') data; used by derive and by tests.
ZeroDerived derived_from(std::vector<double> gamma, std::vector<std::complex<double>> c,
                         std::vector<std::complex<double>> zeta_prime);
// gaps (k = 1 predecessor omitted), suffix sums, tail fits
void finalize(ZeroDerived& d);

// ---- series constants ----

struct TailFit {
    double K = 0;         // term ~ K k^{-j}
    double j = 0;
    double tail = 0;      // integral of the fit beyond N
};

// power-law extrapolation from the last decade, using block sums for robustness
TailFit fit_tail(const std::vector<double>& terms, long N);

struct SeriesConstants {
    long N = 0;
    double A_partial = 0, B0_partial = 0, C0_partial = 0;
    double A_tail = 0, B0_tail = 0, C0_tail = 0;
    double A() const { return A_partial + A_tail; }
};

SeriesConstants constants(const ZeroDerived& d, long N);

// ---- lambda, e(z) ----

// Tail bounds come from ZeroDerived::abs_tail.
ValueWithBound lambda_series(double y, const ZeroDerived& d, long N);
ValueWithBound lambda_s(double y, const ZeroDerived& d, long N);
ValueWithBound lambda_c(double y, const ZeroDerived& d, long N);

// Terms are formed in double and accumulated exactly, so the returned values satisfy
// e_hat(z, n, N) + e_partial(z, n - 1) == e_series(z, N) with no rounding.
ValueWithBound e_series(std::complex<double> z, const ZeroDerived& d, long N);
// sum over k <= n (1-based)
ValueWithBound e_partial(std::complex<double> z, const ZeroDerived& d, long n);
// sum over n <= k <= N
ValueWithBound e_hat(std::complex<double> z, const ZeroDerived& d, long n, long N);

// ---- partial fractions ----

struct PoleTerm {
    std::complex<double> z;
    std::complex<double> c;
};

// sum c_j/(s^p - z_j^p). Every listed pole (and its negative when p = 2) must be at
// least d from s. Omitted poles satisfy |z| >= tail_radius > |s| and carry
// tail_mass >= sum |z|^{-p}|c| over them; their sum is bounded by tail_mass/j with
// j = 1 - (|s|/tail_radius)^p.
ValueWithBound pfe_bounded_eval(const std::vector<PoleTerm>& terms, std::complex<double> s, int p, double d,
                                double tail_mass = 0.0, double tail_radius = 0.0);
// sum of t(z): d^{-p}|c| for |z| < |s| + d, else |z|^{-p}|c|/j with j = 1 - (|s|/(|s|+d))^p
double pfe_claim_bound(const std::vector<PoleTerm>& terms, std::complex<double> s, int p, double d);

// coefficient table c4[w] = c(4w) for w = 0..W (c4[0] = c(0))
ValueWithBound F_series(const Complex& s, const std::vector<Real>& c4, const PrecisionContext& ctx);
ValueWithBound p_r(const Complex& s, const std::vector<Real>& c4, const PrecisionContext& ctx);
ValueWithBound p_i(std::complex<double> s, const ZeroDerived& d, long N);
ValueWithBound p_i_plus(std::complex<double> s, const ZeroDerived& d, long N);
ValueWithBound p_full(const Complex& s, const std::vector<Real>& c4, const ZeroDerived& d, long N,
                      const PrecisionContext& ctx);
// sum_{k > N} |c_k| gamma_k^{-p}, extrapolated
double pole_tail_mass(const ZeroDerived& d, long N, int p);

// ---- products ----

struct HadamardResult {
    double residual = 0;       // |xi(1/2+s)/(xi(1/2) prod) - 1|
    double predicted = 0;      // |s|^2 sum_{k>N} gamma_k^{-2}
    double fission_residual = 0;  // |Xi(s) Xi(-s) - xi(1/2+s)| / |xi(1/2+s)|
};

HadamardResult hadamard_check(const Complex& s, const ZeroDerived& d, long N, const PrecisionContext& ctx);
Complex big_xi(const Complex& s, const ZeroDerived& d, long N, const PrecisionContext& ctx);
// Riemann-von Mangoldt estimate of sum_{gamma > G} gamma^{-2}
double inverse_square_tail(double G);

// ---- C1 path ----

struct C1Path {
    double alpha = 0.25;
    const ZeroDerived* derived = nullptr;
    double x(double t) const;        // x(t, alpha) >= 0
    double t_start() const;          // t(1)
    long bulge_index(double t) const;  // k with t in the k-th bulge, else -1
};

C1Path c1_path(double alpha, const ZeroDerived& d);

struct PathScan {
    std::vector<std::pair<double, double>> samples;  // (t, |zeta(1/2 + s(t))|)
    std::vector<double> j_k;                          // j_k(alpha) per zero below t_max
    std::vector<double> min_per_gap;
    ValueWithBound c1_integral;                       // int dt / (t^{7/4} |zeta|)
    double eps0_hat = 0;
};

// j_k(alpha) = min over |t - gamma_k| <= alpha delta'_k of |zeta(1/2+it)/(t - gamma_k)|
double j_k(const ZeroDerived& d, std::size_t k, double alpha);
PathScan path_scan(const C1Path& path, double t_max, const PrecisionContext& ctx);

struct ExponentEstimates {
    double eps0 = 0, eps1 = 0, eps2 = 0, eps1_tilde = 0;   // NaN when a fit has too few record lows
    bool c2_ii = false;   // eps1 < 3/4
    bool c3_ii = false;   // eps1 + eps2 < 3/4
    bool c4_ii = false;   // eps1~ + eps2 <= 1
    std::vector<std::pair<long, double>> growth;  // (k, gamma_k log k / (2 pi k))
};

ExponentEstimates estimate_exponents(const ZeroDerived& d, double alpha, long n_jk = 2000, double path_tmax = 200.0);

struct LambdaInfScan {
    std::vector<double> T;
    std::vector<double> running_min;
    std::vector<double> gap_to_minus_A;
    double A_partial = 0;
};

LambdaInfScan lambda_inf_scan(const ZeroDerived& d, const std::vector<double>& T_grid, long N = 100,
                              double step = 0.0);

}  // namespace zetalab
