#pragma once

#include "zetalab/numerics.hpp"
#include "zetalab/zeros.hpp"

#include <mutex>
#include <vector>

namespace zetalab {

// c~(4k) = 1/(pi^{3/4} Gamma(5/4 + 2k) (2k - 1/4) zeta(1/2 + 4k)),  c(4k) = c~(4k) (-pi^2)^k.
//
// Each coefficient is cached at the highest precision requested so far; a request
// for fewer bits is served by rounding the cached value.
class CoeffTable {
public:
    static CoeffTable& shared();

    Real ctilde(long k, long bits);
    Real c4(long k, long bits);
    // c4[w] = c(4w), w = 0..W
    std::vector<Real> c4_table(long W, long bits);

private:
    void ensure_chain(long k, long bits);
    std::mutex mu_;
    std::vector<Real> vals_;
    std::vector<long> prec_;
    // Gamma(5/4 + 2k) by exact-step recurrence, all at chain_prec_
    std::vector<Real> gamma_chain_;
    long chain_prec_ = 0;
    Real pi34_{64};
};

// both the Gamma and the Pochhammer forms, reconciled
Real coeff_ctilde(long k, const PrecisionContext& ctx);
Real coeff_c4(long k, const PrecisionContext& ctx);
// (2 pi)^{1/2} (2k)^{7/4} (2k/e)^{2k}, the large-k model of 1/c~(4k)
double ctilde_stirling_inverse(long k);

struct DensityOptions {
    long ceiling_bits = 16384;
};

// mantissa needed to sum the series at |z| = v to absolute tolerance tol
long required_bits(double v, double tol);

ValueWithBound P0(const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt = {});
ValueWithBound P0_derivative(const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt = {});
// P_{4w}; w <= -1 through the reflection P_{4w}(pi v) = P_{-4(w+1)}(pi/v), z = pi v real positive
ValueWithBound P4w(long w, const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt = {});
ValueWithBound P4w_derivative(long w, const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt = {});
// the prefix-subtracted form (-1)^w (P0(z) + sum_{1<=k<=w} c~(4k)(-z^2)^k), w >= 0
ValueWithBound P4w_prefix(long w, const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt = {});

struct DensitySeries {
    long w = 0;
    ValueWithBound operator()(const Complex& z, const PrecisionContext& ctx) const { return P4w(w, z, ctx); }
};

// g(z) = P0(pi e^{-2z})
ValueWithBound g_entire(const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt = {});
// j(u) = -c(0) + P0(pi e^{2u}) + P0(pi e^{-2u})
ValueWithBound j_u(const Real& u, const PrecisionContext& ctx, const DensityOptions& opt = {});
// g0(y) = lambda(y) + c(0) - P0(pi e^{2y}) for y < 0, P0(pi e^{-2y}) for y > 0
ValueWithBound g0(double y, const ZeroDerived& d, long N, const PrecisionContext& ctx, const DensityOptions& opt = {});
// h(y) = lambda(y) + c(0) - P0(pi e^{2y})
ValueWithBound h_y(double y, const ZeroDerived& d, long N, const PrecisionContext& ctx, const DensityOptions& opt = {});
// largest |y| with P0(pi e^{2|y|}) feasible under the ceiling
double y_max(const PrecisionContext& ctx, const DensityOptions& opt = {});

struct MonotonicityVerdict {
    bool increasing = true;
    bool derivative_positive = true;
    double min_margin = 0;        // min over steps of (increment - combined bound)
    long first_failure = -1;
    long points = 0;
};

MonotonicityVerdict monotonicity_scan(long w, long n_grid, const PrecisionContext& ctx);

struct GrowthRow {
    double v = 0;
    double P0 = 0;
    double v_quarter = 0;
    double ratio_05 = 0;   // |P0|/v^{0.30}
    double ratio_25 = 0;   // |P0|/v^{0.50}
    long bits = 0;
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    double max_abs = 0;
    double min_value = 0;
    bool positive = true;
};

GrowthReport growth_probe(double v_max, long n_points, const PrecisionContext& ctx, const DensityOptions& opt = {});

// inverse of P0 on [0, pi]
Real theta_inverse(const Real& r, const PrecisionContext& ctx);

struct C5Report {
    double A = 0;
    double c0 = 0;
    double P0_at_pi = 0;
    bool cond_i = false;
    bool cond_ii = false;
    bool v0_defined = false;
    double v0 = 0;
    bool cond_iii = false;
    double scanned_to = 0;   // upper end actually scanned (may be capped by precision)
    bool scan_truncated = false;
    long scan_points = 0;
};

C5Report c5_evaluate(double A, const PrecisionContext& ctx, long n_scan = 1000, const DensityOptions& opt = {});

struct ContinuityReport {
    double lhs = 0;          // sum_{k<=N} c(i gamma_k)
    double lhs_tail = 0;     // extrapolated sum_{k>N} |c|
    double rhs = 0;          // -(c(0)/2 + sum_{k>=1} c(4k))
    double rhs_tail = 0;
    double residual = 0;
    long rhs_terms = 0;
};

ContinuityReport continuity_criterion(const ZeroDerived& d, long N, const PrecisionContext& ctx, long rhs_terms = 30);

}  // namespace zetalab
