#pragma once

#include "zetalab/density.hpp"
#include "zetalab/report.hpp"
#include "zetalab/zeros.hpp"

#include <complex>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace zetalab {

using CD = std::complex<double>;

struct TransformConfig {
    double quad_tol = 1e-9;     // per integration region
    double y_neg = 3.5;         // how far the large-argument side of P0 is integrated
    double safety = 5.0;
    long bits = 64;             // quadrature working precision
};

// Memoized P0(pi e^{-2y}) at double nodes. y < 0 means a large argument, which is
// the expensive side; quadratures over the same interval share most nodes.
class DensitySampler {
public:
    explicit DensitySampler(PrecisionContext ctx = PrecisionContext(64, 1e-15), DensityOptions opt = {});

    struct Sample {
        double value = 0;
        double bound = 0;
    };
    Sample p0(double y);
    double c0() const { return c0_; }
    double ctilde4() const { return ct4_; }
    // twice the sampled sup |P0(pi e^{-2y}) - c(0)| over [-Y, -Y + 0.5]; a modeled constant
    double oscillation_near(double Y);
    // largest |y| the density evaluation can reach under its precision ceiling
    double reach() const;
    std::size_t evaluations() const { return evals_; }
    const PrecisionContext& context() const { return ctx_; }

private:
    PrecisionContext ctx_;
    DensityOptions opt_;
    double c0_ = 0, ct4_ = 0;
    std::mutex mu_;
    std::unordered_map<double, Sample> memo_;
    std::size_t evals_ = 0;
};

// ---- unconditional identities ----

// f(s) = int_R e^{sy} P0(pi e^{-2y}) dy on 1/2 < Re s < 4
VerificationReport verify_mut1(CD s, DensitySampler& ds, const TransformConfig& cfg = {});
// F(s) = int_{y>0} e^{sy} P0(pi e^{-2y}) dy, Re s < 4
VerificationReport verify_mut3(CD s, DensitySampler& ds, const TransformConfig& cfg = {});
// (-1)^w f(s) = int_R e^{sy} P_{4w}(pi e^{-2y}) dy on 4w < Re s < 4(w+1); reports the
// smallest density value met on the quadrature nodes as param "min_density"
VerificationReport verify_mut4(long w, CD s, DensitySampler& ds, const TransformConfig& cfg = {});
// p_r(s) = int_{y<0} e^{sy}(c(0) - P0(pi e^{2y})) dy + int_{y>0} e^{sy} P0(pi e^{-2y}) dy, 0 < Re s < 4
VerificationReport verify_cor32(CD s, DensitySampler& ds, const TransformConfig& cfg = {});
// -i p_{i,+}(i s) = int_{y>0} e^{sy} e(-y) dy with the first N zeros on both sides
VerificationReport verify_cc64(CD s, const ZeroDerived& d, long N, const TransformConfig& cfg = {});
// m1(y) = P0(pi e^{-2y}) + c(4) e^{-4y} against -P4(pi e^{-2y}) over a y grid
VerificationReport density_shift(const std::vector<double>& ys, const PrecisionContext& ctx);

// Toy transition across r = 1 for N(s) = s(s-1)(s+1): m1 = m0 + e^{-y}/N'(1), and m1
// reproduces 1/N(s) by quadrature at s with Re s > 1.
struct ToyShift {
    double jump_residual = 0;    // max over the grid of |m1 - m0 - e^{-y}/N'(1)|
    VerificationReport transform;
};
ToyShift density_shift_toy(CD s, const TransformConfig& cfg = {});

// ---- conditional identities ----

// f(s) = int_R e^{sy} g0(y) dy on 0 < Re s < 4. The lambda series is split: the first
// K terms are integrated numerically, terms K < k <= N in closed form.
VerificationReport verify_ct52(CD s, const ZeroDerived& d, long N, DensitySampler& ds, const TransformConfig& cfg = {},
                               long K = 100);
// lambda(y) + c(0) - P0(pi e^{2y}) = P0(pi e^{-2y})
VerificationReport verify_eq_star(double y, const ZeroDerived& d, long N, DensitySampler& ds);
// p_i(s) = int_{y>0} sin(sy) 2 e(-y) dy
VerificationReport verify_ct53_2(CD s, const ZeroDerived& d, long N, const TransformConfig& cfg = {});
// e(-z) = (z/pi) int_{y>0} lambda(y)/(z^2 + y^2) dy, both with the first N zeros
VerificationReport verify_eq_circle(CD z, const ZeroDerived& d, long N, const TransformConfig& cfg = {});

struct SubclaimCheck {
    double integral = 0;   // (1/pi)|z| int_{y>0} dy/|z^2 + y^2|
    double bound = 0;      // (1/cos|phi|)(1/2 + |phi|/pi)
    double quad_error = 0;
    bool holds = false;
};
SubclaimCheck subclaim_check(CD z);

// v(z) = (z/pi) int_{y>0} j(y)/(z^2 + y^2) dy from the density coefficients only,
// truncated at y = Y; the tail is a modeled item (sup|j| from the sampled range)
struct PoissonV {
    ValueWithBound value;
    double Y = 0;
    double tail_modeled = 0;
    double sup_j = 0;
};
PoissonV poisson_v(CD z, DensitySampler& ds, double Y, const TransformConfig& cfg = {});
// params include "density_bits_at_Y", the mantissa the density needs at the truncation point
VerificationReport verify_v_vs_e(CD z, const ZeroDerived& d, long N, DensitySampler& ds, double Y,
                                 const TransformConfig& cfg = {});

// Theta(theta, z) = (1/(2i)) sum_{sigma = +-1} e^{-sigma theta z} E1(-sigma theta z), Im z < 0
CD theta_kernel(double theta, CD z, const PrecisionContext& ctx);
// p_{i,+}(z) = -(1/pi) int_{theta>0} j(theta) Theta(theta, z) dtheta
VerificationReport verify_cc65(CD z, const ZeroDerived& d, long N, DensitySampler& ds, double Y,
                               const TransformConfig& cfg = {});

// ---- recovery of gamma_n and zeta'(1/2 + i gamma_n) ----

struct RecoveryPoint {
    double x = 0;
    double log_value = 0;      // log((-1)^n e_hat(-x, n))
    double gamma_from_log = 0; // -log_value / x
    double amplitude = 0;      // e^{gamma_n x} e_hat(-x, n), tends to c(i gamma_n)
};

struct Recovery {
    long n = 0;
    std::vector<RecoveryPoint> points;
    double gamma_slope = 0;       // least-squares slope over the grid
    double gamma_table = 0;
    std::complex<double> zeta_prime_recovered;   // at the last grid point
    std::complex<double> zeta_prime_direct;
    bool sign_ok = true;
};

Recovery recover_gamma_n(long n, const std::vector<double>& xs, const ZeroDerived& d, long N,
                         const PrecisionContext& ctx);

// route (b): gamma_n from v(x) - e(-x, n - 1) at a single small x. The uncertainty covers
// the numerics of v only; at desk-feasible x the limit in x is far from reached and the
// estimate is biased well above gamma_n.
struct RecoveryB {
    double x = 0;
    double estimate = 0;
    double uncertainty = 0;
    bool sign_ok = true;
};
RecoveryB recover_route_b(long n, double x, const ZeroDerived& d, long N, DensitySampler& ds, double Y,
                          const TransformConfig& cfg = {});

// ---- integrability on vertical lines ----

struct IntegrabilityProbe {
    double x = 0, t_max = 0;
    double partial[2] = {0, 0};   // int_{-t_max}^{t_max} |f|^p, p = 1, 2
    double tail[2] = {0, 0};      // Stirling-model tail past t_max
    double quad_error[2] = {0, 0};
    bool conditional = false;     // 0 < x < 1/2: tail uses a sampled |1/zeta|
};
IntegrabilityProbe integrability_probe(double x, double t_max, const PrecisionContext& ctx);

}  // namespace zetalab
