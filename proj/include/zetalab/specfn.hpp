#pragma once

#include "zetalab/numerics.hpp"

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <vector>

namespace zetalab {

// Exact Bernoulli number B_n (B_1 = -1/2, odd n > 1 give 0).
mpq_class bernoulli(int n);

Complex gamma(const Complex& z, const PrecisionContext& ctx);
Complex lgamma(const Complex& z, const PrecisionContext& ctx);
Complex digamma(const Complex& z, const PrecisionContext& ctx);

struct EulerMaclaurinParams {
    long N = 0;  // cutoff; 0 selects the heuristic floor
    long M = 0;  // Bernoulli terms; 0 means adaptive
};

struct ZetaEval {
    Complex value;
    Complex deriv;
    Real err{0.0, 64};  // magnitude of the first omitted correction term
    long N = 0;
    long M = 0;
};

ZetaEval zeta_em(const Complex& s, const PrecisionContext& ctx, const EulerMaclaurinParams& p = {},
                 bool with_derivative = true);
Complex zeta(const Complex& s, const PrecisionContext& ctx);
Complex zeta(const Complex& s, const EulerMaclaurinParams& p, const PrecisionContext& ctx);
Complex zeta_prime(const Complex& s, const PrecisionContext& ctx);
// analytic derivative, verified against a central difference with h = 2^{-bits/3}
Complex zeta_prime_checked(const Complex& s, const PrecisionContext& ctx);

ZetaEval hurwitz_em(const Complex& s, const Real& a, const PrecisionContext& ctx, const EulerMaclaurinParams& p = {});
Complex hurwitz_zeta(const Complex& s, const Real& a, const PrecisionContext& ctx);

Complex exp_integral_e1(const Complex& z, const PrecisionContext& ctx);
Complex e1_series(const Complex& z, const PrecisionContext& ctx);
Complex e1_continued_fraction(const Complex& z, const PrecisionContext& ctx);

// ---- double / long double fast path on the critical line ----

std::complex<long double> lgamma_ld(std::complex<long double> z);
long double siegel_theta(long double t);

// Euler-Maclaurin in double with long double phase reduction; valid for
// 1 <= t <= t_max on s = 1/2 + i t.
class FastCriticalZeta {
public:
    explicit FastCriticalZeta(double t_max);
    struct Value {
        std::complex<double> zeta;
        std::complex<double> dzeta;
    };
    Value eval(double t, bool with_derivative = true) const;
    double hardy_z(double t) const;
    // zeta(1/2 + x + i t) for small x >= 0 off the line
    std::complex<double> eval_shifted(double x, double t) const;
    double t_max() const { return t_max_; }

private:
    long cutoff(double t) const;
    double t_max_;
    // log(n)/(2 pi) as hi + lo with hi pre-split into 26-bit halves
    std::vector<double> a_hh_, a_hl_, a_lo_;
    std::vector<double> logn_;
    std::vector<double> rsqrt_;
    std::vector<long double> logn_ld_;
    std::vector<double> bern_;  // B_{2j}/(2j)!
};

}  // namespace zetalab
