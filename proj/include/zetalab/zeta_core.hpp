#pragma once

#include "zetalab/numerics.hpp"

#include <complex>
#include <string>

namespace zetalab {

// l(s) = pi^{-s/2} s Gamma(s/2) = pi^{-s/2} 2 Gamma(1 + s/2); a(s) = l(s)(s - 1);
// xi(s) = a(s) zeta(s) / 2; n(s) = sin(pi s/4) 2 xi(1/2 + s); f = 1/n;
// b(s) = sin(pi s/4) a(1/2 + s).
Complex eval_l(const Complex& s, const PrecisionContext& ctx);
Complex eval_a(const Complex& s, const PrecisionContext& ctx);
Complex eval_xi(const Complex& s, const PrecisionContext& ctx);
Complex eval_xi_prime(const Complex& s, const PrecisionContext& ctx);
Complex eval_n(const Complex& s, const PrecisionContext& ctx);
Complex eval_f(const Complex& s, const PrecisionContext& ctx);
Complex eval_b(const Complex& s, const PrecisionContext& ctx);
Complex eval_n_prime(const Complex& s, const PrecisionContext& ctx);
// analytic n' verified against a central difference
Complex eval_n_prime_checked(const Complex& s, const PrecisionContext& ctx);

enum class CoreTag { l, a, xi, n, f, b };
const char* to_string(CoreTag t);

struct CoreFunction {
    CoreTag tag;
    Complex operator()(const Complex& s, const PrecisionContext& ctx) const;
};

// c(z) = 1/n'(z)
Complex coeff_c(const Complex& z, const PrecisionContext& ctx);
// the same coefficient at a critical zero z = i gamma, as 1/(b(z) zeta'(1/2 + z))
Complex coeff_c_via_b(const Complex& z, const PrecisionContext& ctx);
// closed form 2^4/(pi^{3/4} Gamma(1/4) (-zeta(1/2)))
Real coeff_c0_closed_form(const PrecisionContext& ctx);

struct StirlingModelB {
    double x0 = -0.5;
    double x1 = 4.0;
    static double K1(double x);
    double exponent(double x) const { return 1.75 + x / 2; }
    double model(double x, double t) const;
};

struct StirlingCheck {
    double model = 0;
    double actual = 0;
    double deviation = 0;  // |b|/model - 1
};

double stirling_b_model(double x, double t);
StirlingCheck stirling_b_check(double x, double t, const PrecisionContext& ctx);

// log b(i gamma) in long double, safe for gamma up to ~1e6 where b itself overflows double
std::complex<long double> log_b_imag_axis(long double gamma);

}  // namespace zetalab
