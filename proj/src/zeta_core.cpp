#include "zetalab/zeta_core.hpp"

#include "zetalab/specfn.hpp"

#include <cmath>

namespace zetalab {

namespace {

Complex widen(const Complex& z, mpfr_prec_t p) { return Complex(Real(z.re(), p), Real(z.im(), p)); }

bool is_exact(const Complex& s, long v) {
    return s.im().is_zero() && mpfr_cmp_si(s.re().get(), v) == 0;
}

// s is a negative even integer -2k, k >= 1; returns k or 0
long negative_even(const Complex& s) {
    if (!s.im().is_zero() || s.re().sign() >= 0 || !mpfr_integer_p(s.re().get())) return 0;
    long v = s.re().to_long();
    return (v % 2 == 0) ? -v / 2 : 0;
}

PrecisionContext guarded(const PrecisionContext& ctx, long g = 16) { return ctx.with_bits(ctx.bits + g); }

}  // namespace

const char* to_string(CoreTag t) {
    switch (t) {
        case CoreTag::l: return "l";
        case CoreTag::a: return "a";
        case CoreTag::xi: return "xi";
        case CoreTag::n: return "n";
        case CoreTag::f: return "f";
        case CoreTag::b: return "b";
    }
    return "?";
}

Complex eval_l(const Complex& s_in, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx);
    Complex s = widen(s_in, w.bits);
    Real pi = Real::pi(w.bits);
    Complex r = pow(pi, -s / 2L) * gamma(s / 2L + 1L, w) * 2L;
    r.round_to(ctx.bits);
    return r;
}

Complex eval_a(const Complex& s, const PrecisionContext& ctx) {
    Complex r = eval_l(s, guarded(ctx)) * (widen(s, ctx.bits + 16) - 1L);
    r.round_to(ctx.bits);
    return r;
}

Complex eval_xi(const Complex& s_in, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx, 24);
    Complex s = widen(s_in, w.bits);
    Real pi = Real::pi(w.bits);
    if (is_exact(s, 1)) {
        // (s-1) zeta(s) -> 1, so xi(1) = l(1)/2
        Complex r = eval_l(s, w) / 2L;
        r.round_to(ctx.bits);
        return r;
    }
    if (long k = negative_even(s)) {
        // Gamma(1+s/2) has a simple pole cancelled by the trivial zero of zeta
        long m = k - 1;
        Real fact(1L, w.bits);
        for (long j = 2; j <= m; ++j) fact *= j;
        Real res = Real((m % 2 == 0) ? 1L : -1L, w.bits) / fact;  // residue of Gamma at -m
        Complex zp = zeta_prime(s, w);
        Complex r = pow(pi, -s / 2L) * (s - 1L) * zp * (2L * res);
        r.round_to(ctx.bits);
        return r;
    }
    Complex r = pow(pi, -s / 2L) * gamma(s / 2L + 1L, w) * (s - 1L) * zeta(s, w);
    r.round_to(ctx.bits);
    return r;
}

Complex eval_xi_prime(const Complex& s_in, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx, 24);
    Complex s = widen(s_in, w.bits);
    const double dist1 = abs(s - 1L).to_double();
    bool near_trivial = false;
    if (s.re() < -1.0 && std::abs(s.im().to_double()) < 0.5) {
        double x = s.re().to_double();
        double nearest = 2.0 * std::round(x / 2.0);
        near_trivial = std::abs(x - nearest) < 0.3;
    }
    if (dist1 < 0.25 || near_trivial) {
        // xi'(s) = -xi'(1-s) keeps the pole of zeta out of the computation
        Complex r = -eval_xi_prime(1L - s, w);
        r.round_to(ctx.bits);
        return r;
    }
    Real pi = Real::pi(w.bits);
    Complex h = s / 2L + 1L;
    Complex l = pow(pi, -s / 2L) * gamma(h, w) * 2L;
    Complex a = l * (s - 1L);
    ZetaEval z = zeta_em(s, w, {}, true);
    Complex dlog_l = (digamma(h, w) - log(pi)) / 2L;
    Complex r = (a * (dlog_l * z.value + z.deriv) + l * z.value) / 2L;
    r.round_to(ctx.bits);
    return r;
}

Complex eval_n(const Complex& s_in, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx);
    Complex s = widen(s_in, w.bits);
    Real pi = Real::pi(w.bits);
    Complex r = sin(s * pi / 4L) * eval_xi(s + 0.5, w) * 2L;
    r.round_to(ctx.bits);
    return r;
}

Complex eval_f(const Complex& s, const PrecisionContext& ctx) {
    Complex n = eval_n(s, guarded(ctx));
    Real mag(abs(n), 64);
    if (mag <= Real(ctx.abs_tol, 64)) {
        bool real_axis = std::abs(s.im().to_double()) < 1e-12;
        double x = s.re().to_double();
        bool mult4 = real_axis && std::abs(x / 4.0 - std::round(x / 4.0)) < 1e-12;
        throw NumericError(ErrorKind::Pole, mult4 ? "f has a pole at a real multiple of 4"
                                                  : "f has a pole at a translated critical zero");
    }
    Complex r = Complex(Real(1L, ctx.bits + 16)) / n;
    r.round_to(ctx.bits);
    return r;
}

Complex eval_b(const Complex& s_in, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx);
    Complex s = widen(s_in, w.bits);
    Real pi = Real::pi(w.bits);
    Complex r = sin(s * pi / 4L) * eval_a(s + 0.5, w);
    r.round_to(ctx.bits);
    return r;
}

Complex eval_n_prime(const Complex& s_in, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx);
    Complex s = widen(s_in, w.bits);
    Real pi = Real::pi(w.bits);
    Complex arg = s * pi / 4L;
    Complex u = s + 0.5;
    Complex r = cos(arg) * eval_xi(u, w) * (pi / 2L) + sin(arg) * eval_xi_prime(u, w) * 2L;
    r.round_to(ctx.bits);
    return r;
}

Complex eval_n_prime_checked(const Complex& s, const PrecisionContext& ctx) {
    Complex d = eval_n_prime(s, ctx);
    PrecisionContext w = ctx.with_bits(ctx.bits + ctx.bits / 3 + 16);
    Real h = Real::pow2(-ctx.bits / 3, w.bits);
    Complex sw = widen(s, w.bits);
    Complex fd = (eval_n(sw + h, w) - eval_n(sw - h, w)) / (2 * h);
    Real diff(abs(fd - d), 64);
    Real allow = Real::pow2(-ctx.bits / 2, 64) * Real(1 + abs(d), 64);
    if (diff > allow) throw NumericError(ErrorKind::CrossCheck, "n' analytic vs finite difference: " + diff.str(6));
    return d;
}

Complex CoreFunction::operator()(const Complex& s, const PrecisionContext& ctx) const {
    switch (tag) {
        case CoreTag::l: return eval_l(s, ctx);
        case CoreTag::a: return eval_a(s, ctx);
        case CoreTag::xi: return eval_xi(s, ctx);
        case CoreTag::n: return eval_n(s, ctx);
        case CoreTag::f: return eval_f(s, ctx);
        case CoreTag::b: return eval_b(s, ctx);
    }
    throw NumericError(ErrorKind::Domain, "unknown core function");
}

Complex coeff_c(const Complex& z, const PrecisionContext& ctx) {
    Complex np = eval_n_prime(z, ctx);
    if (Real(abs(np), 64) <= Real(ctx.abs_tol, 64))
        throw NumericError(ErrorKind::Pole, "n'(z) vanishes within budget; c(z) undefined");
    Complex r = Complex(Real(1L, ctx.bits + 8)) / np;
    r.round_to(ctx.bits);
    return r;
}

Complex coeff_c_via_b(const Complex& z, const PrecisionContext& ctx) {
    PrecisionContext w = guarded(ctx);
    Complex zw = widen(z, w.bits);
    Complex d = eval_b(zw, w) * zeta_prime(zw + 0.5, w);
    if (Real(abs(d), 64) <= Real(ctx.abs_tol, 64))
        throw NumericError(ErrorKind::Pole, "b(z) zeta'(1/2+z) vanishes within budget");
    Complex r = Complex(Real(1L, w.bits)) / d;
    r.round_to(ctx.bits);
    return r;
}

Real coeff_c0_closed_form(const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.bits + 16;
    Real pi = Real::pi(p);
    Real g14 = gamma(Real(0.25, p));
    Real z12 = zeta(Real(0.5, p));
    Real r = Real(16L, p) / (pow(pi, Real(0.75, p)) * g14 * (-z12));
    r.round_to(ctx.bits);
    return r;
}

double StirlingModelB::K1(double x) { return std::pow(M_PI / 2, 0.25) * std::pow(2 * M_PI, -x / 2); }

double StirlingModelB::model(double x, double t) const { return K1(x) * std::pow(std::abs(t), exponent(x)); }

double stirling_b_model(double x, double t) { return StirlingModelB{}.model(x, t); }

StirlingCheck stirling_b_check(double x, double t, const PrecisionContext& ctx) {
    if (std::abs(t) < 10) throw NumericError(ErrorKind::Precondition, "Stirling model needs |t| >= 10");
    StirlingCheck c;
    c.model = stirling_b_model(x, t);
    c.actual = abs(eval_b(Complex(x, t, ctx.bits), ctx)).to_double();
    c.deviation = c.actual / c.model - 1.0;
    return c;
}

std::complex<long double> log_b_imag_axis(long double g) {
    using C = std::complex<long double>;
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double ln2 = 0.693147180559945309417232121458176568L;
    // sin(i pi g/4) = i sinh(pi g/4)
    long double x = pi * g / 4;
    C log_sin(x - ln2 + std::log1p(-std::exp(-2 * x)), pi / 2);
    C s(0.5L, g);
    C log_a = -s / 2.0L * std::log(pi) + ln2 + lgamma_ld(1.0L + s / 2.0L) + std::log(s - 1.0L);
    return log_sin + log_a;
}

}  // namespace zetalab
