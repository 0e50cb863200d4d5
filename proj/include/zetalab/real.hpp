#pragma once

#include <mpfr.h>

#include <algorithm>
#include <complex>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

namespace zetalab {

// RAII wrapper over mpfr_t. Each value carries its own precision; binary
// operations round to the wider of the two operands.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double d, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, d, MPFR_RNDN); }
    Real(long n, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, n, MPFR_RNDN); }
    Real(int n, mpfr_prec_t prec) : Real(static_cast<long>(n), prec) {}
    Real(const std::string& s, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN);
    }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(const Real& o, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    void round_to(mpfr_prec_t p) { mpfr_prec_round(v_, p, MPFR_RNDN); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    // floor(log2|x|)+1, or a very negative number for zero
    long exponent() const { return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_)); }
    std::string str(int digits = 20) const;

    static Real pi(mpfr_prec_t p) { Real r(p); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
    static Real euler_gamma(mpfr_prec_t p) { Real r(p); mpfr_const_euler(r.v_, MPFR_RNDN); return r; }
    static Real log2(mpfr_prec_t p) { Real r(p); mpfr_const_log2(r.v_, MPFR_RNDN); return r; }
    static Real pow2(long e, mpfr_prec_t p) { Real r(1L, p); mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN); return r; }

    Real& operator+=(const Real& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    template <std::integral I> Real& operator+=(I n) { mpfr_add_si(v_, v_, static_cast<long>(n), MPFR_RNDN); return *this; }
    template <std::integral I> Real& operator-=(I n) { mpfr_sub_si(v_, v_, static_cast<long>(n), MPFR_RNDN); return *this; }
    template <std::integral I> Real& operator*=(I n) { mpfr_mul_si(v_, v_, static_cast<long>(n), MPFR_RNDN); return *this; }
    template <std::integral I> Real& operator/=(I n) { mpfr_div_si(v_, v_, static_cast<long>(n), MPFR_RNDN); return *this; }
    template <std::floating_point F> Real& operator+=(F d) { mpfr_add_d(v_, v_, static_cast<double>(d), MPFR_RNDN); return *this; }
    template <std::floating_point F> Real& operator-=(F d) { mpfr_sub_d(v_, v_, static_cast<double>(d), MPFR_RNDN); return *this; }
    template <std::floating_point F> Real& operator*=(F d) { mpfr_mul_d(v_, v_, static_cast<double>(d), MPFR_RNDN); return *this; }
    template <std::floating_point F> Real& operator/=(F d) { mpfr_div_d(v_, v_, static_cast<double>(d), MPFR_RNDN); return *this; }

    Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

private:
    void widen(const Real& o) {
        if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
    }
    mpfr_t v_;
};

inline mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

#define ZL_REAL_BINOP(OP, FN)                                                              \
    inline Real operator OP(const Real& a, const Real& b) {                                \
        Real r(wider(a, b));                                                               \
        FN(r.get(), a.get(), b.get(), MPFR_RNDN);                                          \
        return r;                                                                          \
    }                                                                                      \
    template <std::integral I> inline Real operator OP(const Real& a, I n) {               \
        Real r(a); r OP## = n; return r;                                                   \
    }                                                                                      \
    template <std::floating_point F> inline Real operator OP(const Real& a, F d) {         \
        Real r(a); r OP## = d; return r;                                                   \
    }
ZL_REAL_BINOP(+, mpfr_add)
ZL_REAL_BINOP(-, mpfr_sub)
ZL_REAL_BINOP(*, mpfr_mul)
ZL_REAL_BINOP(/, mpfr_div)
#undef ZL_REAL_BINOP

template <std::integral I> inline Real operator+(I n, const Real& a) { return a + n; }
template <std::integral I> inline Real operator*(I n, const Real& a) { return a * n; }
template <std::integral I> inline Real operator-(I n, const Real& a) {
    Real r(a.prec()); mpfr_si_sub(r.get(), static_cast<long>(n), a.get(), MPFR_RNDN); return r;
}
template <std::integral I> inline Real operator/(I n, const Real& a) {
    Real r(a.prec()); mpfr_si_div(r.get(), static_cast<long>(n), a.get(), MPFR_RNDN); return r;
}
template <std::floating_point F> inline Real operator+(F d, const Real& a) { return a + d; }
template <std::floating_point F> inline Real operator*(F d, const Real& a) { return a * d; }
template <std::floating_point F> inline Real operator-(F d, const Real& a) {
    Real r(a.prec()); mpfr_d_sub(r.get(), static_cast<double>(d), a.get(), MPFR_RNDN); return r;
}
template <std::floating_point F> inline Real operator/(F d, const Real& a) {
    Real r(a.prec()); mpfr_d_div(r.get(), static_cast<double>(d), a.get(), MPFR_RNDN); return r;
}

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()); }
inline bool operator<(const Real& a, double d) { return mpfr_cmp_d(a.get(), d) < 0; }
inline bool operator>(const Real& a, double d) { return mpfr_cmp_d(a.get(), d) > 0; }
inline bool operator<=(const Real& a, double d) { return mpfr_cmp_d(a.get(), d) <= 0; }
inline bool operator>=(const Real& a, double d) { return mpfr_cmp_d(a.get(), d) >= 0; }

#define ZL_REAL_UNARY(NAME, FN)                                                            \
    inline Real NAME(const Real& a) { Real r(a.prec()); FN(r.get(), a.get(), MPFR_RNDN); return r; }
ZL_REAL_UNARY(abs, mpfr_abs)
ZL_REAL_UNARY(sqrt, mpfr_sqrt)
ZL_REAL_UNARY(exp, mpfr_exp)
ZL_REAL_UNARY(log, mpfr_log)
ZL_REAL_UNARY(log1p, mpfr_log1p)
ZL_REAL_UNARY(expm1, mpfr_expm1)
ZL_REAL_UNARY(sin, mpfr_sin)
ZL_REAL_UNARY(cos, mpfr_cos)
ZL_REAL_UNARY(tan, mpfr_tan)
ZL_REAL_UNARY(atan, mpfr_atan)
ZL_REAL_UNARY(sinh, mpfr_sinh)
ZL_REAL_UNARY(cosh, mpfr_cosh)
ZL_REAL_UNARY(tanh, mpfr_tanh)
ZL_REAL_UNARY(gamma, mpfr_gamma)
ZL_REAL_UNARY(lngamma, mpfr_lngamma)
ZL_REAL_UNARY(digamma, mpfr_digamma)
ZL_REAL_UNARY(zeta, mpfr_zeta)
ZL_REAL_UNARY(eint, mpfr_eint)
#undef ZL_REAL_UNARY

inline Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.get(), a.get()); return r; }
inline Real round(const Real& a) { Real r(a.prec()); mpfr_round(r.get(), a.get()); return r; }

inline Real atan2(const Real& y, const Real& x) {
    Real r(wider(y, x)); mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN); return r;
}
inline Real pow(const Real& a, const Real& b) {
    Real r(wider(a, b)); mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN); return r;
}
inline Real pow(const Real& a, long n) {
    Real r(a.prec()); mpfr_pow_si(r.get(), a.get(), n, MPFR_RNDN); return r;
}
inline Real hypot(const Real& a, const Real& b) {
    Real r(wider(a, b)); mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN); return r;
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }
inline Real ldexp(const Real& a, long e) {
    Real r(a.prec()); mpfr_mul_2si(r.get(), a.get(), e, MPFR_RNDN); return r;
}
inline void sin_cos(const Real& a, Real& s, Real& c) {
    s.round_to(a.prec()); c.round_to(a.prec());
    mpfr_sin_cos(s.get(), c.get(), a.get(), MPFR_RNDN);
}

inline std::ostream& operator<<(std::ostream& os, const Real& r) { return os << r.str(20); }

// Complex number as a pair of Reals sharing a precision.
class Complex {
public:
    explicit Complex(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
    Complex(const Real& re) : re_(re), im_(re.prec()) {}
    Complex(const Real& re, const Real& im) : re_(re), im_(im) {
        if (re_.prec() < im_.prec()) re_.round_to(im_.prec());
        if (im_.prec() < re_.prec()) im_.round_to(re_.prec());
    }
    Complex(double re, double im, mpfr_prec_t prec) : re_(re, prec), im_(im, prec) {}
    Complex(std::complex<double> z, mpfr_prec_t prec) : re_(z.real(), prec), im_(z.imag(), prec) {}

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    Real& re() { return re_; }
    Real& im() { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }
    void round_to(mpfr_prec_t p) { re_.round_to(p); im_.round_to(p); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

    static Complex i(mpfr_prec_t p) { return Complex(0.0, 1.0, p); }

    Complex& operator+=(const Complex& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Complex& operator-=(const Complex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& r) { re_ *= r; im_ *= r; return *this; }
    Complex& operator/=(const Real& r) { re_ /= r; im_ /= r; return *this; }
    template <typename N> requires std::is_arithmetic_v<N>
    Complex& operator+=(N n) { re_ += n; return *this; }
    template <typename N> requires std::is_arithmetic_v<N>
    Complex& operator-=(N n) { re_ -= n; return *this; }
    template <typename N> requires std::is_arithmetic_v<N>
    Complex& operator*=(N n) { re_ *= n; im_ *= n; return *this; }
    template <typename N> requires std::is_arithmetic_v<N>
    Complex& operator/=(N n) { re_ /= n; im_ /= n; return *this; }

    Complex operator-() const { return Complex(-re_, -im_); }

private:
    Real re_, im_;
};

inline Complex operator+(Complex a, const Complex& b) { a += b; return a; }
inline Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
inline Complex operator*(Complex a, const Complex& b) { a *= b; return a; }
inline Complex operator/(Complex a, const Complex& b) { a /= b; return a; }
inline Complex operator*(Complex a, const Real& b) { a *= b; return a; }
inline Complex operator*(const Real& b, Complex a) { a *= b; return a; }
inline Complex operator/(Complex a, const Real& b) { a /= b; return a; }
inline Complex operator+(Complex a, const Real& b) { a.re() += b; return a; }
inline Complex operator-(Complex a, const Real& b) { a.re() -= b; return a; }
inline Complex operator+(const Real& b, Complex a) { a.re() += b; return a; }
inline Complex operator-(const Real& b, const Complex& a) { return Complex(b - a.re(), -a.im()); }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator*(Complex a, N n) { a *= n; return a; }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator*(N n, Complex a) { a *= n; return a; }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator/(Complex a, N n) { a /= n; return a; }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator+(Complex a, N n) { a.re() += n; return a; }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator-(Complex a, N n) { a.re() -= n; return a; }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator+(N n, Complex a) { a.re() += n; return a; }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator-(N n, const Complex& a) { return Complex(n - a.re(), -a.im()); }
template <typename N> requires std::is_arithmetic_v<N>
inline Complex operator/(N n, const Complex& a) { return Complex(Real(static_cast<double>(n), a.prec())) / a; }

inline Complex conj(const Complex& z) { return Complex(z.re(), -z.im()); }
inline Real abs(const Complex& z) { return hypot(z.re(), z.im()); }
inline Real norm(const Complex& z) { return z.re() * z.re() + z.im() * z.im(); }
inline Real arg(const Complex& z) { return atan2(z.im(), z.re()); }
inline Complex mul_i(const Complex& z) { return Complex(-z.im(), z.re()); }

Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex pow(const Complex& z, const Complex& w);
Complex pow(const Complex& z, long n);
Complex pow(const Real& base, const Complex& w);  // base > 0
Complex polar(const Real& r, const Real& theta);

std::ostream& operator<<(std::ostream& os, const Complex& z);

}  // namespace zetalab
