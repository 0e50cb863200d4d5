#include "zetalab/real.hpp"

#include <cstdlib>

namespace zetalab {

std::string Real::str(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

Complex& Complex::operator*=(const Complex& o) {
    Real a = re_ * o.re_ - im_ * o.im_;
    Real b = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(a);
    im_ = std::move(b);
    return *this;
}

Complex& Complex::operator/=(const Complex& o) {
    // scaled division avoids overflow in |o|^2
    if (abs(o.re_) >= abs(o.im_)) {
        Real r = o.im_ / o.re_;
        Real d = o.re_ + o.im_ * r;
        Real a = (re_ + im_ * r) / d;
        Real b = (im_ - re_ * r) / d;
        re_ = std::move(a);
        im_ = std::move(b);
    } else {
        Real r = o.re_ / o.im_;
        Real d = o.re_ * r + o.im_;
        Real a = (re_ * r + im_) / d;
        Real b = (im_ * r - re_) / d;
        re_ = std::move(a);
        im_ = std::move(b);
    }
    return *this;
}

Complex polar(const Real& r, const Real& theta) {
    Real s(theta.prec()), c(theta.prec());
    sin_cos(theta, s, c);
    return Complex(r * c, r * s);
}

Complex exp(const Complex& z) { return polar(exp(z.re()), z.im()); }

Complex log(const Complex& z) { return Complex(log(abs(z)), arg(z)); }

Complex sqrt(const Complex& z) {
    if (z.re().is_zero() && z.im().is_zero()) return Complex(z.prec());
    Real m = abs(z);
    Real t = sqrt((m + abs(z.re())) / 2);
    if (z.re().sign() >= 0) return Complex(t, z.im() / (2 * t));
    Real u = z.im().sign() < 0 ? -t : t;
    return Complex(abs(z.im()) / (2 * t), u);
}

Complex sin(const Complex& z) {
    Real s(z.prec()), c(z.prec());
    sin_cos(z.re(), s, c);
    return Complex(s * cosh(z.im()), c * sinh(z.im()));
}

Complex cos(const Complex& z) {
    Real s(z.prec()), c(z.prec());
    sin_cos(z.re(), s, c);
    return Complex(c * cosh(z.im()), -(s * sinh(z.im())));
}

Complex pow(const Complex& z, const Complex& w) {
    if (z.re().is_zero() && z.im().is_zero()) return Complex(z.prec());
    return exp(w * log(z));
}

Complex pow(const Real& base, const Complex& w) {
    Real lb = log(base);
    return polar(exp(w.re() * lb), w.im() * lb);
}

Complex pow(const Complex& z, long n) {
    Complex result(Real(1L, z.prec()));
    Complex b = z;
    bool neg = n < 0;
    unsigned long e = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    while (e) {
        if (e & 1UL) result *= b;
        e >>= 1;
        if (e) b *= b;
    }
    if (neg) return Complex(Real(1L, z.prec())) / result;
    return result;
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
    return os << "(" << z.re().str(20) << ", " << z.im().str(20) << ")";
}

}  // namespace zetalab
