// Independent reference evaluations used only by the tests. None of these share code
// with the library routes they check.
#pragma once

#include "zetalab/real.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using zetalab::Complex;
using zetalab::Real;

// zeta(s) = eta(s)/(1 - 2^{1-s}), eta by Borwein's alternating-series acceleration
inline Complex borwein_zeta(const Complex& s, long bits) {
    const mpfr_prec_t p = bits + 64 + static_cast<long>(4.6 * std::abs(s.im().to_double()));
    Complex sw(Real(s.re(), p), Real(s.im(), p));
    const long n = static_cast<long>(0.8 * static_cast<double>(p)) + 20;
    // d_k = n sum_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    std::vector<Real> d(static_cast<std::size_t>(n + 1), Real(p));
    Real term(1L, p);  // i = 0 term times 1/n
    Real acc(0L, p);
    for (long i = 0; i <= n; ++i) {
        if (i == 0) {
            term = Real(1L, p) / n;
        } else {
            term *= Real((n + i - 1) * 4L, p) * (n - i + 1);
            term /= Real((2 * i - 1) * (2 * i), p);
        }
        acc += term;
        d[static_cast<std::size_t>(i)] = acc * n;
    }
    Complex sum(Real(0L, p), Real(0L, p));
    for (long k = 0; k < n; ++k) {
        Real w = d[static_cast<std::size_t>(k)] - d[static_cast<std::size_t>(n)];
        if (k % 2 == 1) w = -w;
        sum += pow(Real(k + 1, p), -sw) * w;
    }
    Complex eta = -sum / d[static_cast<std::size_t>(n)];
    Complex r = eta / (1L - pow(Real(2L, p), 1L - sw));
    r.round_to(bits);
    return r;
}

// Spouge's approximation, for Re z > 0
inline Complex spouge_gamma(const Complex& z_in, long bits) {
    const mpfr_prec_t p = 2 * bits + 64;
    const long a = static_cast<long>(0.35 * static_cast<double>(bits)) + 10;
    Complex z(Real(z_in.re(), p), Real(z_in.im(), p));
    z -= 1L;
    Real pi2 = Real::pi(p) * 2L;
    Complex sum(sqrt(pi2));
    Real fact(1L, p);
    for (long k = 1; k < a; ++k) {
        if (k > 1) fact *= (k - 1);
        Real ck = pow(Real(a - k, p), Real(k - 0.5, p)) * exp(Real(a - k, p)) / fact;
        if (k % 2 == 0) ck = -ck;
        sum += Complex(ck) / (z + k);
    }
    Complex za = z + a;
    Complex r = pow(za, z + 0.5) * exp(-za) * sum;
    r.round_to(bits);
    return r;
}

inline double rel(const Complex& a, const Complex& b) { return (abs(a - b) / abs(b)).to_double(); }
inline double dist(const Complex& a, const Complex& b) { return abs(a - b).to_double(); }

inline std::mt19937_64 rng(unsigned long seed) { return std::mt19937_64(seed); }

}  // namespace oracle
