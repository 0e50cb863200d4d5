#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "zetalab/specfn.hpp"

#include <cmath>
#include <random>

using namespace zetalab;

namespace {
PrecisionContext ctx128() { return PrecisionContext(128, 1e-30); }
Complex c(double re, double im = 0.0, long bits = 128) { return Complex(re, im, bits); }
}  // namespace

TEST_CASE("Bernoulli numbers") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == mpq_class(-1, 2));
    CHECK(bernoulli(2) == mpq_class(1, 6));
    CHECK(bernoulli(4) == mpq_class(-1, 30));
    CHECK(bernoulli(12) == mpq_class(-691, 2730));
    CHECK(bernoulli(7) == 0);
}

TEST_CASE("zeta at special points") {
    auto ctx = ctx128();
    Real pi = Real::pi(128);
    CHECK(abs(zeta(c(2), ctx) - pi * pi / 6L).to_double() <= 1e-20);
    CHECK(abs(zeta(c(0), ctx) + 0.5).to_double() <= 1e-30);
    CHECK(abs(zeta(c(-1), ctx) + Real(1L, 128) / 12L).to_double() <= 1e-30);
    CHECK(abs(zeta(c(-2), ctx)).to_double() <= 1e-30);
    CHECK_THROWS_AS(zeta(c(1), ctx), NumericError);
    // real values against MPFR's independent zeta
    for (double x : {0.5, 3.0, 7.25, -3.5}) {
        Real ref = zetalab::zeta(Real(x, 160));
        CHECK(abs(zeta(c(x), ctx) - ref).to_double() <= 1e-30 * std::max(1.0, std::abs(ref.to_double())));
    }
}

TEST_CASE("Euler-Maclaurin parameters do not change the value") {
    auto ctx = ctx128();
    Complex a = zeta(c(0.5), ctx);
    Complex b = zeta(c(0.5), EulerMaclaurinParams{40, 30}, ctx);
    CHECK(abs(a - b).to_double() <= 1e-20);
    Complex s(0.5, 14.134725142, 128);
    CHECK(abs(zeta(s, EulerMaclaurinParams{20, 25}, ctx) - zeta(s, EulerMaclaurinParams{60, 40}, ctx)).to_double() <= 1e-20);
}

TEST_CASE("complex zeta against the Borwein oracle") {
    auto ctx = ctx128();
    for (auto [x, y] : {std::pair{0.5, 14.134725142}, {0.5, 21.0}, {2.5, -7.0}, {-1.5, 3.0}, {0.2, 40.0}}) {
        Complex s = c(x, y);
        Complex z = zeta(s, ctx);
        Complex o = oracle::borwein_zeta(s, 128);
        CHECK(oracle::dist(z, o) <= 1e-28 * std::max(1.0, abs(o).to_double()));
    }
    // near the first zero the value is tiny
    Complex rho(Real(0.5, 128), Real("14.134725141734693790457251983562470270784", 128));
    CHECK(abs(zeta(rho, ctx)).to_double() < 1e-30);
}

TEST_CASE("zeta derivative") {
    auto ctx = ctx128();
    // zeta'(2) = -0.93754825431584375370...: check against a central difference of the Borwein oracle
    Real h = Real::pow2(-40, 256);
    Complex s = c(2, 0, 256);
    Complex fd = (oracle::borwein_zeta(s + Complex(h), 256) - oracle::borwein_zeta(s - Complex(h), 256)) / (h * 2L);
    CHECK(abs(zeta_prime(c(2), ctx) - fd).to_double() <= 1e-20);
    CHECK_NOTHROW(zeta_prime_checked(c(0.5, 30.0), ctx));
    // trivial zero is simple: zeta'(-2) = -zeta(3)/(4 pi^2)
    Real pi = Real::pi(128);
    Real expected = -zetalab::zeta(Real(3L, 128)) / (pi * pi * 4L);
    CHECK(abs(zeta_prime(c(-2), ctx) - expected).to_double() <= 1e-28);
}

TEST_CASE("gamma, log gamma and digamma") {
    auto ctx = ctx128();
    Real pi = Real::pi(128);
    CHECK(abs(gamma(c(0.5), ctx) - sqrt(pi)).to_double() <= 1e-35);
    CHECK(abs(gamma(c(5), ctx) - 24L).to_double() <= 1e-30);
    CHECK_THROWS_AS(gamma(c(-3), ctx), NumericError);
    for (auto [x, y] : {std::pair{0.25, 0.0}, {3.5, 2.0}, {0.7, -30.0}, {12.0, 5.0}}) {
        Complex z = c(x, y);
        CHECK(oracle::rel(gamma(z, ctx), oracle::spouge_gamma(z, 128)) <= 1e-30);
    }
    // reflection region against the oracle via Gamma(z)Gamma(1-z) = pi/sin(pi z)
    Complex z = c(-2.3, 1.1);
    Complex refl = Complex(pi) / (sin(z * pi) * oracle::spouge_gamma(1L - z, 128));
    CHECK(oracle::rel(gamma(z, ctx), refl) <= 1e-28);
    CHECK(abs(digamma(c(1), ctx) + Real::euler_gamma(128)).to_double() <= 1e-30);
    Complex w = c(4.2, 3.3);
    CHECK(oracle::dist(exp(lgamma(w, ctx)), gamma(w, ctx)) <= 1e-28 * abs(gamma(w, ctx)).to_double());
}

TEST_CASE("Hurwitz zeta") {
    auto ctx = ctx128();
    Real pi = Real::pi(128);
    CHECK(abs(hurwitz_zeta(c(2), Real(0.5, 128), ctx) - pi * pi / 2L).to_double() <= 1e-28);
    CHECK(abs(hurwitz_zeta(c(3), Real(1L, 128), ctx) - zetalab::zeta(Real(3L, 128))).to_double() <= 1e-30);
}

TEST_CASE("exponential integral E1") {
    auto ctx = ctx128();
    for (double x : {0.1, 1.0, 7.5, 30.0}) {
        Real ei(128);
        Real mx(-x, 128);
        mpfr_eint(ei.get(), mx.get(), MPFR_RNDN);  // Ei(-x) = -E1(x)
        CHECK(abs(exp_integral_e1(c(x), ctx) + ei).to_double() <= 1e-30 * std::max(1.0, abs(ei).to_double()));
    }
    Complex z = c(-3.9, 0.5);
    CHECK(oracle::dist(e1_series(z, ctx), e1_continued_fraction(z, ctx)) <= 1e-25);
    CHECK_THROWS_AS(exp_integral_e1(c(0), ctx), NumericError);
    CHECK_THROWS_AS(exp_integral_e1(c(-1), ctx), NumericError);
}

TEST_CASE("fast critical-line zeta matches the arbitrary precision route") {
    FastCriticalZeta fz(2000.0);
    auto ctx = PrecisionContext(96, 1e-25);
    for (double t : {14.134725142, 100.0, 999.5, 1987.3}) {
        auto v = fz.eval(t, true);
        Complex ref = zeta(c(0.5, t, 96), ctx);
        CHECK(std::abs(v.zeta - std::complex<double>(ref.re().to_double(), ref.im().to_double())) <= 1e-11);
        Complex dref = zeta_prime(c(0.5, t, 96), ctx);
        CHECK(std::abs(v.dzeta - std::complex<double>(dref.re().to_double(), dref.im().to_double())) <= 1e-10);
    }
    Complex off = zeta(c(0.6, 500.0, 96), ctx);
    CHECK(std::abs(fz.eval_shifted(0.1, 500.0) - std::complex<double>(off.re().to_double(), off.im().to_double())) <= 1e-11);
    CHECK(std::abs(fz.hardy_z(14.134725141734693790)) < 1e-9);
    CHECK_THROWS_AS(fz.eval(3000.0), NumericError);
}

TEST_CASE("property: zeta commutes with conjugation") {
    auto ctx = PrecisionContext(96, 1e-25);
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> ux(-3, 4), uy(-40, 40);
    for (int i = 0; i < 10; ++i) {
        Complex s = c(ux(g), uy(g), 96);
        if (abs(s - 1L).to_double() < 0.1) continue;
        CHECK(oracle::dist(zeta(conj(s), ctx), conj(zeta(s, ctx))) <= 1e-25 * std::max(1.0, abs(zeta(s, ctx)).to_double()));
    }
}
