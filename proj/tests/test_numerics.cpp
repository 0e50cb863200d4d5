#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "zetalab/numerics.hpp"

#include <cmath>
#include <random>

using namespace zetalab;

TEST_CASE("precision context validation") {
    CHECK_THROWS_AS(PrecisionContext(32, 1e-10), NumericError);
    CHECK_THROWS_AS(PrecisionContext(128, -1.0), NumericError);
    PrecisionContext c(128, 1e-30);
    CHECK(c.with_bits(256).bits == 256);
    CHECK(PrecisionContext::with_tol_exp2(256, -400).abs_tol == Real::pow2(-400, 64));
}

TEST_CASE("strip membership") {
    Strip s(0.5, 4.0);
    CHECK(s.contains(1.0));
    CHECK_FALSE(s.contains(0.5));
    CHECK(Strip(0.5, 4.0, true, false).contains(0.5));
    CHECK(s.margin(1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Strip(2.0, 1.0), NumericError);
}

TEST_CASE("finite quadrature of polynomials and oscillatory integrands") {
    PrecisionContext ctx(128, 1e-30);
    auto r = quad_finite([](const Real& x) { return Complex(x * x); }, Real(0L, 128), Real(1L, 128), ctx);
    Real third = Real(1L, 128) / 3L;
    CHECK(abs(r.value.re() - third).to_double() <= 1e-30);
    // int_0^pi sin(20x) dx = (1 - cos(20 pi))/20 = 0
    auto s = quad_finite([](const Real& x) { return Complex(sin(x * 20L)); }, Real(0L, 128), Real::pi(128), ctx);
    CHECK(abs(s.value.re()).to_double() <= 1e-28);
    // reported bound covers the actual error
    Real e = exp(Real(1L, 128)) - 1L;
    auto t = quad_finite([](const Real& x) { return Complex(exp(x)); }, Real(0L, 128), Real(1L, 128), ctx);
    CHECK(abs(t.value.re() - e) <= t.total() + Real(1e-35, 64));
}

TEST_CASE("semi-infinite quadrature with decay hint") {
    PrecisionContext ctx(128, 1e-25);
    DecayHint h{1.0, 1.0, 0.0};
    auto r = quad_semiinfinite([](const Real& y) { return Complex(exp(-y)); }, Real(0L, 128), h, ctx);
    CHECK(abs(r.value.re() - 1L).to_double() <= 1e-24);
    CHECK(r.tail_bound.to_double() > 0);
    // a hint claiming faster decay than the integrand is caught on the nodes
    DecayHint bad{3.0, 1.0, 1.0};
    CHECK_THROWS_AS(quad_semiinfinite([](const Real& y) { return Complex(exp(-y)); }, Real(0L, 128), bad, ctx),
                    NumericError);
}

TEST_CASE("non-finite integrand is rejected") {
    PrecisionContext ctx(128, 1e-20);
    CHECK_THROWS_AS(quad_finite([](const Real& y) { return Complex(Real(1L, 128) / (y - 0.5)); }, Real(0L, 128),
                                Real(1L, 128), ctx),
                    NumericError);
}

TEST_CASE("compensated summation is exact on cancelling data") {
    PrecisionContext ctx(128, 1e-30);
    std::vector<Real> t{Real(1e30, 128), Real(1L, 128), Real(-1e30, 128)};
    auto r = sum_compensated(t, ctx);
    CHECK(r.value.re() == Real(1L, 64));
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Complex> c;
    Real exact(0L, 2000);
    for (int i = 0; i < 1000; ++i) {
        double x = u(g);
        c.emplace_back(Real(x, 128));
        exact += Real(x, 2000);
    }
    auto s = sum_compensated(c, ctx);
    CHECK(abs(s.value.re() - exact) <= s.total());
}

TEST_CASE("root finding") {
    PrecisionContext ctx(128, 1e-35);
    Real r = find_root([](const Real& x) { return x * x - 2L; }, Real(0L, 128), Real(2L, 128), ctx);
    CHECK(abs(r - sqrt(Real(2L, 128))).to_double() <= 1e-34);
    CHECK_THROWS_AS(find_root([](const Real& x) { return x * x + 1L; }, Real(0L, 128), Real(2L, 128), ctx),
                    NumericError);
}

TEST_CASE("log envelope fit recovers a power law") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 1; i <= 200; ++i) {
        double g = 10.0 * i;
        pts.emplace_back(g, 3.0 * std::pow(g, -0.4) * (1.0 + 0.5 * ((i * 7919) % 13) / 13.0));
    }
    LineFit f = fit_log_envelope(pts);
    CHECK(f.slope == doctest::Approx(-0.4).epsilon(0.05));
    CHECK(f.envelope_points >= 2);
    std::vector<std::pair<double, double>> few(pts.begin(), pts.begin() + 5);
    CHECK_THROWS_AS(fit_log_envelope(few), NumericError);
}

TEST_CASE("property: quadrature is linear") {
    PrecisionContext ctx(128, 1e-28);
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 5; ++trial) {
        double a = u(g), b = u(g);
        auto f1 = [](const Real& x) { return Complex(cos(x)); };
        auto f2 = [](const Real& x) { return Complex(x * x * x); };
        auto lhs = quad_finite([&](const Real& x) { return f1(x) * a + f2(x) * b; }, Real(0L, 128), Real(1L, 128), ctx);
        auto r1 = quad_finite(f1, Real(0L, 128), Real(1L, 128), ctx);
        auto r2 = quad_finite(f2, Real(0L, 128), Real(1L, 128), ctx);
        Complex rhs = r1.value * a + r2.value * b;
        CHECK(abs(lhs.value - rhs).to_double() <= 1e-26);
    }
}
