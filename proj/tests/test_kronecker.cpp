#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "zetalab/kronecker.hpp"

#include <cmath>
#include <random>

using namespace zetalab;
using oracle::rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_point(std::mt19937_64& g, long n) {
    std::uniform_real_distribution<double> u(-10, 10);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(g);
    return v;
}

// circle distance by brute force over the nearest lifts
double circle_dist_oracle(double a) {
    double best = 1e300;
    for (long m = -20; m <= 20; ++m) best = std::min(best, std::abs(a - 2 * kPi * static_cast<double>(m)));
    return best;
}

ZSequence geometric_z(long n, double r) {
    ZSequence z;
    for (long k = 1; k <= n; ++k) z.z.push_back(std::polar(std::pow(r, static_cast<double>(k)), 0.7 * static_cast<double>(k)));
    z.tail_abs = std::pow(r, static_cast<double>(n + 1)) / (1 - r);
    return z;
}

std::vector<double> prime_logs(long n) {
    std::vector<double> a;
    long lim = 16;
    std::vector<long> ps;
    while (static_cast<long>((ps = primes_up_to(lim)).size()) < n) lim *= 2;
    for (long i = 0; i < n; ++i) a.push_back(std::log(static_cast<double>(ps[static_cast<std::size_t>(i)])));
    return a;
}

}  // namespace

TEST_CASE("circle reduction and d_N metric axioms") {
    CHECK(circle_reduce(kPi) == doctest::Approx(kPi));
    CHECK(circle_reduce(-kPi) == doctest::Approx(kPi));
    CHECK(circle_reduce(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    auto g = rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto u = random_point(g, 4), v = random_point(g, 4), w = random_point(g, 4);
        const double uv = d_N(u, v, 4), vw = d_N(v, w, 4), uw = d_N(u, w, 4);
        CHECK(uv >= 0);
        CHECK(uv <= kPi);
        CHECK(d_N(u, u, 4) == 0);
        CHECK(uv == d_N(v, u, 4));
        CHECK(uw <= uv + vw + 1e-12);
        double m = 0;
        for (std::size_t k = 0; k < 4; ++k) m = std::max(m, circle_dist_oracle(u[k] - v[k]));
        CHECK(uv == doctest::Approx(m).epsilon(1e-12));
    }
    // shift by 2 pi in one coordinate is invisible
    std::vector<double> a{0.3, 1.0}, b{0.3 + 2 * kPi, 1.0 - 4 * kPi};
    CHECK(d_N(a, b, 2) < 1e-14);
    CHECK_THROWS_AS(d_N(a, b, 3), NumericError);
}

TEST_CASE("g_k and G on simple sequences") {
    ZSequence zero;
    zero.z.assign(5, 0.0);
    CHECK(G_full(zero, {1, 2, 3, 4, 5}).value == 1.0);
    ZSequence half;
    half.z = {0.5};
    CHECK(G_partial(half, {kPi}, 1) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(G_partial(half, {0}, 1) == doctest::Approx(0.5).epsilon(1e-15));
    // 1 - |z| <= g_k <= 1 + |z|
    const ZSequence z = geometric_z(30, 0.6);
    auto g = rng(11);
    std::uniform_real_distribution<double> th(-kPi, kPi);
    for (int i = 0; i < 500; ++i) {
        const long k = 1 + i % 30;
        const double a = std::abs(z.z[static_cast<std::size_t>(k - 1)]), v = g_k(z, k, th(g));
        CHECK(v >= 1 - a - 1e-15);
        CHECK(v <= 1 + a + 1e-15);
    }
    CHECK_THROWS_AS(g_k(z, 31, 0), NumericError);
    ZSequence bad;
    bad.z = {1.0};
    CHECK_THROWS_AS(bad.validate(), NumericError);
}

TEST_CASE("G_N converges to G within the tail model") {
    // prefix of 12 against a long product of 400 factors as the oracle
    const ZSequence longz = geometric_z(400, 0.7);
    ZSequence shortz = geometric_z(12, 0.7);
    auto g = rng(3);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto y = random_point(g, 400);
        const GValue s = G_full(shortz, y);
        const double ref = G_partial(longz, y, 400);
        CHECK(std::abs(ref - s.value) <= s.bound);
        worst = std::max(worst, std::abs(ref - s.value) / s.bound);
    }
    // the bound is not wildly loose either
    CHECK(worst > 1e-3);
}

TEST_CASE("Lipschitz surrogate and the V_N, D_N composition") {
    const ZSequence z = geometric_z(20, 0.5);
    double L = 0;
    for (auto w : z.z) L += std::abs(w);
    auto g = rng(5);
    std::uniform_real_distribution<double> small(-0.3, 0.3);
    for (int i = 0; i < 300; ++i) {
        const auto u = random_point(g, 20);
        auto v = u;
        for (auto& x : v) x += small(g);
        // sum over coordinates of |z(k)| d(u(k), v(k)) times the other factors, bounded by the product of maxima
        double prod = 1;
        for (auto w : z.z) prod *= 1 + std::abs(w);
        CHECK(std::abs(G_partial(z, u, 20) - G_partial(z, v, 20)) <= prod * L * d_N(u, v, 20) + 1e-14);
        // G(x) - G(y) = (V_N(x)) + D_N(x, y) - V_N(y) exactly up to rounding
        for (long N : {1L, 5L, 19L}) {
            const double lhs = G_partial(z, u, 20) - G_partial(z, v, 20);
            const double r = V_N(z, u, N) + D_N(z, u, v, N) - V_N(z, v, N);
            CHECK(std::abs(lhs - r) < 1e-14);
            CHECK(std::abs(lhs) <= std::abs(V_N(z, u, N)) + std::abs(D_N(z, u, v, N)) + std::abs(V_N(z, v, N)) + 1e-14);
        }
    }
    CHECK(V_N(z, random_point(g, 20), 20) == 0);
}

TEST_CASE("kronecker search") {
    SUBCASE("N = 1 toward pi with alpha = log 2") {
        const std::vector<double> a{std::log(2.0)}, tgt{kPi};
        KroneckerResult r = kronecker_search(a, tgt, 1, 0, SearchMode::Real, 100000, 0.01);
        CHECK_FALSE(r.budget_exhausted);
        CHECK(r.d < 0.01);
        // grid oracle: the smallest t > 0 hitting pi is pi / log 2
        CHECK(r.t == doctest::Approx(kPi / std::log(2.0)).epsilon(1e-6));
        CHECK(std::abs(circle_reduce(r.t * a[0] - kPi)) == doctest::Approx(r.d));
    }
    SUBCASE("N = 2 with alpha = (log 2, log 3) toward (pi, 0)") {
        const std::vector<double> a{std::log(2.0), std::log(3.0)}, tgt{kPi, 0};
        KroneckerResult r = kronecker_search(a, tgt, 2, 0, SearchMode::Real, 1000000, 0.1);
        CHECK(r.d < 0.1);
        CHECK(d_N({r.t * a[0], r.t * a[1]}, tgt, 2) == doctest::Approx(r.d));
        // fine-grid oracle: a hit below 0.1 exists no later than the search result
        double first = -1;
        for (double t = 0.001; t <= r.t + 0.001 && first < 0; t += 0.001)
            if (d_N({t * a[0], t * a[1]}, tgt, 2) < 0.1) first = t;
        CHECK(first > 0);
        CHECK(first <= r.t + 0.001);
    }
    SUBCASE("integral mode") {
        const std::vector<double> a{std::log(2.0), std::log(3.0)}, tgt{1.0, -2.0};
        KroneckerResult r = kronecker_search(a, tgt, 2, 5, SearchMode::Integral, 100000, 0.3);
        CHECK(r.d < 0.3);
        CHECK(r.t == std::floor(r.t));
        CHECK(r.t > 5);
    }
    SUBCASE("budget exhaustion is flagged and the best value is kept") {
        const std::vector<double> a{std::log(2.0), std::log(3.0), std::log(5.0)}, tgt{kPi, 0, 1};
        KroneckerResult r = kronecker_search(a, tgt, 3, 0, SearchMode::Real, 50, 1e-9);
        CHECK(r.budget_exhausted);
        CHECK(std::isfinite(r.d));
    }
    SUBCASE("preconditions") {
        const std::vector<double> a(9, 1.0), t(9, 0.0);
        CHECK_THROWS_AS(kronecker_search(a, t, 9, 0, SearchMode::Real, 10), NumericError);
        CHECK_THROWS_AS(kronecker_search(a, t, 2, -1, SearchMode::Real, 10), NumericError);
        CHECK_THROWS_AS(kronecker_search({0.0}, {1.0}, 1, 0, SearchMode::Real, 10), NumericError);
    }
}

TEST_CASE("lemma 2 witnesses") {
    const auto alpha = prime_logs(3);
    SUBCASE("z(1) = 1/2") {
        ZSequence z;
        z.z = {0.5, 0.0, 0.0};
        Lemma2Witness up = lemma2_witness(z, alpha, +1, 0);
        REQUIRE(up.found);
        CHECK(up.k_prime == 1);
        CHECK(up.theta == doctest::Approx(kPi));
        CHECK(up.G_t > up.G_0);
        CHECK(up.margin > 0);
        Lemma2Witness down = lemma2_witness(z, alpha, -1, 0);
        CHECK_FALSE(down.found);
        CHECK(down.failure == "no admissible coordinate for this sign");
    }
    SUBCASE("z(1) = -1/2 swaps the roles") {
        ZSequence z;
        z.z = {-0.5, 0.0, 0.0};
        CHECK_FALSE(lemma2_witness(z, alpha, +1, 0).found);
        Lemma2Witness down = lemma2_witness(z, alpha, -1, 3);
        REQUIRE(down.found);
        CHECK(down.G_t < down.G_0);
        CHECK(down.search.t > 3);
    }
    SUBCASE("character mod 5 at x = 2 admits both signs") {
        const auto chi = parse_character("mod:5,index:1");
        const ZSequence z = zsequence_from_character(chi, 2.0, 200);
        auto om = prime_logs(200);
        for (auto& a : om) a = -a;
        for (int s : {+1, -1}) {
            Lemma2Witness w = lemma2_witness(z, om, s, 10);
            REQUIRE(w.found);
            CHECK(s * (w.G_t - w.G_0) > 0);
            CHECK(w.search.t > 10);
        }
    }
    ZSequence z;
    z.z = {0.5};
    CHECK_THROWS_AS(lemma2_witness(z, alpha, 0, 0), NumericError);
}

TEST_CASE("z sequence from a character") {
    const auto chi = parse_character("mod:5,index:1");
    const ZSequence z = zsequence_from_character(chi, 2.0, 200);
    CHECK(z.z.size() == 200);
    CHECK(z.z[0] == std::complex<double>(chi(2)) * 0.25);
    CHECK(z.z[2] == std::complex<double>(0, 0));   // p = 5 divides the modulus
    // integral tail against a direct prime sum to 10^6
    double direct = 0;
    const auto ps = primes_up_to(1000000);
    for (std::size_t i = 200; i < ps.size(); ++i) direct += std::pow(static_cast<double>(ps[i]), -2.0);
    CHECK(direct <= z.tail_abs);
    CHECK(z.tail_abs < 20 * direct);
    CHECK_THROWS_AS(zsequence_from_character(chi, 1.0), NumericError);
}

TEST_CASE("corollary 3 demo") {
    const auto chi = parse_character("mod:5,index:1");
    CHECK(corollary3_condition(chi) == 1);
    CHECK(corollary3_condition(parse_character("mod:5,index:2")) == 2);
    CHECK(corollary3_condition(parse_character("mod:5,index:0")) == 0);

    Corollary3Result r = corollary3_demo(chi, 2.0, 10.0);
    REQUIRE(r.accepted);
    CHECK(r.holds);
    CHECK(r.t > 10);
    CHECK(r.t_prime > 10);
    CHECK(r.L_t < r.L_x);
    CHECK(r.L_x < r.L_tp);
    CHECK(r.margin_low > 10 * r.budget);
    CHECK(r.margin_high > 10 * r.budget);
    // |L(x, chi)| G(0) = 1 through the Euler product identity
    CHECK(r.identity_residual <= r.identity_budget);
    // independent value: the Euler product with the default prime cap against the long product of |1 - chi(p) p^{-s}|^{-1}
    double prod = 1;
    for (long p : primes_up_to(200000)) prod /= std::abs(1.0 - chi(p) * std::pow(static_cast<double>(p), -2.0));
    CHECK(r.L_x == doctest::Approx(prod).epsilon(1e-8));

    Corollary3Result pr = corollary3_demo(parse_character("mod:5,index:0"), 2.0, 10.0);
    CHECK_FALSE(pr.accepted);
    CHECK_FALSE(pr.rejection.empty());
    CHECK_THROWS_AS(corollary3_demo(chi, 1.01, 10.0), NumericError);
}
