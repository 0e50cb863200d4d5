#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "zetalab/lfunc.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace zetalab;

namespace {

PrecisionContext ctx64() { return PrecisionContext(64, 1e-15); }
PrecisionContext ctx128() { return PrecisionContext(128, 1e-30); }

const RamanujanSeries& tau_small() {
    static const RamanujanSeries t = tau_table(10000);
    return t;
}
const RamanujanSeries& tau_big() {
    static const RamanujanSeries t = tau_table_jacobi(100000);
    return t;
}

// q prod (1 - q^n)^24 to degree n, multiplying one factor at a time
std::vector<long long> tau_naive(int n) {
    std::vector<long long> p(static_cast<std::size_t>(n), 0);
    p[0] = 1;
    for (int m = 1; m < n; ++m)
        for (int r = 0; r < 24; ++r)
            for (int d = n - 1; d >= m; --d) p[static_cast<std::size_t>(d)] -= p[static_cast<std::size_t>(d - m)];
    std::vector<long long> tau(static_cast<std::size_t>(n + 1), 0);
    for (int d = 0; d < n; ++d) tau[static_cast<std::size_t>(d + 1)] = p[static_cast<std::size_t>(d)];
    return tau;
}

// sigma_11(n) mod 691
long sigma11_mod691(long n) {
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) {
            long p = 1;
            for (int i = 0; i < 11; ++i) p = p * (d % 691) % 691;
            s = (s + p) % 691;
        }
    return s;
}

long mod691(__int128 v) {
    long r = static_cast<long>(v % 691);
    return r < 0 ? r + 691 : r;
}

GrooveGrid desk_grid() {
    GrooveGrid g;
    g.xs = {0.25, 0.5, 0.75, 1.5};
    for (int i = -20; i <= 20; ++i) g.ts.push_back(0.5 * i);
    return g;
}

}  // namespace

TEST_CASE("character tables") {
    CHECK(enumerate_characters(1).size() == 1);
    CHECK(enumerate_characters(1)[0].principal);
    auto c4 = enumerate_characters(4);
    REQUIRE(c4.size() == 2);
    CHECK(c4[1].parity == 1);
    CHECK(c4[1](3) == CD(-1, 0));
    auto c5 = enumerate_characters(5);
    REQUIRE(c5.size() == 4);
    long nonreal = 0;
    for (const auto& c : c5) nonreal += c.real_valued ? 0 : 1;
    CHECK(nonreal == 2);

    for (long k = 1; k <= 24; ++k) {
        auto cs = enumerate_characters(k);
        long phi = 0;
        for (long n = 1; n <= k; ++n) phi += std::gcd(n, k) == 1;
        REQUIRE(static_cast<long>(cs.size()) == phi);
        for (std::size_t a = 0; a < cs.size(); ++a) {
            const auto& x = cs[a];
            CHECK_NOTHROW(x.validate());
            for (long n = 0; n < k; ++n) {
                if (std::gcd(n, k) != 1) REQUIRE(x(n) == CD(0, 0));
                for (long m = 0; m < k; ++m) REQUIRE(std::abs(x(n * m) - x(n) * x(m)) < 1e-12);
            }
            CHECK((x(k - 1) == CD(1, 0)) == (x.parity == 0));
            for (std::size_t b = 0; b < cs.size(); ++b) {
                CD s = 0;
                for (long n = 0; n < k; ++n) s += cs[a](n) * std::conj(cs[b](n));
                REQUIRE(std::abs(s - (a == b ? CD(static_cast<double>(phi), 0) : CD(0, 0))) < 1e-10);
            }
        }
    }
}

TEST_CASE("character labels") {
    auto c = parse_character("mod:5,index:1");
    CHECK(c.k == 5);
    CHECK(c.index == 1);
    CHECK(c.label() == "mod:5,index:1");
    CHECK(std::abs(c(2) - CD(0, 1)) < 1e-15);
    CHECK(c.conj().index == 3);
    CHECK(std::abs(c.conj()(2) - CD(0, -1)) < 1e-15);
    CHECK_THROWS_AS(parse_character("mod:5,index:4"), NumericError);
    CHECK_THROWS_AS(parse_character("mod5"), NumericError);
    CHECK_THROWS_AS(parse_character("mod:0,index:0"), NumericError);
}

TEST_CASE("Gauss sums and root numbers") {
    for (long k : {3L, 4L, 5L, 7L, 8L})
        for (const auto& x : enumerate_characters(k)) {
            if (!is_primitive(x)) continue;
            const CD g = gauss_sum(x);
            CHECK(std::abs(g) == doctest::Approx(std::sqrt(static_cast<double>(k))).epsilon(1e-12));
            // G(chi) G(chi*) = chi(-1) k
            const CD gg = g * gauss_sum(x.conj());
            CHECK(std::abs(gg - x(k - 1) * static_cast<double>(k)) < 1e-10);
            CHECK(std::abs(std::abs(omega(x)) - 1) < 1e-10);
        }
    CHECK_FALSE(is_primitive(enumerate_characters(8)[0]));
    CHECK_FALSE(is_primitive(enumerate_characters(4)[0]));
}

TEST_CASE("L values against closed forms") {
    auto c = ctx128();
    auto chi4 = enumerate_characters(4)[1];
    CHECK(std::abs(L_hurwitz(1.0, chi4, c) - M_PI / 4) < 1e-15);
    CHECK(std::abs(L_hurwitz(2.0, chi4, c) - 0.915965594177219015) < 1e-15);
    CHECK(std::abs(L_hurwitz(3.0, chi4, c) - std::pow(M_PI, 3) / 32) < 1e-15);
    auto chi3 = enumerate_characters(3)[1];
    CHECK(std::abs(L_hurwitz(1.0, chi3, c) - M_PI / (3 * std::sqrt(3.0))) < 1e-15);
    auto one = enumerate_characters(1)[0];
    CHECK(std::abs(L_hurwitz(2.0, one, c) - M_PI * M_PI / 6) < 1e-15);
    LValue e = L_euler(2.0, one);
    CHECK(std::abs(e.value - M_PI * M_PI / 6) <= e.bound);
    CHECK_THROWS_AS(L_hurwitz(1.0, one, c), NumericError);
    CHECK_THROWS_AS(L_euler(CD(1.01, 0), chi4), NumericError);
}

TEST_CASE("Euler product against Hurwitz") {
    auto c = ctx128();
    auto chi5 = parse_character("mod:5,index:1");
    LValue e = L_euler(CD(2, 1), chi5);
    const CD h = L_hurwitz(CD(2, 1), chi5, c);
    CHECK(std::abs(e.value - h) <= 1e-8);
    CHECK(std::abs(e.value - h) <= e.bound);
    auto rng = oracle::rng(15);
    std::uniform_real_distribution<double> ux(2.5, 4.0), ut(-30, 30);
    for (long k : {3L, 4L, 5L})
        for (const auto& x : enumerate_characters(k)) {
            if (x.principal) continue;
            for (int i = 0; i < 10; ++i) {
                const CD s(ux(rng), ut(rng));
                LValue a = L_euler(s, x);
                const double r = std::abs(a.value - L_hurwitz(s, x, c));
                REQUIRE(r <= a.bound + 1e-14);
                REQUIRE(a.bound <= 1e-8);
            }
        }
}

TEST_CASE("completed functions and their symmetries") {
    auto c = ctx128();
    auto rng = oracle::rng(21);
    std::uniform_real_distribution<double> ux(-2, 3), ut(-15, 15);
    for (const char* spec : {"mod:4,index:1", "mod:5,index:1", "mod:5,index:2", "mod:3,index:1", "mod:7,index:1"}) {
        auto x = parse_character(spec);
        for (int i = 0; i < 4; ++i) {
            const CD s(ux(rng), ut(rng));
            FEResidual f = fe_residual(s, x, c);
            CHECK(f.pass);
            CHECK(f.residual <= f.budget);
            FEResidual v = v_reflection_residual(s, x, c);
            CHECK(v.pass);
            const CD g1 = g_chi(s, x, c), g2 = g_chi(-s, x, c);
            CHECK(std::abs(g1 - g2) <= 1e-12 * std::max(1.0, std::abs(g1)));
            const CD h1 = h_chi(s, x, c), h2 = h_chi(-s, x, c);
            CHECK(std::abs(h1 - h2) <= 1e-12 * std::max(1.0, std::abs(h1)));
        }
    }
    FEResidual f = fe_residual(CD(0.3, 2), parse_character("mod:4,index:1"), c);
    CHECK(f.pass);
    CHECK(f_parity(CD(2, 0), -1) == CD(1, 0));
    CHECK(std::abs(f_parity(CD(2, 0), 1)) < 1e-15);
    CHECK_THROWS_AS(q_chi(CD(2, 0), enumerate_characters(5)[0], c), NumericError);
}

TEST_CASE("groove probes for Dirichlet builders") {
    auto c = ctx64();
    auto g = desk_grid();
    GrooveProbe v = groove_probe_dirichlet(parse_character("mod:3,index:1"), Builder::V, g, c);
    CHECK(v.cls == ReportClass::Conditional);
    CHECK(v.scan.groove());
    CHECK(v.pd.pass);
    CHECK(v.strip_lo < v.strip_hi);
    GrooveProbe j = groove_probe_dirichlet(parse_character("mod:5,index:1"), Builder::J, g, c);
    CHECK(j.scan.points > 0);
    CHECK(j.pd.m == 16);
    CHECK_THROWS_AS(groove_probe_dirichlet(parse_character("mod:5,index:1"), Builder::V, g, c), NumericError);
    CHECK_THROWS_AS(groove_probe_dirichlet(parse_character("mod:3,index:1"), Builder::J, g, c), NumericError);
    CHECK(parse_builder("h") == Builder::H);
    CHECK(std::string(to_string(Builder::G)) == "g");
    CHECK_THROWS_AS(parse_builder("q"), NumericError);
}

TEST_CASE("tau from the product expansion") {
    const auto& t = tau_small();
    CHECK(to_string_i128(t.tau[1]) == "1");
    CHECK(to_string_i128(t.tau[2]) == "-24");
    CHECK(to_string_i128(t.tau[3]) == "252");
    CHECK(to_string_i128(t.tau[5]) == "4830");
    CHECK(to_string_i128(t.tau[6]) == "-6048");
    auto naive = tau_naive(300);
    for (int n = 1; n <= 300; ++n) REQUIRE(static_cast<long long>(t.tau[static_cast<std::size_t>(n)]) == naive[static_cast<std::size_t>(n)]);
    const auto& j = tau_big();
    for (long n = 1; n <= 10000; ++n) REQUIRE(j.tau[static_cast<std::size_t>(n)] == t.tau[static_cast<std::size_t>(n)]);
    CHECK_THROWS_AS(tau_table(20000), NumericError);
}

TEST_CASE("tau arithmetic properties") {
    const auto& t = tau_small();
    const long n_max = 10000;
    // multiplicativity on coprime pairs
    for (long m = 2; m * m <= n_max; ++m)
        for (long n = m + 1; m * n <= n_max; ++n)
            if (std::gcd(m, n) == 1)
                REQUIRE(t.tau[static_cast<std::size_t>(m * n)] == t.tau[static_cast<std::size_t>(m)] * t.tau[static_cast<std::size_t>(n)]);
    // Ramanujan's congruence and the Hecke relation at primes
    for (long n = 1; n <= 2000; ++n) REQUIRE(mod691(t.tau[static_cast<std::size_t>(n)]) == sigma11_mod691(n));
    for (long p : primes_up_to(100)) {
        __int128 p11 = 1;
        for (int i = 0; i < 11; ++i) p11 *= p;
        const __int128 tp = t.tau[static_cast<std::size_t>(p)];
        REQUIRE(t.tau[static_cast<std::size_t>(p * p)] == tp * tp - p11);
        // Deligne: |tau(p)| <= 2 p^{11/2}
        REQUIRE(std::abs(t.tau_d(p)) <= 2 * std::pow(static_cast<double>(p), 5.5));
    }
}

TEST_CASE("r(s) two routes and q continuation") {
    const auto& t = tau_big();
    LValue rd = r_dirichlet(8.0, t), re = r_euler(8.0, t);
    CHECK(std::abs(rd.value - re.value) <= 1e-8 * std::abs(rd.value));
    CHECK(std::abs(rd.value - re.value) <= rd.bound + re.bound);
    LValue q8 = q_ram(8.0, t);
    const CD direct = std::pow(2 * M_PI, -8.0) * 5040.0 * rd.value;
    CHECK(std::abs(q8.value - direct) <= 1e-8 * std::abs(direct));
    LValue q9 = q_ram(CD(9, 1.5), t);
    const CD r9 = r_dirichlet(CD(9, 1.5), t).value;
    const CD g9 = oracle::spouge_gamma(zetalab::Complex(CD(9, 1.5), 96), 96).re().to_double() +
                  CD(0, 1) * oracle::spouge_gamma(zetalab::Complex(CD(9, 1.5), 96), 96).im().to_double();
    const CD d9 = std::pow(CD(2 * M_PI, 0), -CD(9, 1.5)) * g9 * r9;
    CHECK(std::abs(q9.value - d9) <= 1e-8 * std::abs(d9));
    // reflection through s -> 12 - s
    LValue qa = q_ram(CD(3, 2), t), qb = q_ram(CD(9, -2), t);
    CHECK(std::abs(qa.value - qb.value) <= qa.bound + qb.bound);
    CHECK_THROWS_AS(r_dirichlet(7.0, t), NumericError);
    for (double y : {1.0, 1.2, 1.5, 2.0, 3.0}) CHECK(delta_iy(y, t) > 0);
    CHECK(delta_iy(1.0, t) == doctest::Approx(std::exp(-2 * M_PI) - 24 * std::exp(-4 * M_PI) + 252 * std::exp(-6 * M_PI)).epsilon(1e-6));
}

TEST_CASE("Ramanujan n and its groove probe") {
    const auto& t = tau_big();
    CHECK(std::abs(n_ram(2.0, t)) < 1e-14 * std::abs(q_ram(8.0, t).value));
    for (CD s : {CD(0.4, 1.1), CD(1.7, -3.0), CD(0.0, 2.5)}) {
        const CD a = n_ram(s, t), b = n_ram(-s, t);
        CHECK(std::abs(a + b) <= 1e-12 * std::abs(a));
    }
    GrooveProbe g = groove_probe_ramanujan(t, desk_grid());
    CHECK(g.cls == ReportClass::Conditional);
    CHECK(g.strip_lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.strip_hi == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(g.pd.m == 16);
    CHECK(g.pd.pass);
}
