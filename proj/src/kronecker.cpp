#include "zetalab/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zetalab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = 0x1p-52;
}  // namespace

double circle_reduce(double s) {
    double r = std::remainder(s, 2 * kPi);  // in [-pi, pi]
    if (r <= -kPi) r += 2 * kPi;
    return r;
}

double d_N(const std::vector<double>& u, const std::vector<double>& v, long N) {
    if (N < 1 || static_cast<std::size_t>(N) > u.size() || static_cast<std::size_t>(N) > v.size())
        throw NumericError(ErrorKind::Precondition, "d_N: N outside the coordinates given");
    double m = 0;
    for (long k = 0; k < N; ++k)
        m = std::max(m, std::abs(circle_reduce(u[static_cast<std::size_t>(k)] - v[static_cast<std::size_t>(k)])));
    return m;
}

void ZSequence::validate() const {
    for (const auto& w : z)
        if (!(std::abs(w) < 1)) throw NumericError(ErrorKind::Domain, "z(k) must satisfy |z(k)| < 1");
    if (!(tail_abs >= 0) || !std::isfinite(tail_abs)) throw NumericError(ErrorKind::Domain, "z tail bound must be finite");
}

ZSequence zsequence_from_character(const CharacterSpec& chi, double x, long P) {
    if (x <= 1) throw NumericError(ErrorKind::Precondition, "z sequence from a character needs x > 1");
    long lim = 16;
    std::vector<long> ps;
    while (static_cast<long>((ps = primes_up_to(lim)).size()) < P) lim *= 2;
    ps.resize(static_cast<std::size_t>(P));
    ZSequence zs;
    for (long p : ps) zs.z.push_back(chi(p) * std::pow(static_cast<double>(p), -x));
    // sum_{p > p_P} p^{-x} <= int_{p_P}^inf u^{-x} du
    const double last = static_cast<double>(ps.back());
    zs.tail_abs = std::pow(last, 1 - x) / (x - 1);
    zs.validate();
    return zs;
}

double g_k(const ZSequence& z, long k, double theta) {
    if (k < 1 || static_cast<std::size_t>(k) > z.z.size()) throw NumericError(ErrorKind::Precondition, "g_k: k outside the prefix");
    return std::abs(1.0 - z.z[static_cast<std::size_t>(k - 1)] * std::polar(1.0, theta));
}

double G_partial(const ZSequence& z, const std::vector<double>& y, long N) {
    if (N < 0 || static_cast<std::size_t>(N) > std::min(y.size(), z.z.size()))
        throw NumericError(ErrorKind::Precondition, "G_N: N outside the working prefix");
    double g = 1;
    for (long k = 1; k <= N; ++k) g *= g_k(z, k, y[static_cast<std::size_t>(k - 1)]);
    return g;
}

GValue G_full(const ZSequence& z, const std::vector<double>& y) {
    const long n = static_cast<long>(z.z.size());
    GValue r;
    r.value = G_partial(z, y, n);
    // each factor past the prefix lies in [1 - a, 1 + a] with a <= tail_abs
    const double a = std::min(z.tail_abs, 0.99);
    const double log_dev = z.tail_abs / (1 - a);
    r.bound = r.value * (std::expm1(log_dev) + 4 * kEps * static_cast<double>(n));
    return r;
}

double V_N(const ZSequence& z, const std::vector<double>& y, long N) {
    return G_partial(z, y, static_cast<long>(z.z.size())) - G_partial(z, y, N);
}

double D_N(const ZSequence& z, const std::vector<double>& x, const std::vector<double>& y, long N) {
    return G_partial(z, x, N) - G_partial(z, y, N);
}

KroneckerResult kronecker_search(const std::vector<double>& alpha, const std::vector<double>& target, long N, double J,
                                 SearchMode mode, long budget, double goal) {
    if (N < 1 || N > 8) throw NumericError(ErrorKind::Precondition, "kronecker_search needs 1 <= N <= 8");
    if (static_cast<std::size_t>(N) > alpha.size() || static_cast<std::size_t>(N) > target.size())
        throw NumericError(ErrorKind::Precondition, "kronecker_search: N exceeds alpha or target");
    if (J < 0 || budget < 1) throw NumericError(ErrorKind::Precondition, "kronecker_search needs J >= 0 and a positive budget");
    KroneckerResult res;
    res.d = std::numeric_limits<double>::infinity();
    auto dist = [&](double t) {
        ++res.evaluations;
        double m = 0;
        for (long k = 0; k < N; ++k) {
            const std::size_t i = static_cast<std::size_t>(k);
            m = std::max(m, std::abs(circle_reduce(t * alpha[i] - target[i])));
        }
        return m;
    };
    auto take = [&](double t, double d) {
        if (d < res.d || (d == res.d && t < res.t)) {
            res.d = d;
            res.t = t;
        }
    };
    if (mode == SearchMode::Integral) {
        const double t0 = std::floor(J) + 1;
        for (long i = 0; i < budget; ++i) {
            const double t = t0 + static_cast<double>(i);
            take(t, dist(t));
            if (res.d <= goal) return res;
        }
        res.budget_exhausted = true;
        return res;
    }
    double amax = 0;
    for (long k = 0; k < N; ++k) amax = std::max(amax, std::abs(alpha[static_cast<std::size_t>(k)]));
    if (amax == 0) throw NumericError(ErrorKind::Domain, "kronecker_search: alpha vanishes on the first N coordinates");
    const double h = 0.1 / amax;
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    // golden section on [tc - h, tc + h]
    auto refine = [&](double tc) {
        double a = std::max(J + 1e-9, tc - h), b = tc + h;
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = dist(c), fd = dist(d);
        for (int it = 0; it < 60 && b - a > 1e-12 * std::max(1.0, tc); ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = dist(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = dist(d);
            }
        }
        take(c, fc);
        take(d, fd);
    };
    // coarse local minima within one grid step of the goal are refined on the spot;
    // the best others are kept for a final pass
    constexpr std::size_t keep = 8;
    std::vector<std::pair<double, double>> cand;
    auto offer = [&](double t, double d) {
        if (cand.size() == keep && d >= cand.back().first) return;
        cand.emplace_back(d, t);
        std::sort(cand.begin(), cand.end());
        if (cand.size() > keep) cand.pop_back();
    };
    double d2 = dist(J + h), d1 = dist(J + 2 * h);
    bool reached = false;
    for (long i = 3; res.evaluations < budget; ++i) {
        const double t = J + h * static_cast<double>(i);
        const double d0 = dist(t);
        if (d1 < d2 && d1 <= d0) {
            take(t - h, d1);
            if (d1 <= goal + 0.1) {
                refine(t - h);
                if (res.d <= goal) {
                    reached = true;
                    break;
                }
            } else {
                offer(t - h, d1);
            }
        }
        d2 = d1;
        d1 = d0;
    }
    if (!reached)
        for (auto [dc, tc] : cand) {
            (void)dc;
            refine(tc);
        }
    res.budget_exhausted = !reached && res.d > goal;
    return res;
}

Lemma2Witness lemma2_witness(const ZSequence& z, const std::vector<double>& alpha, int sigma, double J, long budget,
                             long max_N) {
    if (sigma != 1 && sigma != -1) throw NumericError(ErrorKind::Precondition, "sigma must be +1 or -1");
    if (alpha.size() < z.z.size()) throw NumericError(ErrorKind::Precondition, "alpha shorter than the z prefix");
    Lemma2Witness w;
    const long n = static_cast<long>(z.z.size());
    max_N = std::min({max_N, n, 8L});
    // the admissible coordinate with the largest logarithmic change
    double best_gain = 0;
    for (long k = 1; k <= max_N; ++k) {
        const std::complex<double> zk = z.z[static_cast<std::size_t>(k - 1)];
        if (std::abs(zk) == 0) continue;
        const double th = sigma > 0 ? kPi - std::arg(zk) : -std::arg(zk);
        const double gain = sigma * (std::log(g_k(z, k, th)) - std::log(g_k(z, k, 0.0)));
        if (gain > 1e-12 && gain > best_gain) {
            best_gain = gain;
            w.k_prime = k;
            w.theta = circle_reduce(th);
        }
    }
    if (w.k_prime == 0) {
        w.failure = "no admissible coordinate for this sign";
        return w;
    }
    const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
    const GValue g0 = G_full(z, zero);
    w.G_0 = g0.value;
    for (long N = w.k_prime; N <= max_N; ++N) {
        std::vector<double> target(static_cast<std::size_t>(N), 0.0);
        target[static_cast<std::size_t>(w.k_prime - 1)] = w.theta;
        for (double goal : {0.2, 0.1, 0.05}) {
            KroneckerResult r = kronecker_search(alpha, target, N, J, SearchMode::Real, budget, goal);
            std::vector<double> y(static_cast<std::size_t>(n));
            for (long k = 0; k < n; ++k) y[static_cast<std::size_t>(k)] = r.t * alpha[static_cast<std::size_t>(k)];
            const GValue gt = G_full(z, y);
            const double margin = sigma * (gt.value - g0.value) - gt.bound - g0.bound;
            if (margin > 0 && r.t > J) {
                w.found = true;
                w.N = N;
                w.search = r;
                w.G_t = gt.value;
                w.margin = margin;
                return w;
            }
        }
    }
    w.failure = "search budget exhausted without a verified witness";
    return w;
}

int corollary3_condition(const CharacterSpec& chi, long P) {
    for (const auto& v : chi.values)
        if (v.imag() != 0) return 1;
    long lim = 16;
    std::vector<long> ps;
    while (static_cast<long>((ps = primes_up_to(lim)).size()) < P) lim *= 2;
    ps.resize(static_cast<std::size_t>(P));
    bool plus = false, minus = false;
    for (long p : ps) {
        const std::complex<double> c = chi(p);
        if (c == std::complex<double>(1, 0)) plus = true;
        if (c == std::complex<double>(-1, 0)) minus = true;
    }
    return plus && minus ? 2 : 0;
}

Corollary3Result corollary3_demo(const CharacterSpec& chi, double x, double T, long P, long budget) {
    if (x < 1.05) throw NumericError(ErrorKind::Precondition, "corollary3_demo needs x >= 1.05");
    if (T < 0) throw NumericError(ErrorKind::Precondition, "corollary3_demo needs T >= 0");
    Corollary3Result r;
    r.x = x;
    r.T = T;
    r.condition = corollary3_condition(chi, P);
    if (r.condition == 0) {
        r.rejection = "character has only real values and lacks primes with chi(p) = 1 and chi(p') = -1";
        return r;
    }
    r.accepted = true;
    const ZSequence z = zsequence_from_character(chi, x, P);
    std::vector<double> alpha;
    long lim = 16;
    std::vector<long> ps;
    while (static_cast<long>((ps = primes_up_to(lim)).size()) < P) lim *= 2;
    ps.resize(static_cast<std::size_t>(P));
    // |L(x + it)| = 1 / G(-t omega), omega(k) = log p_k
    for (long p : ps) alpha.push_back(-std::log(static_cast<double>(p)));
    r.up = lemma2_witness(z, alpha, +1, T, budget);
    r.down = lemma2_witness(z, alpha, -1, T, budget);
    if (!r.up.found || !r.down.found) {
        r.rejection = "witness search failed: " + (r.up.found ? r.down.failure : r.up.failure);
        return r;
    }
    r.t = r.up.search.t;
    r.t_prime = r.down.search.t;
    const LValue lx = L_euler(std::complex<double>(x, 0), chi);
    const LValue lt = L_euler(std::complex<double>(x, r.t), chi);
    const LValue ltp = L_euler(std::complex<double>(x, r.t_prime), chi);
    r.L_x = std::abs(lx.value);
    r.L_t = std::abs(lt.value);
    r.L_tp = std::abs(ltp.value);
    r.budget = std::max({lx.bound, lt.bound, ltp.bound});
    r.margin_low = r.L_x - r.L_t;
    r.margin_high = r.L_tp - r.L_x;
    for (auto [t, lv] : {std::pair{0.0, lx}, {r.t, lt}, {r.t_prime, ltp}}) {
        std::vector<double> y;
        for (double a : alpha) y.push_back(t * a);
        const GValue g = G_full(z, y);
        const double L = std::abs(lv.value);
        r.identity_residual = std::max(r.identity_residual, std::abs(L * g.value - 1));
        r.identity_budget = std::max(r.identity_budget, L * g.bound + g.value * lv.bound + 8 * kEps);
    }
    r.holds = r.t > T && r.t_prime > T && r.margin_low > 10 * r.budget && r.margin_high > 10 * r.budget;
    return r;
}

}  // namespace zetalab
