#include "zetalab/metric_geom.hpp"

#include "zetalab/zeta_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace zetalab {

namespace {

using CD = std::complex<double>;

CD to_cd(const Complex& z) { return {z.re().to_double(), z.im().to_double()}; }

bool on_pole_line(double x) { return std::abs(x / 4.0 - std::round(x / 4.0)) < 1e-12; }

// m_x with n(x) fixed
struct MetricEval {
    double x;
    PrecisionContext ctx;
    CD nx;
    long infinite = 0;

    MetricEval(double x_, const PrecisionContext& c) : x(x_), ctx(c) {
        if (on_pole_line(x)) throw NumericError(ErrorKind::Pole, "metric: x is a multiple of 4, n(x) = 0");
        nx = to_cd(eval_n(Complex(x, 0.0, ctx.bits), ctx));
    }
    CD n_at(double t) const { return t == 0 ? nx : to_cd(eval_n(Complex(x, t, ctx.bits), ctx)); }
    double m(double t) {
        if (t == 0) return 0;
        const CD d = n_at(t);
        if (d == CD(0, 0)) {
            ++infinite;
            return std::numeric_limits<double>::infinity();
        }
        return std::sqrt(std::abs(1.0 - nx / d));
    }
};

}  // namespace

double metric_norm(double x, double t, const PrecisionContext& ctx) {
    MetricEval e(x, ctx);
    return e.m(t);
}

MetricProbe metric_probe(double x, long trials, std::uint64_t seed, const PrecisionContext& ctx, double t_max) {
    if (trials < 1) throw NumericError(ErrorKind::Precondition, "metric_probe needs trials >= 1");
    MetricEval e(x, ctx);
    MetricProbe pr;
    pr.x = x;
    pr.cls = std::abs(x) > 4 ? ReportClass::Unconditional : ReportClass::Conditional;
    pr.min_slack = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(-t_max, t_max);

    auto triangle = [&](double t1, double t2) {
        const double a = e.m(t1), b = e.m(t2), c = e.m(t1 + t2);
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return;
        pr.min_slack = std::min(pr.min_slack, a + b - c);
        if (c > a + b + pr.tol) pr.violations.push_back({"triangle", t1, t2, c, a + b});
    };

    for (long i = 0; i < trials; ++i) {
        const double t1 = ut(rng), t2 = ut(rng);
        triangle(t1, t2);
        if (i % 50 == 0) {
            const double a = e.m(t1), b = e.m(-t1);
            if (a < 0) pr.violations.push_back({"negative", t1, 0, a, 0});
            if (a <= pr.tol) pr.violations.push_back({"definiteness", t1, 0, a, 0});
            if (std::abs(a - b) > pr.tol * std::max(1.0, a)) pr.violations.push_back({"symmetry", t1, -t1, a, b});
        }
    }
    pr.trials = trials;

    // local minima of |n(x + it)| make m large; aim sums at them
    std::vector<double> minima;
    const double step = 0.05;
    double prev2 = std::abs(e.n_at(step)), prev1 = std::abs(e.n_at(2 * step));
    for (double t = 3 * step; t <= t_max; t += step) {
        const double cur = std::abs(e.n_at(t));
        if (prev1 < prev2 && prev1 <= cur) minima.push_back(t - step);
        prev2 = prev1;
        prev1 = cur;
    }
    std::uniform_real_distribution<double> uu(-2.0, 2.0);
    const long per = std::max<long>(4, trials / 100);
    for (double ts : minima) {
        triangle(ts, ts);
        triangle(ts, -ts / 2);
        for (long i = 0; i < per; ++i) {
            const double u = uu(rng);
            triangle(ts - u, u);
            triangle(ts + u, -u);
            pr.adversarial += 2;
        }
        pr.adversarial += 2;
    }
    pr.infinite_values = e.infinite;
    return pr;
}

RidgeGrooveScan ridge_groove_scan(const CFun& q, const std::vector<double>& xs, const std::vector<double>& ts,
                                  double tol, std::size_t max_witnesses) {
    RidgeGrooveScan sc;
    for (double x : xs) {
        const double base = std::abs(q(CD(x, 0)));
        for (double t : ts) {
            if (t == 0) continue;
            const double v = std::abs(q(CD(x, t)));
            ++sc.points;
            const double ratio = base > 0 ? v / base : (v > 0 ? std::numeric_limits<double>::infinity() : 1.0);
            if (ratio >= 1 + tol) {
                ++sc.ridge_failure_count;
                sc.ridge_failures.push_back({x, t, ratio});
            }
            if (ratio <= 1 - tol) {
                ++sc.groove_failure_count;
                sc.groove_failures.push_back({x, t, ratio});
            }
        }
    }
    auto trim = [&](std::vector<ScanWitness>& w, bool largest) {
        std::stable_sort(w.begin(), w.end(), [&](const ScanWitness& a, const ScanWitness& b) {
            return largest ? a.ratio > b.ratio : a.ratio < b.ratio;
        });
        if (w.size() > max_witnesses) w.resize(max_witnesses);
    };
    trim(sc.ridge_failures, true);
    trim(sc.groove_failures, false);
    return sc;
}

CD poly_n1(CD s, double v1, double v2) {
    const CD i(0, 1);
    auto w = [&](CD u) { return (u - i * v1) * (u - i * v2); };
    return s * w(s) * w(-s);
}

namespace {

// Richardson-extrapolated central difference along the real direction
CD derivative(const CFun& f, CD z, double h0) {
    constexpr int L = 5;
    CD T[L][L];
    double h = h0;
    for (int a = 0; a < L; ++a, h /= 2) {
        T[a][0] = (f(z + h) - f(z - h)) / (2 * h);
        double p = 4;
        for (int b = 1; b <= a; ++b, p *= 4) T[a][b] = T[a][b - 1] + (T[a][b - 1] - T[a - 1][b - 1]) / (p - 1);
    }
    return T[L - 1][L - 1];
}

}  // namespace

PolyCounterexample poly_counterexample_check(double v1, double v2) {
    if (!(v1 > 0 && v2 > v1)) throw NumericError(ErrorKind::Precondition, "poly counterexample needs 0 < v1 < v2");
    PolyCounterexample r;
    r.v1 = v1;
    r.v2 = v2;
    r.ratio_formula = 2 * (1 - (v1 / v2) * (v1 / v2));
    CFun n1 = [=](CD s) { return poly_n1(s, v1, v2); };
    const double h = 1e-2 * v1;
    const CD d0 = derivative(n1, 0.0, h);
    const CD dv = derivative(n1, CD(0, v1), h);
    r.ratio_numeric = std::abs(dv) / d0.real();

    const double scale = std::abs(d0) + std::abs(dv);
    r.odd = std::abs(n1(CD(0.7, 0.3)) + n1(CD(-0.7, -0.3))) <= 1e-13 * std::abs(n1(CD(0.7, 0.3)));
    r.roots_on_axes = true;
    for (double v : {0.0, v1, -v1, v2, -v2})
        if (std::abs(n1(CD(0, v))) > 1e-13 * std::max(1.0, scale)) r.roots_on_axes = false;
    r.derivative_real = std::abs(dv.imag()) <= 1e-9 * std::abs(dv) && std::abs(d0.imag()) <= 1e-9 * std::abs(d0);

    r.violation_predicted = r.ratio_formula < 1;
    if (r.violation_predicted) {
        for (double x = 0.01; x >= 1e-6; x /= 2) {
            const double a = std::abs(n1(CD(x, v1))), b = std::abs(n1(CD(x, 0)));
            if (a < b) {
                r.witness_found = true;
                r.witness_x = x;
                r.witness_t = v1;
                r.witness_lhs = a;
                r.witness_rhs = b;
                break;
            }
        }
    } else {
        std::vector<double> xs, ts;
        for (int i = 1; i <= 20; ++i) xs.push_back(0.005 * i * i);
        for (int i = -200; i <= 200; ++i) ts.push_back((v2 + 1) * i / 100.0);
        r.scan = ridge_groove_scan(n1, xs, ts);
    }
    return r;
}

Claim72Report claim72_check(const CFun& j, CD z0, double x0, double h_max, int nh) {
    Claim72Report r;
    const double scale = std::max({1.0, std::abs(j(z0 + h_max)), std::abs(j(CD(x0 + h_max, 0)))});
    r.zero_ok = std::abs(j(z0)) <= 1e-12 * scale;
    if (!r.zero_ok) {
        r.failure = "j(z0) is not zero";
        return r;
    }
    if (std::abs(z0.real() - x0) > 1e-15) {
        r.failure = "x0 is not Re z0";
        return r;
    }
    r.groove_ok = true;
    r.min_ratio = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= nh; ++k) {
        const double h = h_max * k / nh;
        const double a = std::abs(j(z0 + h)), b = std::abs(j(CD(x0 + h, 0)));
        ++r.h_points;
        const double ratio = b > 0 ? a / b : (a > 0 ? std::numeric_limits<double>::infinity() : 1.0);
        r.min_ratio = std::min(r.min_ratio, ratio);
        if (a < b * (1 - 1e-12)) r.groove_ok = false;
    }
    if (!r.groove_ok) {
        r.failure = "groove precondition fails on samples";
        return r;
    }
    r.dj_z0 = std::abs(derivative(j, z0, h_max / 4));
    r.dj_x0 = std::abs(derivative(j, CD(x0, 0), h_max / 4));
    r.derivative_order = r.dj_z0 >= r.dj_x0 * (1 - 1e-8);
    r.conclusion = !(r.dj_x0 > 0) || r.dj_z0 > 0;
    return r;
}

PDProbeResult pd_probe(const std::function<CD(double)>& psi, const std::vector<double>& ts, double rel_tol,
                       double hermitian_tol) {
    const long m = static_cast<long>(ts.size());
    if (m < 1) throw NumericError(ErrorKind::Precondition, "pd_probe needs at least one sample");
    std::map<double, CD> memo;
    auto at = [&](double t) {
        auto it = memo.find(t);
        if (it != memo.end()) return it->second;
        const CD v = psi(t);
        memo.emplace(t, v);
        return v;
    };
    PDProbeResult r;
    r.m = m;
    Eigen::MatrixXcd A(m, m);
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b) {
            A(a, b) = at(ts[static_cast<std::size_t>(a)] - ts[static_cast<std::size_t>(b)]);
            r.max_abs = std::max(r.max_abs, std::abs(A(a, b)));
        }
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < a; ++b) r.hermitian_defect = std::max(r.hermitian_defect, std::abs(A(a, b) - std::conj(A(b, a))));
    if (r.hermitian_defect > hermitian_tol * std::max(1.0, r.max_abs))
        throw NumericError(ErrorKind::Precondition, "pd_probe: psi(-t) differs from conj psi(t) beyond tolerance");
    Eigen::MatrixXcd H = (A + A.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    r.min_eig = es.eigenvalues().minCoeff();
    r.tol = rel_tol * r.max_abs;
    r.pass = r.min_eig >= -r.tol;
    return r;
}

}  // namespace zetalab
