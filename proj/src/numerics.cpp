#include "zetalab/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <memory>
#include <queue>

namespace zetalab {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Pole: return "pole";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::BudgetExhausted: return "budget exhausted";
        case ErrorKind::NonFinite: return "non-finite";
        case ErrorKind::HintViolated: return "decay hint violated";
        case ErrorKind::NoSignChange: return "no sign change";
        case ErrorKind::NoConvergence: return "no convergence";
        case ErrorKind::PrecisionInfeasible: return "precision infeasible";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Config: return "config";
        case ErrorKind::CrossCheck: return "cross-check";
    }
    return "unknown";
}

void PrecisionContext::validate() const {
    if (bits < 64) throw NumericError(ErrorKind::Config, "mantissa_bits must be >= 64");
    if (abs_tol.sign() <= 0) throw NumericError(ErrorKind::Config, "abs_tol must be positive");
    if (max_series_terms <= 0) throw NumericError(ErrorKind::Config, "max_series_terms must be positive");
    if (quad_max_depth <= 0) throw NumericError(ErrorKind::Config, "quad_max_depth must be positive");
}

Strip::Strip(double a, double b, bool c0, bool c1) : x0(a), x1(b), closed0(c0), closed1(c1) {
    if (!(a < b)) throw NumericError(ErrorKind::Domain, "strip needs x0 < x1");
}

bool Strip::contains(double x) const {
    bool left = closed0 ? x >= x0 : x > x0;
    bool right = closed1 ? x <= x1 : x < x1;
    return left && right;
}

double Strip::margin(double x) const { return std::min(x - x0, x1 - x); }

// ---- Clenshaw-Curtis 33/17 nested rule ----

namespace {

constexpr int kN = 32;

struct CCRule {
    std::vector<Real> x;    // cos(k pi / 32), k = 0..32
    std::vector<Real> w33;  // weights on [-1,1]
    std::vector<Real> w17;  // weights of the 17-point rule on even-index nodes
};

std::vector<Real> cc_weights(int n, mpfr_prec_t p) {
    Real pi = Real::pi(p);
    std::vector<Real> w(n + 1, Real(p));
    for (int k = 0; k <= n; ++k) {
        Real s(1L, p);
        for (int j = 1; j <= n / 2; ++j) {
            long b = (2 * j == n) ? 1 : 2;
            Real c = cos(pi * static_cast<long>(2 * j * k) / static_cast<long>(n));
            s -= c * b / static_cast<long>(4L * j * j - 1);
        }
        long ck = (k == 0 || k == n) ? 1 : 2;
        w[k] = s * ck / static_cast<long>(n);
    }
    return w;
}

const CCRule& cc_rule(mpfr_prec_t p) {
    static std::mutex mu;
    static std::map<mpfr_prec_t, CCRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    CCRule r;
    Real pi = Real::pi(p);
    for (int k = 0; k <= kN; ++k) r.x.push_back(cos(pi * static_cast<long>(k) / static_cast<long>(kN)));
    r.w33 = cc_weights(kN, p);
    r.w17 = cc_weights(kN / 2, p);
    return cache.emplace(p, std::move(r)).first->second;
}

struct Panel {
    Real a, b;
    Complex q33, q17;
    Real err;
    Real eval_bound;
    Real round_bound;
    int depth;
};

struct PanelOrder {
    bool operator()(const Panel* l, const Panel* r) const { return l->err < r->err; }
};

}  // namespace

static Panel eval_panel(const IntegrandVB& f, const Real& a, const Real& b, int depth, mpfr_prec_t p, long& evals) {
    const CCRule& rule = cc_rule(p);
    Real mid = (a + b) / 2;
    Real half = (b - a) / 2;
    Complex q33(p), q17(p);
    Real ebound(0.0, 64), absum(0.0, 64);
    for (int k = 0; k <= kN; ++k) {
        Real y = mid + half * rule.x[k];
        ValueWithBound v = f(y);
        ++evals;
        if (!v.value.is_finite())
            throw NumericError(ErrorKind::NonFinite, "integrand not finite at y = " + y.str(17));
        q33 += v.value * rule.w33[k];
        if (k % 2 == 0) q17 += v.value * rule.w17[k / 2];
        ebound += Real(abs(rule.w33[k]), 64) * v.total();
        absum += Real(abs(rule.w33[k]) * abs(v.value), 64);
    }
    q33 *= half;
    q17 *= half;
    Real ah = Real(abs(half), 64);
    Panel pan{a, b, q33, q17, Real(abs(q33 - q17), 64), ebound * ah,
              absum * ah * Real::pow2(-(p - 6), 64), depth};
    return pan;
}

ValueWithBound quad_finite_vb(const IntegrandVB& f, const Real& a, const Real& b, const PrecisionContext& ctx,
                              const QuadOptions& opt) {
    if (!(a < b)) throw NumericError(ErrorKind::Domain, "quad_finite needs a < b");
    const mpfr_prec_t p = ctx.bits;
    Real aa(a, p), bb(b, p);
    long evals = 0;
    std::vector<std::unique_ptr<Panel>> store;
    std::priority_queue<Panel*, std::vector<Panel*>, PanelOrder> heap;
    std::vector<Panel*> frozen;
    int n0 = std::max(1, opt.initial_panels);
    Real width = (bb - aa) / static_cast<long>(n0);
    for (int i = 0; i < n0; ++i) {
        Real l = aa + width * static_cast<long>(i);
        Real r = (i == n0 - 1) ? bb : aa + width * static_cast<long>(i + 1);
        store.push_back(std::make_unique<Panel>(eval_panel(f, l, r, 0, p, evals)));
        heap.push(store.back().get());
    }
    auto summarize = [&](bool done) {
        Complex total(p);
        Real err(0.0, 64), eb(0.0, 64), rb(0.0, 64);
        auto add = [&](const Panel* pn) {
            total += pn->q33;
            err += pn->err;
            eb += pn->eval_bound;
            rb += pn->round_bound;
        };
        auto copy = heap;
        while (!copy.empty()) { add(copy.top()); copy.pop(); }
        for (auto* pn : frozen) add(pn);
        (void)done;
        return ValueWithBound(total, err * opt.safety, eb + rb);
    };
    auto total_err = [&]() {
        Real e(0.0, 64);
        auto copy = heap;
        while (!copy.empty()) { e += copy.top()->err; copy.pop(); }
        for (auto* pn : frozen) e += pn->err;
        return e;
    };
    Real tol(ctx.abs_tol, 64);
    Real cur = total_err();
    while (cur * opt.safety > tol) {
        if (heap.empty())
            throw NumericError(ErrorKind::BudgetExhausted, "quadrature depth exhausted", summarize(false));
        if (evals > opt.max_evals)
            throw NumericError(ErrorKind::BudgetExhausted, "quadrature evaluation budget exhausted", summarize(false));
        Panel* worst = heap.top();
        heap.pop();
        if (worst->depth >= ctx.quad_max_depth) {
            frozen.push_back(worst);
            continue;
        }
        Real m = (worst->a + worst->b) / 2;
        store.push_back(std::make_unique<Panel>(eval_panel(f, worst->a, m, worst->depth + 1, p, evals)));
        heap.push(store.back().get());
        store.push_back(std::make_unique<Panel>(eval_panel(f, m, worst->b, worst->depth + 1, p, evals)));
        heap.push(store.back().get());
        cur -= worst->err;
        cur += store[store.size() - 2]->err;
        cur += store.back()->err;
        // periodic exact recomputation keeps the running sum honest
        if (store.size() % 64 == 0) cur = total_err();
    }
    return summarize(true);
}

ValueWithBound quad_finite(const Integrand& f, const Real& a, const Real& b, const PrecisionContext& ctx,
                           const QuadOptions& opt) {
    IntegrandVB g = [&f](const Real& y) { return ValueWithBound(f(y)); };
    return quad_finite_vb(g, a, b, ctx, opt);
}

ValueWithBound quad_semiinfinite_vb(const IntegrandVB& f, const Real& a, const DecayHint& hint,
                                    const PrecisionContext& ctx, const SemiInfiniteOptions& opt) {
    if (hint.rate <= 0 || hint.scale < 0)
        throw NumericError(ErrorKind::Precondition, "decay hint needs rate > 0 and scale >= 0");
    const double tol = ctx.tol();
    double a_d = a.to_double();
    double Y;
    if (opt.cutoff) {
        Y = *opt.cutoff;
    } else {
        double need = hint.scale > 0 ? std::log(hint.scale / (hint.rate * tol / 4.0)) / hint.rate : 0.0;
        Y = std::max({need, hint.from, a_d + 1.0});
    }
    if (Y <= a_d) throw NumericError(ErrorKind::Domain, "cutoff must exceed the lower limit");
    double tail = hint.scale * std::exp(-hint.rate * Y) / hint.rate;
    std::vector<std::pair<double, double>> samples;
    IntegrandVB g = [&](const Real& y) {
        ValueWithBound v = f(y);
        double yd = y.to_double();
        if (yd >= hint.from) samples.emplace_back(yd, abs(v.value).to_double());
        return v;
    };
    PrecisionContext inner = ctx.with_tol(Real(std::max(tol - tail, tol / 4.0), 64));
    ValueWithBound r = quad_finite_vb(g, a, Real(Y, ctx.bits), inner, opt.quad);
    r.tail_bound += Real(tail, 64);
    for (const auto& [y, m] : samples) {
        double allowed = hint.scale * std::exp(-hint.rate * y);
        if (m > allowed * (1.0 + 1e-9) + 1e-300)
            throw NumericError(ErrorKind::HintViolated,
                               "sample |f(" + std::to_string(y) + ")| = " + std::to_string(m) + " exceeds hint " +
                                   std::to_string(allowed),
                               r);
    }
    return r;
}

ValueWithBound quad_semiinfinite(const Integrand& f, const Real& a, const DecayHint& hint, const PrecisionContext& ctx,
                                 const SemiInfiniteOptions& opt) {
    IntegrandVB g = [&f](const Real& y) { return ValueWithBound(f(y)); };
    return quad_semiinfinite_vb(g, a, hint, ctx, opt);
}

// ---- summation ----

static long guard_bits(std::size_t n) {
    long g = 8;
    while ((std::size_t(1) << (g - 8)) < n + 1 && g < 72) ++g;
    return g;
}

ValueWithBound sum_compensated(const std::vector<Complex>& terms, const PrecisionContext& ctx) {
    const long g = guard_bits(terms.size());
    const mpfr_prec_t wp = ctx.bits + g;
    Complex acc(wp);
    Real mag(0.0, 64);
    for (const auto& t : terms) {
        acc += Complex(Real(t.re(), wp), Real(t.im(), wp));
        mag += Real(abs(t), 64);
    }
    // worst-case accumulated rounding at the working width plus one final rounding
    Real rb = mag * static_cast<long>(terms.size() + 1) * Real::pow2(-(wp - 1), 64);
    Complex out(Real(acc.re(), ctx.bits), Real(acc.im(), ctx.bits));
    rb += Real(abs(out), 64) * Real::pow2(-(ctx.bits - 1), 64);
    return ValueWithBound(out, Real(0.0, 64), rb);
}

ValueWithBound sum_compensated(const std::vector<Real>& terms, const PrecisionContext& ctx) {
    std::vector<Complex> c;
    c.reserve(terms.size());
    for (const auto& t : terms) c.emplace_back(t);
    return sum_compensated(c, ctx);
}

// ---- roots ----

Real find_root(const RealFn& f, const Real& lo_in, const Real& hi_in, const PrecisionContext& ctx, int max_iter) {
    const mpfr_prec_t p = ctx.bits;
    Real lo(lo_in, p), hi(hi_in, p);
    Real flo = f(lo), fhi = f(hi);
    if (flo.is_zero()) return lo;
    if (fhi.is_zero()) return hi;
    if (flo.sign() == fhi.sign())
        throw NumericError(ErrorKind::NoSignChange, "f(lo) and f(hi) share a sign");
    Real tol(ctx.abs_tol, 64);
    int side = 0;
    for (int it = 0; it < max_iter; ++it) {
        // Illinois false position, bisection every fourth step as a safeguard
        Real x(p);
        if (it % 4 == 3) {
            x = (lo + hi) / 2;
        } else {
            x = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(x > lo && x < hi)) x = (lo + hi) / 2;
        }
        Real fx = f(x);
        if (abs(fx) <= tol) return x;
        Real width = hi - lo;
        if (width <= Real::pow2(-(p - 4), 64) * max(Real(1L, 64), Real(abs(x), 64))) return x;
        if (fx.sign() == flo.sign()) {
            lo = x;
            flo = fx;
            if (side == -1) fhi /= 2;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo /= 2;
            side = 1;
        }
    }
    throw NumericError(ErrorKind::BudgetExhausted, "find_root iteration budget exhausted");
}

// ---- fits ----

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw NumericError(ErrorKind::Domain, "line fit needs >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw NumericError(ErrorKind::Domain, "degenerate abscissae in line fit");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.envelope_points = n;
    return f;
}

LineFit fit_log_envelope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 8) throw NumericError(ErrorKind::Domain, "fit_log_envelope needs >= 8 points");
    std::vector<double> lx, ly;
    double running = std::numeric_limits<double>::infinity();
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [g, q] : points) {
        if (!(g > prev)) throw NumericError(ErrorKind::Domain, "abscissae must increase");
        prev = g;
        if (!(q > 0) || !(g > 0)) throw NumericError(ErrorKind::Domain, "log fit needs positive data");
        if (q <= running) {
            running = q;
            lx.push_back(std::log(g));
            ly.push_back(std::log(q));
        }
    }
    if (lx.size() < 2) throw NumericError(ErrorKind::Domain, "fewer than 2 envelope points");
    LineFit f = fit_line(lx, ly);
    f.envelope_points = lx.size();
    return f;
}

}  // namespace zetalab
