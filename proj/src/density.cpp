#include "zetalab/density.hpp"

#include <algorithm>
#include <cmath>

namespace zetalab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// zeta(s) for real s > 1 at precision p; large s sums directly
Real zeta_real(const Real& s, mpfr_prec_t p) {
    const double sd = s.to_double();
    const double nmax = std::exp2((static_cast<double>(p) + 10.0) / sd);
    if (nmax <= 64.0) {
        Real acc(1L, p);
        Real sw(s, p);
        for (long n = 2; n <= static_cast<long>(nmax) + 1; ++n) acc += exp(-sw * log(Real(n, p)));
        return acc;
    }
    return zeta(Real(s, p));
}

double log2_of(const Real& x) {
    Real a = abs(Real(x, 64));
    if (a.is_zero()) return -1e300;
    Real l(64);
    mpfr_log2(l.get(), a.get(), MPFR_RNDN);
    return l.to_double();
}

struct SeriesResult {
    ValueWithBound vb;
    long terms = 0;
    long bits = 0;
};

long working_bits(double v, const PrecisionContext& ctx, const DensityOptions& opt) {
    const double need = v / kLn2 - log2_of(ctx.abs_tol) + 64.0;
    if (need > static_cast<double>(opt.ceiling_bits))
        throw NumericError(ErrorKind::PrecisionInfeasible,
                           "density series at |z| = " + std::to_string(v) + " needs " +
                               std::to_string(static_cast<long>(std::ceil(need))) + " bits; ceiling is " +
                               std::to_string(opt.ceiling_bits));
    return std::max<long>(ctx.bits, static_cast<long>(std::ceil(need))) + 32;
}

// sum_{k >= k0} (-1)^{k+1} c~(4k) z^{2k}, or its z-derivative
SeriesResult series(long k0, const Complex& z, bool deriv, const PrecisionContext& ctx, const DensityOptions& opt) {
    const double v = abs(z).to_double();
    const long bits = working_bits(v, ctx, opt);
    CoeffTable& tab = CoeffTable::shared();
    const Real quarter_tol = Real(ctx.abs_tol, 64) / 4L;
    const bool real = z.im().is_zero();
    // bits needed by the k-th coefficient: its term's size over the tolerance
    const double lv = std::log2(std::max(v, 1e-300));
    const double ltol = -log2_of(ctx.abs_tol);
    auto coeff_bits = [&](long k) {
        const double lt = 2.0 * k * lv + std::log2(2.0 * k + 1) -
                          (std::lgamma(2.0 * k + 1.25) + std::log(2.0 * k - 0.25) + 0.75 * std::log(M_PI)) / kLn2;
        const double need = lt + ltol + 48.0;
        return std::min<long>(bits, std::max<long>(64, static_cast<long>(std::ceil(need))));
    };
    SeriesResult out;
    out.bits = bits;
    Real mag(0L, 64);
    // kept in mpfr: terms at tiny |z| underflow a double
    Real prev(-1L, 64);
    if (v == 0.0) {
        out.vb = ValueWithBound(Complex(Real(0L, ctx.bits)));
        return out;
    }
    // pw = z^{2k} (or 2k z^{2k-1} scaled on the fly)
    if (real) {
        Real x(z.re(), bits);
        Real x2 = x * x;
        Real pw = pow(x, 2 * k0);
        Real acc(0L, bits);
        Real xinv = deriv ? Real(1L, bits) / x : Real(bits);
        for (long k = k0;; ++k) {
            Real t = tab.ctilde(k, coeff_bits(k)) * pw;
            if (deriv) t *= xinv * (2 * k);
            if (k % 2 == 0) t = -t;
            Real att = abs(Real(t, 64));
            if (static_cast<double>(k) > v / 2 && att < quarter_tol && prev >= 0L && att <= prev / 2L) {
                out.vb.tail_bound = Real(att * 2L, 64);
                out.terms = k - k0;
                break;
            }
            acc += t;
            mag += att;
            prev = att;
            pw *= x2;
            if (k - k0 > ctx.max_series_terms)
                throw NumericError(ErrorKind::BudgetExhausted, "density series did not settle within the term budget");
        }
        out.vb.value = Complex(acc);
    } else {
        Complex zz(Real(z.re(), bits), Real(z.im(), bits));
        Complex z2 = zz * zz;
        Complex pw = pow(zz, 2 * k0);
        Complex acc(Real(0L, bits), Real(0L, bits));
        Complex zinv = deriv ? Complex(Real(1L, bits)) / zz : Complex(bits);
        for (long k = k0;; ++k) {
            Complex t = pw * tab.ctilde(k, coeff_bits(k));
            if (deriv) t = t * zinv * (2 * k);
            if (k % 2 == 0) t = -t;
            Real att(abs(t), 64);
            if (static_cast<double>(k) > v / 2 && att < quarter_tol && prev >= 0L && att <= prev / 2L) {
                out.vb.tail_bound = Real(att * 2L, 64);
                out.terms = k - k0;
                break;
            }
            acc += t;
            mag += att;
            prev = att;
            pw *= z2;
            if (k - k0 > ctx.max_series_terms)
                throw NumericError(ErrorKind::BudgetExhausted, "density series did not settle within the term budget");
        }
        out.vb.value = acc;
    }
    // each term carries a few ulps at the working precision
    const long lg = 4 + static_cast<long>(std::ceil(std::log2(static_cast<double>(out.terms + 2))));
    Real rnd = mag * Real::pow2(-bits + lg, 64);
    out.vb.value.round_to(ctx.bits);
    rnd += Real(abs(out.vb.value), 64) * Real::pow2(-ctx.bits + 1, 64);
    out.vb.rounding_bound = Real(rnd, 64);
    return out;
}

ValueWithBound add_vb(const ValueWithBound& a, const ValueWithBound& b, long sign_b, long bits) {
    Complex v = (sign_b > 0) ? a.value + b.value : a.value - b.value;
    v.round_to(bits);
    ValueWithBound r(v);
    r.tail_bound = Real(a.tail_bound + b.tail_bound, 64);
    r.rounding_bound = Real(a.rounding_bound + b.rounding_bound + Real(abs(v), 64) * Real::pow2(-bits + 1, 64), 64);
    return r;
}

ValueWithBound negate_if(ValueWithBound v, bool neg) {
    if (neg) v.value = -v.value;
    return v;
}

bool is_real_positive(const Complex& z) { return z.im().is_zero() && z.re().sign() > 0; }

}  // namespace

// ---------------------------------------------------------------- coefficients

CoeffTable& CoeffTable::shared() {
    static CoeffTable t;
    return t;
}

void CoeffTable::ensure_chain(long k, long bits) {
    const long need = bits + 32 + 2 * static_cast<long>(std::log2(static_cast<double>(k + 2)));
    if (chain_prec_ < need) {
        chain_prec_ = ((std::max(need, chain_prec_ * 3 / 2) + 63) / 64) * 64;
        const mpfr_prec_t p = chain_prec_;
        gamma_chain_.clear();
        gamma_chain_.push_back(gamma(Real(1.25, p)));
        pi34_ = pow(Real::pi(p), Real(0.75, p));
    }
    const mpfr_prec_t p = chain_prec_;
    while (static_cast<long>(gamma_chain_.size()) <= k) {
        const long j = static_cast<long>(gamma_chain_.size());
        // Gamma(5/4 + 2j) = Gamma(5/4 + 2j - 2) (2j - 3/4)(2j + 1/4)
        Real g = gamma_chain_.back() * Real(2.0 * j - 0.75, p);
        g *= Real(2.0 * j + 0.25, p);
        gamma_chain_.push_back(std::move(g));
    }
}

Real CoeffTable::ctilde(long k, long bits) {
    if (k < 0) throw NumericError(ErrorKind::Domain, "c~(4k) needs k >= 0");
    std::lock_guard<std::mutex> lock(mu_);
    const std::size_t i = static_cast<std::size_t>(k);
    if (vals_.size() <= i) {
        vals_.resize(i + 1, Real(64));
        prec_.resize(i + 1, 0);
    }
    if (prec_[i] < bits) {
        const mpfr_prec_t p = ((bits + 32 + 63) / 64) * 64;
        ensure_chain(k, p);
        Real den = Real(pi34_, p) * Real(gamma_chain_[i], p);
        den *= Real(2.0 * k - 0.25, p);
        den *= zeta_real(Real(4.0 * k + 0.5, p), p);
        vals_[i] = Real(1L, p) / den;
        prec_[i] = p - 32;
    }
    return Real(vals_[i], bits);
}

Real CoeffTable::c4(long k, long bits) {
    Real r(ctilde(k, bits), bits);
    Real pi2 = Real::pi(bits + 16);
    pi2 *= pi2;
    r *= pow(pi2, k);
    if (k % 2 == 1) r = -r;
    r.round_to(bits);
    return r;
}

std::vector<Real> CoeffTable::c4_table(long W, long bits) {
    std::vector<Real> t;
    for (long w = 0; w <= W; ++w) t.push_back(c4(w, bits));
    return t;
}

Real coeff_ctilde(long k, const PrecisionContext& ctx) {
    if (k < 0) throw NumericError(ErrorKind::Domain, "c~(4k) needs k >= 0");
    const mpfr_prec_t p = ctx.bits + 32;
    Real pi34 = pow(Real::pi(p), Real(0.75, p));
    Real z = zeta_real(Real(4.0 * k + 0.5, p), p);
    Real lin(2.0 * k - 0.25, p);
    // Gamma form
    Real g1 = gamma(Real(1.25, p) + 2 * k);
    // Pochhammer form Gamma(5/4) (5/4)_{2k}
    Real g2 = gamma(Real(1.25, p));
    for (long i = 0; i < 2 * k; ++i) g2 *= Real(1.25, p) + i;
    Real a = Real(1L, p) / (pi34 * g1 * lin * z);
    Real b = Real(1L, p) / (pi34 * g2 * lin * z);
    const long digits = static_cast<long>(ctx.bits * 0.30102999566398120);
    Real rel = abs(a - b) / abs(a);
    if (rel > pow(Real(10L, 64), Real(-(digits - 4), 64)))
        throw NumericError(ErrorKind::CrossCheck, "c~(4k): Gamma and Pochhammer forms disagree");
    a.round_to(ctx.bits);
    return a;
}

Real coeff_c4(long k, const PrecisionContext& ctx) {
    Real r = coeff_ctilde(k, ctx.with_bits(ctx.bits + 16));
    Real pi2 = Real::pi(ctx.bits + 16);
    pi2 *= pi2;
    r *= pow(pi2, k);
    if (k % 2 == 1) r = -r;
    r.round_to(ctx.bits);
    return r;
}

double ctilde_stirling_inverse(long k) {
    const double m = 2.0 * static_cast<double>(k);
    return std::sqrt(2 * M_PI) * std::pow(m, 1.75) * std::pow(m / M_E, m);
}

long required_bits(double v, double tol) {
    return static_cast<long>(std::ceil(v / kLn2 + std::log2(1.0 / tol) + 64.0));
}

// ---------------------------------------------------------------- P0, P4w

ValueWithBound P0(const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt) {
    return series(1, z, false, ctx, opt).vb;
}

ValueWithBound P0_derivative(const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt) {
    return series(1, z, true, ctx, opt).vb;
}

namespace {

ValueWithBound p4w_impl(long w, const Complex& z, bool deriv, const PrecisionContext& ctx, const DensityOptions& opt) {
    if (w <= -1) {
        if (!is_real_positive(z))
            throw NumericError(ErrorKind::Domain, "P_{4w} for w <= -1 is defined on the positive real axis");
        const mpfr_prec_t p = ctx.bits + 16;
        Real pi2 = Real::pi(p);
        pi2 *= pi2;
        Real zr(z.re(), p);
        Real arg = pi2 / zr;
        ValueWithBound r = p4w_impl(-(w + 1), Complex(arg), deriv, ctx, opt);
        if (deriv) {
            Real f = -pi2 / (zr * zr);
            r.value *= f;
            r.value.round_to(ctx.bits);
            Real af = abs(Real(f, 64));
            r.tail_bound = Real(r.tail_bound * af, 64);
            r.rounding_bound = Real(r.rounding_bound * af + Real(abs(r.value), 64) * Real::pow2(-ctx.bits + 2, 64), 64);
        }
        return r;
    }
    // (-1)^{w+1} sum_{k>=w+1} c~(4k)(-z^2)^k = (-1)^w sum_{k>=w+1} (-1)^{k+1} c~(4k) z^{2k}
    return negate_if(series(w + 1, z, deriv, ctx, opt).vb, w % 2 != 0);
}

}  // namespace

ValueWithBound P4w_prefix(long w, const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt) {
    if (w < 0) throw NumericError(ErrorKind::Domain, "prefix form needs w >= 0");
    ValueWithBound acc = P0(z, ctx, opt);
    if (w > 0) {
        const long bits = working_bits(abs(z).to_double(), ctx, opt);
        CoeffTable& tab = CoeffTable::shared();
        Complex zz(Real(z.re(), bits), Real(z.im(), bits));
        Complex mz2 = -(zz * zz);
        Complex pw = mz2;
        Complex poly(Real(0L, bits), Real(0L, bits));
        Real mag(0L, 64);
        for (long k = 1; k <= w; ++k) {
            Complex t = pw * tab.ctilde(k, bits);
            poly += t;
            mag += Real(abs(t), 64);
            pw *= mz2;
        }
        ValueWithBound pv(poly);
        pv.rounding_bound = Real(mag * Real::pow2(-bits + 8, 64), 64);
        acc = add_vb(acc, pv, 1, ctx.bits);
    }
    return negate_if(acc, w % 2 != 0);
}

ValueWithBound P4w(long w, const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt) {
    ValueWithBound tail = p4w_impl(w, z, false, ctx, opt);
    if (w >= 1) {
        ValueWithBound pre = P4w_prefix(w, z, ctx, opt);
        Real diff(abs(tail.value - pre.value), 64);
        Real allow = Real(tail.total() + pre.total(), 64) * 2L + Real(abs(tail.value), 64) * Real::pow2(-ctx.bits + 4, 64);
        if (diff > allow)
            throw NumericError(ErrorKind::CrossCheck, "P_{4w}: prefix and tail forms disagree by " + diff.str(6));
    }
    return tail;
}

ValueWithBound P4w_derivative(long w, const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt) {
    return p4w_impl(w, z, true, ctx, opt);
}

// ---------------------------------------------------------------- g, j, g0, h

ValueWithBound g_entire(const Complex& z, const PrecisionContext& ctx, const DensityOptions& opt) {
    const mpfr_prec_t p = ctx.bits + 32;
    Complex zz(Real(z.re(), p), Real(z.im(), p));
    Complex arg = exp(zz * (-2L)) * Real::pi(p);
    return P0(arg, ctx, opt);
}

ValueWithBound j_u(const Real& u, const PrecisionContext& ctx, const DensityOptions& opt) {
    const mpfr_prec_t p = ctx.bits + 32;
    Real uu(u, p);
    Real pi = Real::pi(p);
    ValueWithBound a = P0(Complex(pi * exp(uu * 2L)), ctx, opt);
    ValueWithBound b = P0(Complex(pi * exp(uu * (-2L))), ctx, opt);
    ValueWithBound s = add_vb(a, b, 1, ctx.bits);
    ValueWithBound c0(Complex(Real(CoeffTable::shared().ctilde(0, ctx.bits), ctx.bits)));
    return add_vb(s, c0, -1, ctx.bits);
}

ValueWithBound h_y(double y, const ZeroDerived& d, long N, const PrecisionContext& ctx, const DensityOptions& opt) {
    const mpfr_prec_t p = ctx.bits + 32;
    ValueWithBound lam = lambda_series(y, d, N);
    ValueWithBound pv = P0(Complex(Real::pi(p) * exp(Real(2.0 * y, p))), ctx, opt);
    ValueWithBound c0(Complex(Real(CoeffTable::shared().ctilde(0, ctx.bits), ctx.bits)));
    ValueWithBound lam_w(Complex(Real(lam.value.re(), ctx.bits)), Real(lam.tail_bound), Real(lam.rounding_bound));
    return add_vb(add_vb(lam_w, c0, 1, ctx.bits), pv, -1, ctx.bits);
}

ValueWithBound g0(double y, const ZeroDerived& d, long N, const PrecisionContext& ctx, const DensityOptions& opt) {
    if (y == 0.0) throw NumericError(ErrorKind::Domain, "g0 is defined separately on y < 0 and y > 0");
    if (y < 0) return h_y(y, d, N, ctx, opt);
    const mpfr_prec_t p = ctx.bits + 32;
    return P0(Complex(Real::pi(p) * exp(Real(-2.0 * y, p))), ctx, opt);
}

double y_max(const PrecisionContext& ctx, const DensityOptions& opt) {
    const double v = (static_cast<double>(opt.ceiling_bits) - 64.0 + log2_of(ctx.abs_tol)) * kLn2;
    if (v <= M_PI) return 0.0;
    return 0.5 * std::log(v / M_PI);
}

// ---------------------------------------------------------------- scans

MonotonicityVerdict monotonicity_scan(long w, long n_grid, const PrecisionContext& ctx) {
    if (n_grid < 1000) throw NumericError(ErrorKind::Precondition, "monotonicity_scan needs at least 1000 grid points");
    MonotonicityVerdict mv;
    mv.points = n_grid;
    mv.min_margin = std::numeric_limits<double>::infinity();
    const mpfr_prec_t p = ctx.bits + 16;
    Real pi = Real::pi(p);
    ValueWithBound prev;
    for (long i = 0; i < n_grid; ++i) {
        Real v = pi * i / (n_grid - 1);
        ValueWithBound cur = P4w(w, Complex(v), ctx);
        if (i > 0) {
            Real inc = cur.value.re() - prev.value.re();
            Real margin = inc - cur.total() - prev.total();
            mv.min_margin = std::min(mv.min_margin, margin.to_double());
            if (margin.sign() <= 0) {
                mv.increasing = false;
                if (mv.first_failure < 0) mv.first_failure = i;
            }
            ValueWithBound dv = P4w_derivative(w, Complex(v), ctx);
            if (!(dv.value.re() > dv.total())) {
                mv.derivative_positive = false;
                if (mv.first_failure < 0) mv.first_failure = i;
            }
        }
        prev = cur;
    }
    return mv;
}

GrowthReport growth_probe(double v_max, long n_points, const PrecisionContext& ctx, const DensityOptions& opt) {
    if (n_points < 2 || !(v_max > 1.0)) throw NumericError(ErrorKind::Precondition, "growth_probe: need v_max > 1, >= 2 points");
    GrowthReport g;
    g.min_value = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n_points; ++i) {
        const double v = std::exp(std::log(v_max) * i / (n_points - 1));
        SeriesResult s = series(1, Complex(Real(v, ctx.bits + 64)), false, ctx, opt);
        GrowthRow row;
        row.v = v;
        row.P0 = s.vb.value.re().to_double();
        row.v_quarter = std::pow(v, 0.25);
        row.ratio_05 = std::abs(row.P0) / std::pow(v, 0.30);
        row.ratio_25 = std::abs(row.P0) / std::pow(v, 0.50);
        row.bits = s.bits;
        g.max_abs = std::max(g.max_abs, std::abs(row.P0));
        g.min_value = std::min(g.min_value, row.P0);
        if (!(s.vb.value.re() > s.vb.total())) g.positive = false;
        g.rows.push_back(row);
    }
    return g;
}

Real theta_inverse(const Real& r, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.bits + 16;
    Real pi = Real::pi(p);
    Real top = P0(Complex(pi), ctx).value.re();
    if (!(r > 0.0) || !(r < top))
        throw NumericError(ErrorKind::Domain, "theta: value outside (0, P0(pi)), the range of P0 on [0, pi]");
    return find_root([&](const Real& v) { return Real(P0(Complex(v), ctx).value.re() - r, ctx.bits); }, Real(0L, p),
                     pi, ctx);
}

C5Report c5_evaluate(double A, const PrecisionContext& ctx, long n_scan, const DensityOptions& opt) {
    C5Report r;
    r.A = A;
    r.c0 = CoeffTable::shared().ctilde(0, ctx.bits).to_double();
    const mpfr_prec_t p = ctx.bits + 16;
    Real pi = Real::pi(p);
    r.P0_at_pi = P0(Complex(pi), ctx, opt).value.re().to_double();
    const double gap = r.c0 - A;
    r.cond_i = gap > 0;
    r.cond_ii = gap < r.P0_at_pi;
    if (!(r.cond_i && r.cond_ii)) return r;
    r.v0_defined = true;
    Real th = theta_inverse(Real(gap, p), ctx);
    r.v0 = (th / pi).to_double();
    double hi = M_PI / r.v0;
    const double feasible = (static_cast<double>(opt.ceiling_bits) - 96.0 + log2_of(ctx.abs_tol)) * kLn2;
    if (hi > feasible) {
        hi = feasible;
        r.scan_truncated = true;
    }
    r.scanned_to = hi;
    r.cond_iii = true;
    for (long i = 1; i <= n_scan; ++i) {
        const double v = M_PI * std::exp(std::log(hi / M_PI) * i / n_scan);
        ValueWithBound pv = P0(Complex(Real(v, p)), ctx, opt);
        ++r.scan_points;
        if (!(pv.value.re() > pv.total())) r.cond_iii = false;
    }
    return r;
}

ContinuityReport continuity_criterion(const ZeroDerived& d, long N, const PrecisionContext& ctx, long rhs_terms) {
    if (N < 1 || N > static_cast<long>(d.size())) throw NumericError(ErrorKind::Precondition, "continuity_criterion: bad N");
    ContinuityReport r;
    double s = 0, comp = 0;
    for (long k = 0; k < N; ++k) {
        const double t = d.c[static_cast<std::size_t>(k)].real();
        const double x = s + t;
        comp += (std::abs(s) >= std::abs(t)) ? (s - x) + t : (t - x) + s;
        s = x;
    }
    r.lhs = s + comp;
    r.lhs_tail = d.abs_tail(N, 0);
    CoeffTable& tab = CoeffTable::shared();
    Real acc = tab.c4(0, ctx.bits) / 2L;
    for (long k = 1; k <= rhs_terms; ++k) acc += tab.c4(k, ctx.bits);
    r.rhs = -acc.to_double();
    r.rhs_tail = 2 * abs(tab.c4(rhs_terms + 1, ctx.bits)).to_double();
    r.rhs_terms = rhs_terms;
    r.residual = r.lhs - r.rhs;
    return r;
}

}  // namespace zetalab
