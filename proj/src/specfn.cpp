#include "zetalab/specfn.hpp"

#include <cmath>
#include <mutex>

namespace zetalab {

// ---- Bernoulli numbers via tangent numbers ----

mpq_class bernoulli(int n) {
    if (n < 0) throw NumericError(ErrorKind::Domain, "bernoulli index must be nonnegative");
    if (n == 0) return mpq_class(1);
    if (n == 1) return mpq_class(-1, 2);
    if (n % 2 == 1) return mpq_class(0);
    static std::mutex mu;
    static std::vector<mpq_class> cache;  // cache[k] = B_{2k}
    std::lock_guard<std::mutex> lock(mu);
    const std::size_t k = static_cast<std::size_t>(n / 2);
    if (k >= cache.size()) {
        std::size_t m = std::max<std::size_t>(k, 2 * cache.size());
        std::vector<mpz_class> T(m + 1);
        T[1] = 1;
        for (std::size_t i = 2; i <= m; ++i) T[i] = (i - 1) * T[i - 1];
        for (std::size_t i = 2; i <= m; ++i)
            for (std::size_t j = i; j <= m; ++j) T[j] = (j - i) * T[j - 1] + (j - i + 2) * T[j];
        std::vector<mpq_class> out(m + 1);
        out[0] = 1;
        for (std::size_t i = 1; i <= m; ++i) {
            mpz_class p4;
            mpz_ui_pow_ui(p4.get_mpz_t(), 4, i);
            mpq_class b(mpz_class(2 * i) * T[i], p4 * (p4 - 1));
            b.canonicalize();
            out[i] = (i % 2 == 1) ? b : mpq_class(-b);
        }
        cache = std::move(out);
    }
    return cache[k];
}

namespace {

Real q_to_real(const mpq_class& q, mpfr_prec_t p) {
    Real r(p);
    mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

long bit_length(double x) {
    long b = 0;
    while (x >= 1.0 && b < 4096) { x /= 2; ++b; }
    return b;
}

bool nonpositive_integer(const Complex& z) {
    if (!z.im().is_zero()) return false;
    if (z.re().sign() > 0) return false;
    return mpfr_integer_p(z.re().get()) != 0;
}

// radius beyond which the Stirling series reaches 2^{-p}
double stirling_radius(mpfr_prec_t p) { return 0.12 * static_cast<double>(p) + 10.0; }

long stirling_shift(const Complex& z, mpfr_prec_t p) {
    double R = stirling_radius(p);
    double x = z.re().to_double(), y = z.im().to_double();
    if (std::abs(y) >= R) return 0;
    double need = std::sqrt(R * R - y * y) - x;
    return need > 0 ? static_cast<long>(std::ceil(need)) : 0;
}

// log Gamma(w) by the Stirling series; |w| >= stirling_radius, Re w > 0
Complex lgamma_stirling(const Complex& w, mpfr_prec_t p) {
    Real pi = Real::pi(p);
    Complex lw = log(w);
    Complex res = (w - 0.5) * lw - w + log(2 * pi) / 2;
    Complex winv = Complex(Real(1L, p)) / w;
    Complex winv2 = winv * winv;
    Complex pw = winv;
    Real eps = Real::pow2(-static_cast<long>(p), 64) * Real(abs(res) + 1, 64);
    for (int k = 1; k < 4 * p; ++k) {
        Real c = q_to_real(bernoulli(2 * k), p) / static_cast<long>(2 * k * (2 * k - 1));
        Complex term = pw * c;
        res += term;
        if (Real(abs(term), 64) < eps) break;
        pw *= winv2;
    }
    return res;
}

}  // namespace

Complex lgamma(const Complex& z_in, const PrecisionContext& ctx) {
    if (nonpositive_integer(z_in)) throw NumericError(ErrorKind::Pole, "log gamma pole at nonpositive integer");
    const double az = abs(z_in).to_double();
    const mpfr_prec_t p = ctx.bits + 16 + bit_length(az * (1.0 + std::log1p(az)));
    Complex z(Real(z_in.re(), p), Real(z_in.im(), p));
    if (z.re() < 0.5) {
        Real pi = Real::pi(p);
        Complex r = log(pi) - log(sin(pi * z)) - lgamma(Complex(1L - z.re(), -z.im()), ctx.with_bits(p));
        r.round_to(ctx.bits);
        return r;
    }
    long m = stirling_shift(z, p);
    Complex w = z + m;
    Complex r = lgamma_stirling(w, p);
    for (long j = 0; j < m; ++j) r -= log(z + j);
    r.round_to(ctx.bits);
    return r;
}

Complex gamma(const Complex& z_in, const PrecisionContext& ctx) {
    if (nonpositive_integer(z_in)) throw NumericError(ErrorKind::Pole, "gamma pole at nonpositive integer");
    const double az = abs(z_in).to_double();
    const mpfr_prec_t p = ctx.bits + 16 + bit_length(az * (1.0 + std::log1p(az)));
    Complex z(Real(z_in.re(), p), Real(z_in.im(), p));
    if (z.re() < 0.5) {
        Real pi = Real::pi(p);
        Complex g1 = gamma(Complex(1L - z.re(), -z.im()), ctx.with_bits(p));
        Complex r = Complex(pi) / (sin(pi * z) * g1);
        r.round_to(ctx.bits);
        return r;
    }
    long m = stirling_shift(z, p);
    Complex w = z + m;
    Complex r = exp(lgamma_stirling(w, p));
    if (m > 0) {
        Complex prod(Real(1L, p));
        for (long j = 0; j < m; ++j) prod *= (z + j);
        r /= prod;
    }
    r.round_to(ctx.bits);
    return r;
}

Complex digamma(const Complex& z_in, const PrecisionContext& ctx) {
    if (nonpositive_integer(z_in)) throw NumericError(ErrorKind::Pole, "digamma pole at nonpositive integer");
    const mpfr_prec_t p = ctx.bits + 20;
    Complex z(Real(z_in.re(), p), Real(z_in.im(), p));
    if (z.re() < 0.5) {
        Real pi = Real::pi(p);
        Complex zz = pi * z;
        Complex cot = cos(zz) / sin(zz);
        Complex r = digamma(Complex(1L - z.re(), -z.im()), ctx.with_bits(p)) - pi * cot;
        r.round_to(ctx.bits);
        return r;
    }
    long m = stirling_shift(z, p);
    Complex w = z + m;
    Complex winv = Complex(Real(1L, p)) / w;
    Complex winv2 = winv * winv;
    Complex r = log(w) - winv / 2;
    Complex pw = winv2;
    Real eps = Real::pow2(-static_cast<long>(p), 64) * Real(abs(r) + 1, 64);
    for (int k = 1; k < 4 * p; ++k) {
        Complex term = pw * (q_to_real(bernoulli(2 * k), p) / static_cast<long>(2 * k));
        r -= term;
        if (Real(abs(term), 64) < eps) break;
        pw *= winv2;
    }
    for (long j = 0; j < m; ++j) r -= Complex(Real(1L, p)) / (z + j);
    r.round_to(ctx.bits);
    return r;
}

// ---- Euler-Maclaurin for sum_{u = a, a+1, ...} u^{-s} ----

namespace {

ZetaEval em_offset(const Complex& s_in, const Real& a, long K_in, long M_fixed, const PrecisionContext& ctx,
                   bool with_derivative) {
    const double sigma = s_in.re().to_double();
    const double tabs = std::abs(s_in.im().to_double());
    const double sabs = abs(s_in).to_double();
    long K = K_in;
    if (K <= 0) {
        double floor_t = tabs / 2.0 + 10.0;
        double floor_p = 0.12 * static_cast<double>(ctx.bits + 20) + 10.0;
        double floor_s = sabs / 2.0 + 10.0;
        K = static_cast<long>(std::ceil(std::max({floor_t, floor_p, floor_s})));
    }
    for (int attempt = 0; attempt < 6; ++attempt) {
        const double U_d = a.to_double() + static_cast<double>(K);
        long guard = 24 + bit_length(static_cast<double>(K));
        if (sigma < 1.0) guard += static_cast<long>(std::ceil((1.0 - sigma) * std::log2(U_d)));
        const mpfr_prec_t p = ctx.bits + guard;
        Complex s(Real(s_in.re(), p), Real(s_in.im(), p));
        Real aa(a, p);
        Complex S(p), dS(p);
        Complex mneg = -s;
        for (long n = 0; n < K; ++n) {
            Real u = aa + n;
            Real lu = log(u);
            Complex t = exp(mneg * lu);
            S += t;
            if (with_derivative) dS -= t * lu;
        }
        Real U = aa + K;
        Real lU = log(U);
        Complex Us = exp(mneg * lU);  // U^{-s}
        Complex s1 = s - 1L;
        Complex U1s = Us * U;        // U^{1-s}
        Complex inv_s1 = Complex(Real(1L, p)) / s1;
        S += U1s * inv_s1;
        S += Us / 2L;
        if (with_derivative) {
            dS += U1s * inv_s1 * (-(lU) - inv_s1);
            dS -= Us * lU / 2L;
        }
        // correction terms c_j Q_j U^{-s}, Q_j = (s)_{2j-1} U^{1-2j}
        Real Uinv2 = Real(1L, p) / (U * U);
        Complex Q = s / U;
        Complex dQ = Complex(Real(1L, p) / U);
        Real fact(1L, p);  // (2j)!
        Real eps_abs = Real(ctx.abs_tol, 64) / 256L;
        Real prev_mag(0.0, 64);
        bool ok = false;
        long j = 1;
        Real last(0.0, 64);
        const long jmax = M_fixed > 0 ? M_fixed : 4 * p + 40;
        for (; j <= jmax; ++j) {
            fact *= static_cast<long>((2 * j - 1) * (2 * j));
            Real c = q_to_real(bernoulli(static_cast<int>(2 * j)), p) / fact;
            Complex T = Q * Us * c;
            Real mag(abs(T), 64);
            S += T;
            Real dmag(0.0, 64);
            if (with_derivative) {
                Complex dT = (dQ - Q * lU) * Us * c;
                dmag = Real(abs(dT), 64);
                dS += dT;
            }
            last = max(mag, dmag);
            if (M_fixed > 0) {
                if (j == M_fixed) { ok = true; break; }
            } else {
                Real rel = Real::pow2(-static_cast<long>(p), 64) * Real(abs(S), 64);
                Real drel = Real::pow2(-static_cast<long>(p), 64) * Real(abs(dS), 64);
                bool v_ok = mag <= eps_abs || mag <= rel;
                bool d_ok = !with_derivative || dmag <= eps_abs || dmag <= drel;
                if (v_ok && d_ok) { ok = true; break; }
                if (j > 3 && last > prev_mag) break;  // asymptotic divergence: cutoff too small
            }
            prev_mag = last;
            // advance to j+1: multiply by (s+2j-1)(s+2j)/U^2
            Complex q1 = s + (2 * j - 1);
            Complex q2 = s + 2 * j;
            Complex q = q1 * q2;
            if (with_derivative) dQ = (dQ * q + Q * (q1 + q2)) * Uinv2;
            Q = Q * q * Uinv2;
        }
        if (ok) {
            ZetaEval r;
            S.round_to(ctx.bits);
            dS.round_to(ctx.bits);
            r.value = S;
            r.deriv = dS;
            r.err = last;
            r.N = K;
            r.M = j;
            return r;
        }
        if (K_in > 0)
            throw NumericError(ErrorKind::NoConvergence, "Euler-Maclaurin parameters too small for requested tolerance");
        K *= 2;
    }
    throw NumericError(ErrorKind::NoConvergence, "Euler-Maclaurin did not converge");
}

void reject_pole(const Complex& s) {
    if (s.im().is_zero() && mpfr_cmp_ui(s.re().get(), 1) == 0) throw NumericError(ErrorKind::Pole, "zeta pole at s = 1");
}

}  // namespace

ZetaEval zeta_em(const Complex& s, const PrecisionContext& ctx, const EulerMaclaurinParams& p, bool with_derivative) {
    reject_pole(s);
    // sum n = 1 .. N-1 then correct at U = N
    long K = p.N > 0 ? p.N - 1 : 0;
    ZetaEval r = em_offset(s, Real(1L, ctx.bits), K, p.M, ctx, with_derivative);
    r.N = r.N + 1;
    return r;
}

Complex zeta(const Complex& s, const PrecisionContext& ctx) { return zeta_em(s, ctx, {}, false).value; }

Complex zeta(const Complex& s, const EulerMaclaurinParams& p, const PrecisionContext& ctx) {
    return zeta_em(s, ctx, p, false).value;
}

Complex zeta_prime(const Complex& s, const PrecisionContext& ctx) { return zeta_em(s, ctx, {}, true).deriv; }

Complex zeta_prime_checked(const Complex& s, const PrecisionContext& ctx) {
    ZetaEval e = zeta_em(s, ctx, {}, true);
    PrecisionContext wide = ctx.with_bits(ctx.bits + ctx.bits / 3 + 16);
    Real h = Real::pow2(-ctx.bits / 3, wide.bits);
    Complex sp(Real(s.re(), wide.bits) + h, Real(s.im(), wide.bits));
    Complex sm(Real(s.re(), wide.bits) - h, Real(s.im(), wide.bits));
    Complex fd = (zeta(sp, wide) - zeta(sm, wide)) / (2 * h);
    Real diff(abs(fd - e.deriv), 64);
    Real allow = Real::pow2(-ctx.bits / 2, 64) * Real(1 + abs(e.deriv) + abs(e.value), 64);
    if (diff > allow) throw NumericError(ErrorKind::CrossCheck, "zeta' analytic vs finite difference: " + diff.str(6));
    return e.deriv;
}

ZetaEval hurwitz_em(const Complex& s, const Real& a, const PrecisionContext& ctx, const EulerMaclaurinParams& p) {
    reject_pole(s);
    if (!(a > 0.0) || a > 1.0) throw NumericError(ErrorKind::Domain, "hurwitz zeta needs 0 < a <= 1");
    return em_offset(s, a, p.N, p.M, ctx, true);
}

Complex hurwitz_zeta(const Complex& s, const Real& a, const PrecisionContext& ctx) {
    reject_pole(s);
    if (!(a > 0.0) || a > 1.0) throw NumericError(ErrorKind::Domain, "hurwitz zeta needs 0 < a <= 1");
    return em_offset(s, a, 0, 0, ctx, false).value;
}

// ---- exponential integral ----

Complex e1_series(const Complex& z_in, const PrecisionContext& ctx) {
    const double az = abs(z_in).to_double();
    const mpfr_prec_t p = ctx.bits + 16 + static_cast<long>(az * 1.4427) + 8;
    Complex z(Real(z_in.re(), p), Real(z_in.im(), p));
    Complex sum(p);
    Complex term = z;  // z^k / k!
    Real eps = Real::pow2(-static_cast<long>(p), 64);
    for (long k = 1; k < 100000; ++k) {
        Complex add = term / k;
        if (k % 2 == 1) sum += add; else sum -= add;
        if (Real(abs(add), 64) < eps * Real(abs(sum) + 1, 64)) break;
        term = term * z / (k + 1);
    }
    Complex r = sum - log(z) - Real::euler_gamma(p);
    r.round_to(ctx.bits);
    return r;
}

Complex e1_continued_fraction(const Complex& z_in, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.bits + 16;
    Complex z(Real(z_in.re(), p), Real(z_in.im(), p));
    // E1(z) = e^{-z} / (z+1 - 1/(z+3 - 4/(z+5 - ...))), modified Lentz
    Real tiny = Real::pow2(-4 * static_cast<long>(p), p);
    Complex one(Real(1L, p));
    Complex f = z + 1L;
    Complex C = f, D(p);
    Real eps = Real::pow2(-static_cast<long>(p) + 2, 64);
    bool done = false;
    for (long n = 1; n < 2000000; ++n) {
        Real an(-static_cast<double>(n) * static_cast<double>(n), p);
        Complex bn = z + (2 * n + 1);
        D = bn + an * D;
        if (Real(abs(D), 64) < Real(tiny, 64)) D = Complex(tiny);
        C = bn + Complex(an) / C;
        if (Real(abs(C), 64) < Real(tiny, 64)) C = Complex(tiny);
        D = one / D;
        Complex delta = C * D;
        f *= delta;
        if (Real(abs(delta - one), 64) < eps) { done = true; break; }
    }
    if (!done) throw NumericError(ErrorKind::NoConvergence, "E1 continued fraction did not converge");
    Complex r = exp(-z) / f;
    r.round_to(ctx.bits);
    return r;
}

Complex exp_integral_e1(const Complex& z, const PrecisionContext& ctx) {
    if (z.re().is_zero() && z.im().is_zero()) throw NumericError(ErrorKind::Pole, "E1 singular at 0");
    if (z.im().is_zero() && z.re().sign() < 0)
        throw NumericError(ErrorKind::Domain, "E1 argument on the branch cut");
    // evaluate in the closed upper half plane; conjugate symmetry is then exact
    if (z.im().sign() < 0) return conj(exp_integral_e1(conj(z), ctx));
    if (abs(z) <= 4.0) return e1_series(z, ctx);
    return e1_continued_fraction(z, ctx);
}

// ---- fast path ----

std::complex<long double> lgamma_ld(std::complex<long double> z) {
    using C = std::complex<long double>;
    if (z.real() < 0.5L) {
        const long double pi = 3.141592653589793238462643383279502884L;
        return std::log(pi) - std::log(std::sin(pi * z)) - lgamma_ld(C(1.0L) - z);
    }
    C shift_log(0.0L, 0.0L);
    while (std::abs(z) < 14.0L) {
        shift_log += std::log(z);
        z += 1.0L;
    }
    static const long double B[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66,
                                    -691.0L / 2730, 7.0L / 6, -3617.0L / 510, 43867.0L / 798, -174611.0L / 330};
    const long double half_log_2pi = 0.918938533204672741780329736405617639861L;
    C r = (z - 0.5L) * std::log(z) - z + half_log_2pi;
    C zi = 1.0L / z, zi2 = zi * zi, pw = zi;
    for (int k = 1; k <= 10; ++k) {
        r += pw * (B[k - 1] / (2.0L * k * (2.0L * k - 1)));
        pw *= zi2;
    }
    return r - shift_log;
}

long double siegel_theta(long double t) {
    const long double pi = 3.141592653589793238462643383279502884L;
    if (t < 10.0L) {
        std::complex<long double> lg = lgamma_ld(std::complex<long double>(0.25L, t / 2));
        return lg.imag() - t / 2 * std::log(pi);
    }
    long double t2 = t * t;
    long double r = t / 2 * std::log(t / (2 * pi)) - t / 2 - pi / 8;
    long double inv = 1.0L / t;
    r += inv / 48 + inv * inv * inv * 7 / 5760 + std::pow(inv, 5) * 31 / 80640 + std::pow(inv, 7) * 127 / 430080 +
         std::pow(inv, 9) * 511 / 1216512;
    (void)t2;
    return r;
}

FastCriticalZeta::FastCriticalZeta(double t_max) : t_max_(t_max) {
    const long n = cutoff(t_max) + 2;
    const std::size_t sz = static_cast<std::size_t>(n + 1);
    a_hh_.resize(sz); a_hl_.resize(sz); a_lo_.resize(sz);
    logn_.resize(sz); rsqrt_.resize(sz); logn_ld_.resize(sz);
    const long double two_pi = 6.283185307179586476925286766559005768L;
    for (long k = 1; k <= n; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        long double L = std::log(static_cast<long double>(k));
        long double a = L / two_pi;
        double hi = static_cast<double>(a);
        double c = 134217729.0 * hi;
        double hh = c - (c - hi);
        a_hh_[i] = hh;
        a_hl_[i] = hi - hh;
        a_lo_[i] = static_cast<double>(a - hi);
        logn_ld_[i] = L;
        logn_[i] = static_cast<double>(L);
        rsqrt_[i] = 1.0 / std::sqrt(static_cast<double>(k));
    }
    mpz_class fact = 1;
    for (int j = 1; j <= 60; ++j) {
        fact *= (2 * j - 1) * (2 * j);
        mpq_class c = bernoulli(2 * j) / mpq_class(fact);
        bern_.push_back(c.get_d());
    }
}

long FastCriticalZeta::cutoff(double t) const { return static_cast<long>(t / 4.0) + 30; }

FastCriticalZeta::Value FastCriticalZeta::eval(double t, bool with_derivative) const {
    if (!(t >= 1.0) || t > t_max_ * 1.0001)
        throw NumericError(ErrorKind::Domain, "fast critical-line zeta: t outside table range");
    using CD = std::complex<double>;
    const long N = cutoff(t);
    const double two_pi = 6.283185307179586476925286766559005768;
    // t split for an exact Dekker product with the tabulated hi parts
    const double ct = 134217729.0 * t;
    const double th = ct - (ct - t);
    const double tl = t - th;
    auto frac_phase = [&](std::size_t i) {
        const double hi = a_hh_[i] + a_hl_[i];
        const double p = t * hi;
        const double err = ((th * a_hh_[i] - p) + th * a_hl_[i] + tl * a_hh_[i]) + tl * a_hl_[i];
        const double f = p - std::floor(p);
        return (f + (err + t * a_lo_[i])) * two_pi;
    };
    double sr = 0, si = 0, dr = 0, di = 0;
    if (with_derivative) {
        for (long n = 1; n < N; ++n) {
            const std::size_t i = static_cast<std::size_t>(n);
            const double ph = frac_phase(i);
            const double c = std::cos(ph), s = std::sin(ph);
            const double m = rsqrt_[i];
            const double l = logn_[i];
            sr += m * c;
            si -= m * s;
            dr -= l * m * c;
            di += l * m * s;
        }
    } else {
        for (long n = 1; n < N; ++n) {
            const std::size_t i = static_cast<std::size_t>(n);
            const double ph = frac_phase(i);
            const double m = rsqrt_[i];
            sr += m * std::cos(ph);
            si -= m * std::sin(ph);
        }
    }
    const CD s(0.5, t);
    const double ph = frac_phase(static_cast<std::size_t>(N));
    const double U = static_cast<double>(N);
    const CD Us = rsqrt_[static_cast<std::size_t>(N)] * CD(std::cos(ph), -std::sin(ph));
    const CD U1s = Us * U;
    const CD inv_s1 = 1.0 / (s - 1.0);
    const double lUd = logn_[static_cast<std::size_t>(N)];
    CD S = U1s * inv_s1 + Us * 0.5;
    CD dS = with_derivative ? U1s * inv_s1 * (-lUd - inv_s1) - Us * lUd * 0.5 : CD(0, 0);
    CD Q = s / U, dQ = CD(1.0 / U, 0.0);
    const double Uinv2 = 1.0 / (U * U);
    for (int j = 1; j <= 60; ++j) {
        const double c = bern_[static_cast<std::size_t>(j - 1)];
        CD T = Q * Us * c;
        S += T;
        if (with_derivative) dS += (dQ - Q * lUd) * Us * c;
        if (std::abs(T) < 1e-18) break;
        CD q1 = s + (2.0 * j - 1), q2 = s + 2.0 * j;
        CD q = q1 * q2;
        if (with_derivative) dQ = (dQ * q + Q * (q1 + q2)) * Uinv2;
        Q = Q * q * Uinv2;
    }
    Value v;
    v.zeta = CD(sr, si) + S;
    v.dzeta = CD(dr, di) + dS;
    return v;
}

std::complex<double> FastCriticalZeta::eval_shifted(double x, double t) const {
    if (x == 0.0) return eval(t, false).zeta;
    if (!(t >= 1.0) || t > t_max_ * 1.0001 || !(x > -0.25 && x < 1.0))
        throw NumericError(ErrorKind::Domain, "fast zeta: point outside supported range");
    using CD = std::complex<double>;
    const long N = cutoff(t);
    const double two_pi = 6.283185307179586476925286766559005768;
    const double ct = 134217729.0 * t;
    const double th = ct - (ct - t);
    const double tl = t - th;
    auto frac_phase = [&](std::size_t i) {
        const double hi = a_hh_[i] + a_hl_[i];
        const double p = t * hi;
        const double err = ((th * a_hh_[i] - p) + th * a_hl_[i] + tl * a_hh_[i]) + tl * a_hl_[i];
        const double f = p - std::floor(p);
        return (f + (err + t * a_lo_[i])) * two_pi;
    };
    double sr = 0, si = 0;
    for (long n = 1; n < N; ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        const double ph = frac_phase(i);
        const double m = rsqrt_[i] * std::exp(-x * logn_[i]);
        sr += m * std::cos(ph);
        si -= m * std::sin(ph);
    }
    const CD s(0.5 + x, t);
    const std::size_t iN = static_cast<std::size_t>(N);
    const double ph = frac_phase(iN);
    const double U = static_cast<double>(N);
    const CD Us = rsqrt_[iN] * std::exp(-x * logn_[iN]) * CD(std::cos(ph), -std::sin(ph));
    CD S = Us * U / (s - 1.0) + Us * 0.5;
    CD Q = s / U;
    const double Uinv2 = 1.0 / (U * U);
    for (int j = 1; j <= 60; ++j) {
        CD T = Q * Us * bern_[static_cast<std::size_t>(j - 1)];
        S += T;
        if (std::abs(T) < 1e-18) break;
        Q = Q * (s + (2.0 * j - 1)) * (s + 2.0 * j) * Uinv2;
    }
    return CD(sr, si) + S;
}

double FastCriticalZeta::hardy_z(double t) const {
    const long double two_pi = 6.283185307179586476925286766559005768L;
    long double th = siegel_theta(t);
    th -= two_pi * std::nearbyint(th / two_pi);
    std::complex<double> z = eval(t, false).zeta;
    return (std::complex<double>(std::cos(static_cast<double>(th)), std::sin(static_cast<double>(th))) * z).real();
}

}  // namespace zetalab
