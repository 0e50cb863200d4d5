#include "zetalab/zeros.hpp"

#include "zetalab/specfn.hpp"
#include "zetalab/zeta_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>

namespace zetalab {

namespace {

using CD = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
// enough bits to hold any finite sum of up to ~2^60 doubles exactly
constexpr mpfr_prec_t kExactBits = 2240;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NumericError(ErrorKind::Config, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

template <class T>
void put_vec(std::ostream& os, const std::vector<T>& v) {
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
bool get_vec(std::istream& is, std::vector<T>& v, std::size_t n) {
    v.resize(n);
    return static_cast<bool>(is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T))));
}

constexpr std::uint32_t kTableMagic = 0x545a4c5a;    // "ZLZT"
constexpr std::uint32_t kDerivedMagic = 0x445a4c5a;  // "ZLZD"
constexpr std::uint32_t kTableVersion = 1;
constexpr std::uint32_t kDerivedVersion = 2;

std::shared_ptr<const FastCriticalZeta> fast_zeta(double t_max) {
    static std::mutex mu;
    static std::shared_ptr<const FastCriticalZeta> cached;
    std::lock_guard<std::mutex> lock(mu);
    if (!cached || cached->t_max() < t_max) cached = std::make_shared<FastCriticalZeta>(t_max * 1.001 + 1.0);
    return cached;
}

// exact accumulation of double terms
struct ExactSum {
    Real re{kExactBits}, im{kExactBits};
    double abs_sum = 0;
    void add(CD t) {
        mpfr_add_d(re.get(), re.get(), t.real(), MPFR_RNDN);
        mpfr_add_d(im.get(), im.get(), t.imag(), MPFR_RNDN);
        abs_sum += std::abs(t);
    }
};

}  // namespace

// ---------------------------------------------------------------- table

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

void ZeroTable::validate() const {
    if (count != static_cast<long>(gammas.size())) throw NumericError(ErrorKind::Parse, "zero table count mismatch");
    if (gammas.empty()) throw NumericError(ErrorKind::Parse, "zero table is empty");
    if (!(gammas[0] > 14.0 && gammas[0] < 15.0))
        throw NumericError(ErrorKind::Parse, "first ordinate is not near 14.13; not a zeta zero table");
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (!std::isfinite(gammas[i]) || gammas[i] <= 13.0)
            throw NumericError(ErrorKind::Parse, "ordinate " + std::to_string(i + 1) + " out of range");
        if (i > 0 && !(gammas[i] > gammas[i - 1]))
            throw NumericError(ErrorKind::Parse, "ordinates not strictly ascending at line " + std::to_string(i + 1));
    }
}

std::string default_zero_table_dir() {
    if (const char* env = std::getenv("ZETALAB_ZERO_DIR"); env && *env) return env;
    return ZETALAB_DATA_DIR;
}

std::string default_zero_table_path() { return default_zero_table_dir() + "/zeros_100k.txt"; }

ZeroTable parse_zero_table(const std::string& text, long expected_count) {
    ZeroTable t;
    t.checksum = fnv1a(text);
    t.digits = std::numeric_limits<int>::max();
    std::size_t pos = 0;
    long line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        ++line_no;
        std::size_t a = pos, b = end;
        while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
        pos = end + 1;
        if (a == b) continue;
        double v = 0;
        auto res = std::from_chars(text.data() + a, text.data() + b, v);
        if (res.ec != std::errc() || res.ptr != text.data() + b)
            throw NumericError(ErrorKind::Parse, "line " + std::to_string(line_no) + ": not a decimal number");
        const char* dot = static_cast<const char*>(std::memchr(text.data() + a, '.', b - a));
        int dig = dot ? static_cast<int>(text.data() + b - dot - 1) : 0;
        t.digits = std::min(t.digits, dig);
        if (!t.gammas.empty() && !(v > t.gammas.back()))
            throw NumericError(ErrorKind::Parse, "line " + std::to_string(line_no) + ": ordinates not ascending");
        t.gammas.push_back(v);
        if (expected_count >= 0 && static_cast<long>(t.gammas.size()) == expected_count) break;
    }
    if (t.gammas.empty()) throw NumericError(ErrorKind::Parse, "zero table has no entries");
    if (expected_count >= 0 && static_cast<long>(t.gammas.size()) < expected_count)
        throw NumericError(ErrorKind::Parse, "zero table has " + std::to_string(t.gammas.size()) + " entries, expected " +
                                                 std::to_string(expected_count));
    t.count = static_cast<long>(t.gammas.size());
    t.validate();
    return t;
}

ZeroTable ingest_zero_table(const std::string& path, long expected_count, bool use_cache) {
    const std::string text = read_file(path);
    const std::uint64_t sum = fnv1a(text);
    const std::string side = path + ".bin";
    if (use_cache) {
        std::ifstream in(side, std::ios::binary);
        std::uint32_t magic = 0, version = 0;
        std::uint64_t cs = 0, cnt = 0;
        std::int32_t digits = 0;
        std::int64_t want = 0;
        if (in && get(in, magic) && magic == kTableMagic && get(in, version) && version == kTableVersion &&
            get(in, cs) && cs == sum && get(in, want) && want == expected_count && get(in, cnt) && get(in, digits)) {
            ZeroTable t;
            if (get_vec(in, t.gammas, cnt)) {
                t.count = static_cast<long>(cnt);
                t.digits = digits;
                t.checksum = sum;
                t.source = path;
                t.validate();
                return t;
            }
        }
    }
    ZeroTable t = parse_zero_table(text, expected_count);
    t.source = path;
    if (use_cache) {
        std::ofstream os(side, std::ios::binary | std::ios::trunc);
        if (os) {
            put(os, kTableMagic);
            put(os, kTableVersion);
            put(os, sum);
            put(os, static_cast<std::int64_t>(expected_count));
            put(os, static_cast<std::uint64_t>(t.count));
            put(os, static_cast<std::int32_t>(t.digits));
            put_vec(os, t.gammas);
        }
    }
    return t;
}

Real refine_zero(const Real& seed, const PrecisionContext& ctx) {
    PrecisionContext w = ctx.with_bits(ctx.bits + 32);
    Real t(seed, w.bits);
    const double s0 = seed.to_double();
    if (!(s0 > 1.0)) throw NumericError(ErrorKind::Domain, "refine_zero needs a positive ordinate");
    // a Newton step that wanders more than this left the seed's basin
    const double gap = s0 > 8.0 ? 2 * M_PI / std::log(s0 / (2 * M_PI)) : 1.0;
    const double radius = std::min(0.25, 0.5 * gap);
    const long digits = static_cast<long>((ctx.bits - 10) * 0.30102999566398120);
    const Real tol = pow(Real(10L, 64), Real(-digits, 64));
    const Real half(0.5, w.bits);
    for (int it = 0; it < 50; ++it) {
        Complex s(half, t);
        Real F = eval_xi(s, w).re();
        // d/dt xi(1/2 + i t) = i xi'(1/2 + i t)
        Real dF = -eval_xi_prime(s, w).im();
        if (dF.is_zero()) throw NumericError(ErrorKind::NoConvergence, "refine_zero: flat derivative");
        Real step = F / dF;
        t -= step;
        if (std::abs((t - seed).to_double()) > radius)
            throw NumericError(ErrorKind::NoConvergence, "refine_zero: iteration left the seed's basin");
        if (Real(abs(step), 64) <= tol) {
            t.round_to(ctx.bits);
            return t;
        }
    }
    throw NumericError(ErrorKind::NoConvergence, "refine_zero: no convergence in 50 steps");
}

// ---------------------------------------------------------------- derived data

double ZeroDerived::abs_tail(long N, int p) const {
    if (p < 0 || p > 2) throw NumericError(ErrorKind::Domain, "abs_tail: p must be 0, 1 or 2");
    const long n = static_cast<long>(size());
    if (N < 0 || N > n) throw NumericError(ErrorKind::Precondition, "abs_tail: N exceeds table");
    return suffix[p][static_cast<std::size_t>(N)] + beyond[p];
}

TailFit fit_tail(const std::vector<double>& terms, long N) {
    if (N > static_cast<long>(terms.size())) throw NumericError(ErrorKind::Precondition, "fit_tail: N exceeds data");
    TailFit f;
    if (N < 80) return f;
    const double lo = std::log(static_cast<double>(N) / 10.0), hi = std::log(static_cast<double>(N));
    const int blocks = 8;
    std::vector<double> lx, ly;
    long prev = static_cast<long>(std::ceil(std::exp(lo)));
    for (int b = 1; b <= blocks; ++b) {
        long edge = (b == blocks) ? N : static_cast<long>(std::exp(lo + (hi - lo) * b / blocks));
        if (edge <= prev) continue;
        double s = 0;
        for (long k = prev + 1; k <= edge; ++k) s += terms[static_cast<std::size_t>(k - 1)];
        double width = static_cast<double>(edge - prev);
        if (s > 0) {
            lx.push_back(0.5 * (std::log(static_cast<double>(prev) + 0.5) + std::log(static_cast<double>(edge) + 0.5)));
            ly.push_back(std::log(s / width));
        }
        prev = edge;
    }
    if (lx.size() < 3) return f;
    LineFit lf = fit_line(lx, ly);
    f.j = -lf.slope;
    f.K = std::exp(lf.intercept);
    const double Nd = static_cast<double>(N) + 0.5;
    f.tail = (f.j > 1.0) ? f.K * std::pow(Nd, 1.0 - f.j) / (f.j - 1.0) : kInf;
    return f;
}

void finalize(ZeroDerived& d) {
    const std::size_t n = d.gamma.size();
    d.delta.assign(n, kInf);
    d.delta_prime.assign(n, kInf);
    for (std::size_t k = 0; k < n; ++k) {
        double m = kInf;
        if (k > 0) m = std::min(m, d.gamma[k] - d.gamma[k - 1]);
        if (k + 1 < n) m = std::min(m, d.gamma[k + 1] - d.gamma[k]);
        d.delta[k] = m;
        d.delta_prime[k] = std::min(m, 1.0 / std::log(d.gamma[k]));
    }
    if (d.flagged.size() != n) d.flagged.assign(n, 0);
    for (int p = 0; p < 3; ++p) {
        std::vector<double> terms(n);
        for (std::size_t k = 0; k < n; ++k) terms[k] = std::abs(d.c[k]) * std::pow(d.gamma[k], -p);
        d.suffix[p].assign(n + 1, 0.0);
        for (std::size_t k = n; k-- > 0;) d.suffix[p][k] = d.suffix[p][k + 1] + terms[k];
        d.beyond[p] = fit_tail(terms, static_cast<long>(n)).tail;
    }
}

ZeroDerived derived_from(std::vector<double> gamma, std::vector<CD> c, std::vector<CD> zeta_prime) {
    if (gamma.size() != c.size() || gamma.size() != zeta_prime.size())
        throw NumericError(ErrorKind::Precondition, "derived_from: length mismatch");
    ZeroDerived d;
    d.gamma = std::move(gamma);
    d.c = std::move(c);
    d.zeta_prime = std::move(zeta_prime);
    d.flagged.assign(d.gamma.size(), 0);
    for (std::size_t k = 0; k < d.size(); ++k)
        if (!(std::abs(d.zeta_prime[k]) > 1e-10) || !std::isfinite(std::abs(d.c[k]))) d.flagged[k] = 1;
    finalize(d);
    return d;
}

ZeroDerived derive(const ZeroTable& table, const PrecisionContext& ctx, const DeriveOptions& opt) {
    const std::size_t n = opt.n < 0 ? table.gammas.size() : static_cast<std::size_t>(opt.n);
    if (n > table.gammas.size()) throw NumericError(ErrorKind::Precondition, "derive: n exceeds table size");
    if (n == 0) throw NumericError(ErrorKind::Precondition, "derive: empty selection");
    std::vector<double> gamma(table.gammas.begin(), table.gammas.begin() + static_cast<long>(n));
    std::vector<CD> c, zp;
    const std::string cache = !opt.cache_path.empty() ? opt.cache_path
                              : table.source.empty() ? std::string()
                                                     : table.source + ".derived.bin";
    bool have = false;
    std::uint64_t cached_count = 0;   // entries in a valid cache for this table, if any
    if (opt.use_cache && !cache.empty()) {
        std::ifstream in(cache, std::ios::binary);
        std::uint32_t magic = 0, version = 0;
        std::uint64_t cs = 0, cnt = 0;
        if (in && get(in, magic) && magic == kDerivedMagic && get(in, version) && version == kDerivedVersion &&
            get(in, cs) && cs == table.checksum && get(in, cnt))
            cached_count = cnt;
        if (cached_count >= n) {
            std::vector<CD> c_all, zp_all;
            if (get_vec(in, c_all, cnt) && get_vec(in, zp_all, cnt)) {
                c.assign(c_all.begin(), c_all.begin() + static_cast<long>(n));
                zp.assign(zp_all.begin(), zp_all.begin() + static_cast<long>(n));
                have = true;
            } else {
                cached_count = 0;
            }
        }
    }
    if (!have) {
        auto fz = fast_zeta(gamma.back());
        c.resize(n);
        zp.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double g = gamma[k];
            zp[k] = fz->eval(g, true).dzeta;
            // 1/(b zeta') through logs: b(i gamma) overflows double beyond gamma ~ 900
            std::complex<long double> lg = log_b_imag_axis(g) + std::log(std::complex<long double>(zp[k]));
            std::complex<long double> ck = std::exp(-lg);
            c[k] = CD(static_cast<double>(ck.real()), static_cast<double>(ck.imag()));
        }
        // a longer cache for the same table is kept
        if (opt.use_cache && !cache.empty() && cached_count < n) {
            std::ofstream os(cache, std::ios::binary | std::ios::trunc);
            if (os) {
                put(os, kDerivedMagic);
                put(os, kDerivedVersion);
                put(os, table.checksum);
                put(os, static_cast<std::uint64_t>(n));
                put_vec(os, c);
                put_vec(os, zp);
            }
        }
    }
    ZeroDerived d = derived_from(std::move(gamma), std::move(c), std::move(zp));
    const std::size_t r = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0L, opt.refine)));
    for (std::size_t k = 0; k < r; ++k) {
        Real g = refine_zero(Real(d.gamma[k], ctx.bits), ctx);
        Complex z(Real(0L, ctx.bits), g);
        Complex c1 = coeff_c(z, ctx);
        Complex c2 = coeff_c_via_b(z, ctx);
        Complex zpk = zeta_prime(z + 0.5, ctx);
        d.c[k] = CD(c2.re().to_double(), c2.im().to_double());
        d.zeta_prime[k] = CD(zpk.re().to_double(), zpk.im().to_double());
        d.gamma_refined.push_back(std::move(g));
        d.c_via_nprime.push_back(std::move(c1));
        d.c_via_b.push_back(std::move(c2));
        d.zeta_prime_refined.push_back(std::move(zpk));
    }
    if (r > 0) finalize(d);
    return d;
}

// ---------------------------------------------------------------- constants

SeriesConstants constants(const ZeroDerived& d, long N) {
    if (N < 1 || N > static_cast<long>(d.size())) throw NumericError(ErrorKind::Precondition, "constants: bad N");
    SeriesConstants sc;
    sc.N = N;
    std::vector<double> ta(static_cast<std::size_t>(N)), tb(ta.size()), tc(ta.size());
    for (std::size_t k = 0; k < ta.size(); ++k) {
        const double a = std::abs(d.c[k]);
        ta[k] = 2 * a;
        tb[k] = a / d.delta_prime[k];
        tc[k] = a / (d.gamma[k] * d.gamma[k]);
    }
    for (std::size_t k = 0; k < ta.size(); ++k) {
        sc.A_partial += ta[k];
        sc.B0_partial += tb[k];
        sc.C0_partial += tc[k];
    }
    sc.A_tail = fit_tail(ta, N).tail;
    sc.B0_tail = fit_tail(tb, N).tail;
    sc.C0_tail = fit_tail(tc, N).tail;
    return sc;
}

// ---------------------------------------------------------------- lambda and e

namespace {

void check_N(const ZeroDerived& d, long N) {
    if (N < 0 || N > static_cast<long>(d.size())) throw NumericError(ErrorKind::Precondition, "N exceeds table size");
}

ValueWithBound trig_sum(double y, const ZeroDerived& d, long N, bool cosine, double scale) {
    check_N(d, N);
    // cosine is even, and sine odd, in |y| exactly
    const double ay = std::abs(y);
    const double sgn = (!cosine && y < 0) ? -1.0 : 1.0;
    double sum = 0, comp = 0, mag = 0;
    for (long k = 0; k < N; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const double arg = d.gamma[i] * ay;
        const double t = d.c[i].real() * (cosine ? std::cos(arg) : std::sin(arg));
        // Neumaier summation
        const double s = sum + t;
        comp += (std::abs(sum) >= std::abs(t)) ? (sum - s) + t : (t - s) + sum;
        sum = s;
        mag += std::abs(t);
    }
    const double v = scale * sgn * (sum + comp);
    ValueWithBound r(Complex(v, 0.0, 64));
    r.tail_bound = Real(scale * d.abs_tail(N, 0), 64);
    // argument reduction of gamma*y dominates: |gamma y| eps per term, plus summation
    double arg_err = 0;
    for (long k = 0; k < N; ++k)
        arg_err += std::abs(d.c[static_cast<std::size_t>(k)]) * d.gamma[static_cast<std::size_t>(k)] * ay;
    r.rounding_bound = Real(scale * (4 * kEps * (mag + arg_err) + 2 * kEps * std::abs(sum)), 64);
    return r;
}

}  // namespace

ValueWithBound lambda_series(double y, const ZeroDerived& d, long N) { return trig_sum(y, d, N, true, 2.0); }
ValueWithBound lambda_c(double y, const ZeroDerived& d, long N) { return trig_sum(y, d, N, true, 1.0); }
ValueWithBound lambda_s(double y, const ZeroDerived& d, long N) { return trig_sum(y, d, N, false, 1.0); }

namespace {

ValueWithBound exp_sum(CD z, const ZeroDerived& d, long from, long to) {
    if (z.real() > 0) throw NumericError(ErrorKind::Domain, "e(z) needs Re z <= 0");
    ExactSum acc;
    double arg_err = 0;
    for (long k = from; k <= to; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const CD t = d.c[i] * std::exp(d.gamma[i] * z);
        acc.add(t);
        arg_err += std::abs(t) * (d.gamma[i] * std::abs(z) + 4.0);
    }
    ValueWithBound r(Complex(acc.re, acc.im));
    r.rounding_bound = Real(kEps * arg_err, 64);
    return r;
}

}  // namespace

ValueWithBound e_series(CD z, const ZeroDerived& d, long N) {
    check_N(d, N);
    ValueWithBound r = exp_sum(z, d, 1, N);
    const double next = N < static_cast<long>(d.size()) ? d.gamma[static_cast<std::size_t>(N)] : d.gamma.back();
    r.tail_bound = Real(d.abs_tail(N, 0) * std::exp(-next * std::abs(z.real())), 64);
    return r;
}

ValueWithBound e_partial(CD z, const ZeroDerived& d, long n) {
    check_N(d, n);
    return exp_sum(z, d, 1, n);
}

ValueWithBound e_hat(CD z, const ZeroDerived& d, long n, long N) {
    check_N(d, N);
    if (n < 1) throw NumericError(ErrorKind::Precondition, "e_hat: n >= 1");
    ValueWithBound r = exp_sum(z, d, n, N);
    const double next = N < static_cast<long>(d.size()) ? d.gamma[static_cast<std::size_t>(N)] : d.gamma.back();
    r.tail_bound = Real(d.abs_tail(N, 0) * std::exp(-next * std::abs(z.real())), 64);
    return r;
}

// ---------------------------------------------------------------- partial fractions

ValueWithBound pfe_bounded_eval(const std::vector<PoleTerm>& terms, CD s, int p, double d, double tail_mass,
                                double tail_radius) {
    if (p != 1 && p != 2) throw NumericError(ErrorKind::Domain, "pfe: p must be 1 or 2");
    CD sum = 0, comp = 0;
    double mag = 0;
    const CD sp = (p == 1) ? s : s * s;
    for (const auto& t : terms) {
        if (std::abs(s - t.z) < d || (p == 2 && std::abs(s + t.z) < d))
            throw NumericError(ErrorKind::Pole, "pfe: s within exclusion distance of a pole");
        const CD zp = (p == 1) ? t.z : t.z * t.z;
        const CD term = t.c / (sp - zp);
        const CD x = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - x) + term : (term - x) + sum;
        sum = x;
        mag += std::abs(term);
    }
    ValueWithBound r(Complex(sum + comp, 64));
    r.rounding_bound = Real(8 * kEps * mag, 64);
    if (tail_mass > 0) {
        const double rs = std::abs(s);
        if (!(tail_radius > rs)) {
            r.tail_bound = Real(kInf, 64);
        } else {
            const double j = 1.0 - std::pow(rs / tail_radius, p);
            r.tail_bound = Real(tail_mass / j, 64);
        }
    }
    return r;
}

double pfe_claim_bound(const std::vector<PoleTerm>& terms, CD s, int p, double d) {
    const double r = std::abs(s);
    const double j = 1.0 - std::pow(r / (r + d), p);
    double b = 0;
    for (const auto& t : terms) {
        const double az = std::abs(t.z), ac = std::abs(t.c);
        b += (az < r + d) ? ac * std::pow(d, -p) : ac * std::pow(az, -p) / j;
    }
    return b;
}

ValueWithBound F_series(const Complex& s, const std::vector<Real>& c4, const PrecisionContext& ctx) {
    if (c4.size() < 3) throw NumericError(ErrorKind::Precondition, "F_series: coefficient table too short");
    const mpfr_prec_t p = ctx.bits + 16;
    Complex sw(Real(s.re(), p), Real(s.im(), p));
    const double rs = abs(sw).to_double();
    std::vector<Complex> terms;
    double dmin = kInf;
    for (std::size_t w = 1; w < c4.size(); ++w) {
        Complex den = sw - static_cast<long>(4 * w);
        double dist = abs(den).to_double();
        dmin = std::min(dmin, dist);
        if (dist == 0.0) throw NumericError(ErrorKind::Pole, "F has a pole at s = 4w");
        terms.push_back(Complex(Real(c4[w], p)) / den);
    }
    ValueWithBound r = sum_compensated(terms, ctx.with_bits(p));
    if (dmin < 1e-3 * std::max(1.0, rs) && dmin < ctx.tol())
        throw NumericError(ErrorKind::Pole, "F_series: s too close to a pole");
    // omitted w > W: geometric majorant of |c(4w)| with the last ratio, which only shrinks
    const std::size_t W = c4.size() - 1;
    Real last = abs(c4[W]);
    Real ratio = last / abs(c4[W - 1]);
    if (ratio >= 1.0) throw NumericError(ErrorKind::Precondition, "F_series: coefficients not yet decaying");
    const double radius = 4.0 * static_cast<double>(W + 1);
    if (radius > rs) {
        Real mass = last * ratio / (1L - ratio) / radius;
        Real j = 1L - Real(rs / radius, 64);
        r.tail_bound = Real(r.tail_bound + mass / j, 64);
    } else {
        r.tail_bound = Real(kInf, 64);
    }
    r.value.round_to(ctx.bits);
    return r;
}

ValueWithBound p_r(const Complex& s, const std::vector<Real>& c4, const PrecisionContext& ctx) {
    if (abs(s).to_double() == 0.0) throw NumericError(ErrorKind::Pole, "p_r has a pole at 0");
    ValueWithBound a = F_series(s, c4, ctx);
    ValueWithBound b = F_series(-s, c4, ctx);
    const mpfr_prec_t p = ctx.bits + 16;
    Complex sw(Real(s.re(), p), Real(s.im(), p));
    Complex v = Complex(Real(c4[0], p)) / sw + a.value - b.value;
    v.round_to(ctx.bits);
    ValueWithBound r(v);
    r.tail_bound = Real(a.tail_bound + b.tail_bound, 64);
    r.rounding_bound = Real(a.rounding_bound + b.rounding_bound + Real::pow2(-ctx.bits + 2, 64) * Real(abs(v), 64), 64);
    return r;
}

namespace {

std::vector<PoleTerm> zero_terms(const ZeroDerived& d, long N) {
    std::vector<PoleTerm> t(static_cast<std::size_t>(N));
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = {CD(0.0, d.gamma[k]), d.c[k]};
    return t;
}

double tail_radius(const ZeroDerived& d, long N) {
    return N < static_cast<long>(d.size()) ? d.gamma[static_cast<std::size_t>(N)] : d.gamma.back();
}

}  // namespace

double pole_tail_mass(const ZeroDerived& d, long N, int p) { return d.abs_tail(N, p); }

ValueWithBound p_i(CD s, const ZeroDerived& d, long N) {
    check_N(d, N);
    // s^2 + gamma^2 = s^2 - (i gamma)^2; the pair at -i gamma carries the same c
    ValueWithBound g = pfe_bounded_eval(zero_terms(d, N), s, 2, 0.0, d.abs_tail(N, 2), tail_radius(d, N));
    const CD v = 2.0 * s * CD(g.value.re().to_double(), g.value.im().to_double());
    const double f = 2 * std::abs(s);
    return ValueWithBound(Complex(v, 64), Real(f * g.tail_bound, 64), Real(f * g.rounding_bound + 4 * kEps * std::abs(v), 64));
}

ValueWithBound p_i_plus(CD s, const ZeroDerived& d, long N) {
    check_N(d, N);
    return pfe_bounded_eval(zero_terms(d, N), s, 1, 0.0, d.abs_tail(N, 1), tail_radius(d, N));
}

ValueWithBound p_full(const Complex& s, const std::vector<Real>& c4, const ZeroDerived& d, long N,
                      const PrecisionContext& ctx) {
    ValueWithBound a = p_r(s, c4, ctx);
    ValueWithBound b = p_i(CD(s.re().to_double(), s.im().to_double()), d, N);
    Complex v = a.value + b.value;
    v.round_to(ctx.bits);
    ValueWithBound r(v);
    r.tail_bound = Real(a.tail_bound + b.tail_bound, 64);
    r.rounding_bound = Real(a.rounding_bound + b.rounding_bound, 64);
    return r;
}

// ---------------------------------------------------------------- products

double inverse_square_tail(double G) {
    // N(T) ~ (T/2pi) log(T/2pi e): integral of dN(t)/t^2 over t > G
    return (std::log(G / (2 * M_PI)) + 1.0) / (2 * M_PI * G);
}

Complex big_xi(const Complex& s, const ZeroDerived& d, long N, const PrecisionContext& ctx) {
    check_N(d, N);
    const mpfr_prec_t p = ctx.bits + 24;
    PrecisionContext w = ctx.with_bits(p);
    Complex sw(Real(s.re(), p), Real(s.im(), p));
    Complex prod(Real(1L, p), Real(0L, p));
    Complex esum(Real(0L, p), Real(0L, p));
    for (long k = 0; k < N; ++k) {
        // 1 - s/(i gamma) = 1 + i s/gamma
        Real g(d.gamma[static_cast<std::size_t>(k)], p);
        Complex q = mul_i(sw) / g;
        prod *= (q + 1L);
        esum -= q;
    }
    Complex r = sqrt(eval_xi(Complex(Real(0.5, p), Real(0L, p)), w)) * prod * exp(esum);
    r.round_to(ctx.bits);
    return r;
}

HadamardResult hadamard_check(const Complex& s, const ZeroDerived& d, long N, const PrecisionContext& ctx) {
    check_N(d, N);
    if (abs(s).to_double() > 10.0) throw NumericError(ErrorKind::Precondition, "hadamard_check needs |s| <= 10");
    HadamardResult h;
    const mpfr_prec_t p = ctx.bits + 24;
    PrecisionContext w = ctx.with_bits(p);
    Complex sw(Real(s.re(), p), Real(s.im(), p));
    Complex s2 = sw * sw;
    Complex prod(Real(1L, p), Real(0L, p));
    for (long k = 0; k < N; ++k) {
        Real g(d.gamma[static_cast<std::size_t>(k)], p);
        prod *= (s2 / (g * g) + 1L);
    }
    Complex half(Real(0.5, p), Real(0L, p));
    Complex lhs = eval_xi(half + sw, w);
    Complex rhs = eval_xi(half, w) * prod;
    h.residual = abs(lhs / rhs - 1L).to_double();
    h.predicted = abs(s2).to_double() * inverse_square_tail(tail_radius(d, N));
    Complex fis = big_xi(sw, d, N, w) * big_xi(-sw, d, N, w);
    h.fission_residual = abs((fis - lhs) / lhs).to_double();
    return h;
}

// ---------------------------------------------------------------- C1 path

C1Path c1_path(double alpha, const ZeroDerived& d) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw NumericError(ErrorKind::Domain, "c1_path: alpha must lie in (0, 1/2)");
    if (d.size() < 2) throw NumericError(ErrorKind::Precondition, "c1_path: need at least two zeros");
    C1Path p;
    p.alpha = alpha;
    p.derived = &d;
    return p;
}

long C1Path::bulge_index(double t) const {
    const auto& g = derived->gamma;
    auto it = std::lower_bound(g.begin(), g.end(), t);
    long best = -1;
    for (auto cand : {it, it == g.begin() ? it : it - 1}) {
        if (cand == g.end()) continue;
        const std::size_t k = static_cast<std::size_t>(cand - g.begin());
        if (std::abs(t - g[k]) <= alpha * derived->delta_prime[k]) best = static_cast<long>(k);
    }
    return best;
}

double C1Path::x(double t) const {
    const long k = bulge_index(t);
    if (k < 0) return 0.0;
    const std::size_t i = static_cast<std::size_t>(k);
    const double r = alpha * derived->delta_prime[i];
    const double u = t - derived->gamma[i];
    return std::sqrt(std::max(0.0, r * r - u * u));
}

double C1Path::t_start() const { return derived->gamma[0] - alpha * derived->delta_prime[0]; }

double j_k(const ZeroDerived& d, std::size_t k, double alpha) {
    if (k >= d.size()) throw NumericError(ErrorKind::Precondition, "j_k: index beyond table");
    const double g = d.gamma[k];
    const double r = alpha * d.delta_prime[k];
    auto fz = fast_zeta(g + r + 1.0);
    auto q = [&](double t) {
        const double u = t - g;
        if (std::abs(u) < 1e-7 * r) return std::abs(d.zeta_prime[k]);
        return std::abs(fz->eval(t, false).zeta) / std::abs(u);
    };
    const int n = 33;
    int best = 0;
    double bv = kInf;
    std::vector<double> ts(n);
    for (int i = 0; i < n; ++i) {
        ts[static_cast<std::size_t>(i)] = g - r + 2 * r * i / (n - 1);
        double v = q(ts[static_cast<std::size_t>(i)]);
        if (v < bv) {
            bv = v;
            best = i;
        }
    }
    // golden section on the bracketing pair of cells
    double a = ts[static_cast<std::size_t>(std::max(0, best - 1))];
    double b = ts[static_cast<std::size_t>(std::min(n - 1, best + 1))];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = q(x1), f2 = q(x2);
    for (int it = 0; it < 40 && b - a > 1e-9 * r; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = q(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = q(x2);
        }
    }
    return std::min({bv, f1, f2});
}

PathScan path_scan(const C1Path& path, double t_max, const PrecisionContext& ctx) {
    const ZeroDerived& d = *path.derived;
    if (t_max > d.gamma.back()) throw NumericError(ErrorKind::Precondition, "path_scan: t_max beyond table coverage");
    const double t0 = path.t_start();
    if (!(t_max > t0)) throw NumericError(ErrorKind::Precondition, "path_scan: t_max below the path start");
    auto fz = fast_zeta(t_max + 2.0);
    auto absz = [&](double t) { return std::abs(fz->eval_shifted(path.x(t), t)); };
    PathScan ps;
    std::vector<std::pair<double, double>> gap_points;
    const std::size_t K = static_cast<std::size_t>(std::upper_bound(d.gamma.begin(), d.gamma.end(), t_max) - d.gamma.begin());
    for (std::size_t k = 0; k < K; ++k) ps.j_k.push_back(j_k(d, k, path.alpha));
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double a = d.gamma[k], b = d.gamma[k + 1];
        double m = kInf;
        for (int i = 0; i <= 32; ++i) {
            const double t = a + (b - a) * i / 32.0;
            const double v = absz(t);
            ps.samples.emplace_back(t, v);
            m = std::min(m, v);
        }
        ps.min_per_gap.push_back(m);
        gap_points.emplace_back(a, m);
    }
    // C1' integral, one smooth piece at a time
    std::vector<double> cuts{t0};
    for (std::size_t k = 0; k < K; ++k) {
        const double r = path.alpha * d.delta_prime[k];
        for (double c : {d.gamma[k] - r, d.gamma[k] + r})
            if (c > cuts.back() && c < t_max) cuts.push_back(c);
    }
    cuts.push_back(t_max);
    PrecisionContext qc(64, 1e-12 * std::max(1.0, std::pow(t0, -0.75)));
    ValueWithBound total(Complex(0.0, 0.0, 64));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        ValueWithBound piece = quad_finite(
            [&](const Real& t) {
                const double td = t.to_double();
                return Complex(1.0 / (std::pow(td, 1.75) * absz(td)), 0.0, 64);
            },
            Real(cuts[i], 64), Real(cuts[i + 1], 64), qc);
        total.value += piece.value;
        total.tail_bound = Real(total.tail_bound + piece.tail_bound, 64);
        total.rounding_bound = Real(total.rounding_bound + piece.rounding_bound, 64);
    }
    // fast zeta carries about 1e-12 relative error
    total.rounding_bound = Real(total.rounding_bound + 1e-11 * abs(total.value).to_double(), 64);
    (void)ctx;
    ps.c1_integral = total;
    if (gap_points.size() >= 8) ps.eps0_hat = -fit_log_envelope(gap_points).slope;
    return ps;
}

ExponentEstimates estimate_exponents(const ZeroDerived& d, double alpha, long n_jk, double path_tmax) {
    ExponentEstimates e;
    std::vector<std::pair<double, double>> zp, dl, jk;
    for (std::size_t k = 0; k < d.size(); ++k) {
        zp.emplace_back(d.gamma[k], std::abs(d.zeta_prime[k]));
        if (k > 0) dl.emplace_back(d.gamma[k], d.delta[k]);
    }
    const std::size_t nj = std::min<std::size_t>(d.size(), static_cast<std::size_t>(std::max(0L, n_jk)));
    for (std::size_t k = 0; k < nj; ++k) jk.emplace_back(d.gamma[k], j_k(d, k, alpha));
    // informational: a sample with too few record lows gives NaN rather than an error
    auto slope = [](const std::vector<std::pair<double, double>>& pts) {
        if (pts.size() < 8) return std::numeric_limits<double>::quiet_NaN();
        try {
            return -fit_log_envelope(pts).slope;
        } catch (const NumericError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    e.eps1 = slope(zp);
    e.eps2 = slope(dl);
    e.eps1_tilde = slope(jk);
    if (path_tmax > 0 && path_tmax <= d.gamma.back()) {
        PathScan ps = path_scan(c1_path(alpha, d), path_tmax, PrecisionContext{});
        e.eps0 = ps.eps0_hat;
    }
    e.c2_ii = e.eps1 < 0.75;
    e.c3_ii = e.eps1 + e.eps2 < 0.75;
    e.c4_ii = e.eps1_tilde + e.eps2 <= 1.0;
    for (long k = 10; k <= static_cast<long>(d.size()); k *= 10) {
        const double g = d.gamma[static_cast<std::size_t>(k - 1)];
        e.growth.emplace_back(k, g * std::log(static_cast<double>(k)) / (2 * M_PI * static_cast<double>(k)));
    }
    return e;
}

LambdaInfScan lambda_inf_scan(const ZeroDerived& d, const std::vector<double>& T_grid, long N, double step) {
    check_N(d, N);
    if (N < 1) throw NumericError(ErrorKind::Precondition, "lambda_inf_scan: N >= 1");
    std::vector<double> Ts(T_grid);
    std::sort(Ts.begin(), Ts.end());
    LambdaInfScan out;
    out.A_partial = 2 * (d.suffix[0][0] - d.suffix[0][static_cast<std::size_t>(N)]);
    if (Ts.empty()) return out;
    const double h = step > 0 ? step : 0.1 / d.gamma[static_cast<std::size_t>(N - 1)];
    const std::size_t n = static_cast<std::size_t>(N);
    std::vector<CD> z(n), rot(n);
    for (std::size_t k = 0; k < n; ++k) rot[k] = std::polar(1.0, -d.gamma[k] * h);
    auto reset = [&](double y) {
        for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(1.0, d.gamma[k] * y);
    };
    double running = kInf;
    long i = 0;
    double y = 0;
    reset(0.0);
    for (double T : Ts) {
        while (y >= -T) {
            double v = 0;
            for (std::size_t k = 0; k < n; ++k) v += d.c[k].real() * z[k].real();
            running = std::min(running, 2 * v);
            ++i;
            y = -h * static_cast<double>(i);
            // resynchronise the phasors to keep rotation drift negligible
            if (i % 4096 == 0) {
                reset(y);
            } else {
                for (std::size_t k = 0; k < n; ++k) z[k] *= rot[k];
            }
        }
        out.T.push_back(T);
        out.running_min.push_back(running);
        out.gap_to_minus_A.push_back(running + out.A_partial);
    }
    return out;
}

}  // namespace zetalab
