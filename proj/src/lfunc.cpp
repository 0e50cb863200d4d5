#include "zetalab/lfunc.hpp"

#include "zetalab/specfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

namespace zetalab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = 0x1p-52;

CD to_cd(const Complex& z) { return {z.re().to_double(), z.im().to_double()}; }

long powmod(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = static_cast<long>(static_cast<__int128>(r) * b % m);
        b = static_cast<long>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

std::vector<std::pair<long, int>> factor(long n) {
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// x = a mod m1, x = 1 mod m2, gcd(m1, m2) = 1
long crt_lift(long a, long m1, long m2) {
    if (m2 == 1) return a % m1;
    for (long x = a % m1; x < m1 * m2; x += m1)
        if (x % m2 == 1 % m2) return x;
    throw NumericError(ErrorKind::Domain, "crt_lift failed");
}

// exact values at multiples of a quarter turn
CD root_of_unity(long num, long den) {
    num = ((num % den) + den) % den;
    if (num == 0) return {1, 0};
    if (4 * num == den) return {0, 1};
    if (2 * num == den) return {-1, 0};
    if (4 * num == 3 * den) return {0, -1};
    const double a = 2 * kPi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(a), std::sin(a)};
}

std::mutex prime_mu;
std::vector<long> prime_cache;
long prime_cache_limit = 0;

}  // namespace

// ---------------------------------------------------------------- characters

CD CharacterSpec::operator()(long n) const {
    const long r = ((n % k) + k) % k;
    return values[static_cast<std::size_t>(r)];
}

CharacterSpec CharacterSpec::conj() const {
    CharacterSpec c(*this);
    for (auto& v : c.values) v = std::conj(v);
    // the conjugate of index j has exponents -a_i mod ord_i
    std::vector<long> ord;
    unit_generators(k, &ord);
    long rest = index, idx = 0, mult = 1;
    std::vector<long> a(ord.size());
    for (std::size_t i = ord.size(); i-- > 0;) {
        a[i] = rest % ord[i];
        rest /= ord[i];
    }
    for (std::size_t i = ord.size(); i-- > 0;) {
        idx += ((ord[i] - a[i]) % ord[i]) * mult;
        mult *= ord[i];
    }
    c.index = idx;
    return c;
}

std::string CharacterSpec::label() const { return "mod:" + std::to_string(k) + ",index:" + std::to_string(index); }

void CharacterSpec::validate() const {
    if (k < 1 || static_cast<long>(values.size()) != k) throw NumericError(ErrorKind::Domain, "character table size");
    for (long n = 0; n < k; ++n) {
        const bool unit = std::gcd(n, k) == 1;
        const CD v = values[static_cast<std::size_t>(n)];
        if (!unit && v != CD(0, 0)) throw NumericError(ErrorKind::Domain, "character nonzero off the units");
        if (unit && std::abs(std::abs(v) - 1) > 1e-14) throw NumericError(ErrorKind::Domain, "character value not on the circle");
    }
    for (long a = 1; a < k; ++a)
        for (long b = 1; b < k; ++b) {
            if (std::gcd(a, k) != 1 || std::gcd(b, k) != 1) continue;
            if (std::abs((*this)(a * b) - (*this)(a) * (*this)(b)) > 1e-13)
                throw NumericError(ErrorKind::Domain, "character not multiplicative");
        }
    const CD m1 = (*this)(k - 1);
    if ((parity == 0) != (std::abs(m1 - 1.0) < 1e-13)) throw NumericError(ErrorKind::Domain, "character parity flag");
}

std::vector<long> unit_generators(long k, std::vector<long>* orders) {
    if (k < 1) throw NumericError(ErrorKind::Precondition, "modulus must be >= 1");
    std::vector<long> gens, ords;
    for (auto [p, e] : factor(k)) {
        const long pe = ipow(p, e), other = k / pe;
        if (p == 2) {
            if (e == 1) continue;
            gens.push_back(crt_lift(pe - 1, pe, other));
            ords.push_back(2);
            if (e >= 3) {
                gens.push_back(crt_lift(5, pe, other));
                ords.push_back(pe / 4);
            }
            continue;
        }
        const long phi = pe / p * (p - 1);
        auto pf = factor(p - 1);
        long g = 2;
        for (;; ++g) {
            bool prim = true;
            for (auto [q, qe] : pf) {
                (void)qe;
                if (powmod(g, (p - 1) / q, p) == 1) prim = false;
            }
            if (prim && (e == 1 || powmod(g, p - 1, p * p) != 1)) break;
        }
        gens.push_back(crt_lift(g, pe, other));
        ords.push_back(phi);
    }
    if (orders) *orders = ords;
    return gens;
}

std::vector<CharacterSpec> enumerate_characters(long k) {
    std::vector<long> ord;
    std::vector<long> gens = unit_generators(k, &ord);
    const std::size_t r = gens.size();
    // exponent tuple of every unit
    std::vector<std::vector<long>> exps(static_cast<std::size_t>(k));
    long total = 1;
    for (long o : ord) total *= o;
    for (long code = 0; code < total; ++code) {
        std::vector<long> e(r);
        long rest = code, n = 1 % k;
        for (std::size_t i = r; i-- > 0;) {
            e[i] = rest % ord[i];
            rest /= ord[i];
        }
        for (std::size_t i = 0; i < r; ++i) n = static_cast<long>(static_cast<__int128>(n) * powmod(gens[i], e[i], k) % k);
        exps[static_cast<std::size_t>(n)] = e;
    }
    long L = 1;
    for (long o : ord) L = std::lcm(L, o);
    std::vector<CharacterSpec> out;
    for (long j = 0; j < total; ++j) {
        std::vector<long> a(r);
        long rest = j;
        for (std::size_t i = r; i-- > 0;) {
            a[i] = rest % ord[i];
            rest /= ord[i];
        }
        CharacterSpec c;
        c.k = k;
        c.index = j;
        c.values.assign(static_cast<std::size_t>(k), CD(0, 0));
        for (long n = 0; n < k; ++n) {
            if (std::gcd(n, k) != 1) continue;
            const auto& e = exps[static_cast<std::size_t>(n)];
            long num = 0;
            for (std::size_t i = 0; i < r; ++i) num += a[i] * e[i] * (L / ord[i]);
            c.values[static_cast<std::size_t>(n)] = root_of_unity(num, L);
        }
        if (k == 1) c.values[0] = 1;
        c.principal = (j == 0);
        c.real_valued = std::all_of(c.values.begin(), c.values.end(), [](CD v) { return v.imag() == 0; });
        c.parity = (k <= 2 || c(k - 1) == CD(1, 0)) ? 0 : 1;
        c.validate();
        out.push_back(std::move(c));
    }
    return out;
}

CharacterSpec parse_character(const std::string& spec) {
    long k = -1, j = -1;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw NumericError(ErrorKind::Domain, "character spec: expected key:value");
        const std::string key = part.substr(0, colon), val = part.substr(colon + 1);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != val.size() || val.empty()) throw NumericError(ErrorKind::Domain, "character spec: bad integer '" + val + "'");
        if (key == "mod") k = v;
        else if (key == "index") j = v;
        else throw NumericError(ErrorKind::Domain, "character spec: unknown key '" + key + "'");
    }
    if (k < 1 || j < 0) throw NumericError(ErrorKind::Domain, "character spec needs mod:k,index:j");
    auto all = enumerate_characters(k);
    if (j >= static_cast<long>(all.size())) throw NumericError(ErrorKind::Domain, "character index out of range");
    return all[static_cast<std::size_t>(j)];
}

bool is_primitive(const CharacterSpec& chi) {
    for (long d = 1; d < chi.k; ++d) {
        if (chi.k % d) continue;
        bool induced = true;
        for (long n = 1; n < chi.k && induced; ++n)
            if (std::gcd(n, chi.k) == 1 && n % d == 1 % d && std::abs(chi(n) - 1.0) > 1e-13) induced = false;
        if (induced) return false;
    }
    return true;
}

CD gauss_sum(const CharacterSpec& chi) {
    CD g = 0;
    for (long r = 1; r <= chi.k; ++r) g += chi(r) * root_of_unity(r, chi.k);
    return g;
}

CD omega(const CharacterSpec& chi) {
    const CD j = chi.parity == 0 ? CD(1, 0) : CD(0, -1);
    return j * gauss_sum(chi) / std::sqrt(static_cast<double>(chi.k));
}

std::vector<long> primes_up_to(long n) {
    std::lock_guard<std::mutex> lock(prime_mu);
    if (n > prime_cache_limit) {
        const long lim = std::max(n, 2 * prime_cache_limit);
        std::vector<bool> comp(static_cast<std::size_t>(lim + 1), false);
        prime_cache.clear();
        for (long i = 2; i <= lim; ++i) {
            if (comp[static_cast<std::size_t>(i)]) continue;
            prime_cache.push_back(i);
            for (long j = i * i; j <= lim; j += i) comp[static_cast<std::size_t>(j)] = true;
        }
        prime_cache_limit = lim;
    }
    auto end = std::upper_bound(prime_cache.begin(), prime_cache.end(), n);
    return std::vector<long>(prime_cache.begin(), end);
}

// ---------------------------------------------------------------- L(s, chi)

LValue L_euler(CD s, const CharacterSpec& chi, long P) {
    const double sg = s.real();
    if (sg < 1.05) throw NumericError(ErrorKind::Precondition, "Euler product needs Re s >= 1.05");
    // |log L - log L_P| <= P^{1-sigma} / ((sigma - 1)(1 - P^{-sigma}))
    auto log_tail = [&](double p) { return std::pow(p, 1 - sg) / ((sg - 1) * (1 - std::pow(p, -sg))); };
    if (P <= 0) {
        P = static_cast<long>(std::ceil(std::pow(1e-12 * (sg - 1), 1 / (1 - sg))));
        P = std::clamp(P, 100L, 20000000L);
    }
    const std::vector<long> ps = primes_up_to(P);
    CD acc = 0, comp = 0;
    double mag = 0;
    for (long p : ps) {
        const CD c = chi(p);
        if (c == CD(0, 0)) continue;
        const CD t = -std::log(1.0 - c * std::exp(-s * std::log(static_cast<double>(p))));
        const CD y = t - comp;
        const CD u = acc + y;
        comp = (u - acc) - y;
        acc = u;
        mag += std::abs(t) * (1 + std::abs(s) * std::log(static_cast<double>(p)));
    }
    LValue r;
    r.value = std::exp(acc);
    r.primes = static_cast<long>(ps.size());
    const double T = log_tail(static_cast<double>(P));
    r.bound = std::abs(r.value) * (std::expm1(T) + 4 * kEps * (mag + std::abs(acc) + 1));
    return r;
}

namespace {

Complex L_hurwitz_mp(const Complex& s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    const mpfr_prec_t p = ctx.bits;
    const bool at_one = s.im().is_zero() && (s.re() == Real(1L, p));
    if (at_one && chi.principal) throw NumericError(ErrorKind::Pole, "L(s, chi) has a pole at s = 1 for principal chi");
    Complex acc(Real(0L, p), Real(0L, p));
    const Real kr(chi.k, p);
    for (long r = 1; r <= chi.k; ++r) {
        const CD c = chi(r);
        if (c == CD(0, 0)) continue;
        const Real a = Real(r, p) / kr;
        Complex term = at_one ? digamma(Complex(a), ctx) : hurwitz_zeta(s, a, ctx);
        acc += Complex(c, p) * term;
    }
    if (at_one) return -acc / kr;
    return pow(kr, -s) * acc;
}

Complex q_chi_mp(const Complex& s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    if (chi.principal || chi.k <= 1) throw NumericError(ErrorKind::Precondition, "q(s, chi) needs a non-principal character");
    const mpfr_prec_t p = ctx.bits;
    const Real kp = Real(chi.k, p) / Real::pi(p);
    return pow(kp, s / 2L) * gamma((s + static_cast<long>(chi.parity)) / 2L, ctx) * L_hurwitz_mp(s, chi, ctx);
}

}  // namespace

CD L_hurwitz(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    return to_cd(L_hurwitz_mp(Complex(s, ctx.bits), chi, ctx));
}

CD f_parity(CD s, int chi_minus_one) {
    return chi_minus_one < 0 ? std::sin(kPi * s / 4.0) : s * std::cos(kPi * s / 4.0);
}

CD q_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    return to_cd(q_chi_mp(Complex(s, ctx.bits), chi, ctx));
}

namespace {
int chi_m1(const CharacterSpec& chi) { return chi.parity == 0 ? 1 : -1; }
}  // namespace

CD v_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    return f_parity(s, chi_m1(chi)) * q_chi(0.5 + s, chi, ctx);
}

CD g_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    return v_chi(s, chi, ctx) * v_chi(s, chi.conj(), ctx);
}

CD h_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    return s * std::sin(kPi * s / 2.0) * q_chi(0.5 + s, chi, ctx) * q_chi(0.5 + s, chi.conj(), ctx);
}

CD j_chi(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    return f_parity(2.0 * s, chi_m1(chi)) * q_chi(0.5 + s, chi, ctx) * q_chi(0.5 + s, chi.conj(), ctx);
}

namespace {

// rounding of a value assembled from Hurwitz sums at ctx: absolute tol per sum, scaled by
// the prefactors, plus the final conversion to double
double q_budget(CD s, const CharacterSpec& chi, const PrecisionContext& ctx, CD value) {
    const Complex sc(s, ctx.bits);
    const double pref = abs(pow(Real(chi.k, ctx.bits) / Real::pi(ctx.bits), sc / 2L) *
                            gamma((sc + static_cast<long>(chi.parity)) / 2L, ctx))
                            .to_double();
    const double ks = std::pow(static_cast<double>(chi.k), -s.real());
    return pref * ks * static_cast<double>(chi.k) * ctx.tol() + 8 * kEps * std::abs(value);
}

}  // namespace

FEResidual fe_residual(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    FEResidual r;
    const CharacterSpec cc = chi.conj();
    const CD w = omega(chi);
    r.lhs = q_chi(1.0 - s, chi, ctx);
    const CD q = q_chi(s, cc, ctx);
    r.rhs = w * q;
    r.residual = std::abs(r.lhs - r.rhs);
    r.budget = q_budget(1.0 - s, chi, ctx, r.lhs) + q_budget(s, cc, ctx, q) + 8 * kEps * std::abs(r.rhs);
    r.pass = r.residual <= r.budget;
    return r;
}

FEResidual v_reflection_residual(CD s, const CharacterSpec& chi, const PrecisionContext& ctx) {
    FEResidual r;
    const CharacterSpec cc = chi.conj();
    r.lhs = v_chi(-s, chi, ctx);
    const CD v = v_chi(s, cc, ctx);
    r.rhs = -omega(chi) * v;
    r.residual = std::abs(r.lhs - r.rhs);
    r.budget = std::abs(f_parity(-s, chi_m1(chi))) * q_budget(0.5 - s, chi, ctx, r.lhs) +
               std::abs(f_parity(s, chi_m1(chi))) * q_budget(0.5 + s, cc, ctx, v) + 16 * kEps * (std::abs(r.lhs) + std::abs(r.rhs));
    r.pass = r.residual <= r.budget;
    return r;
}

const char* to_string(Builder b) {
    switch (b) {
        case Builder::V: return "v";
        case Builder::G: return "g";
        case Builder::H: return "h";
        case Builder::J: return "j";
    }
    return "?";
}

Builder parse_builder(const std::string& s) {
    if (s == "v") return Builder::V;
    if (s == "g") return Builder::G;
    if (s == "h") return Builder::H;
    if (s == "j") return Builder::J;
    throw NumericError(ErrorKind::Domain, "builder must be one of v, g, h, j");
}

namespace {

double bisect_root(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 80 && b - a > 1e-13; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if (fm == 0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// real zeros of a function real on the real axis: sign changes, plus touching zeros
// where |n| dips to rounding level
std::vector<double> real_zeros(const CFun& n, double hi) {
    auto re = [&](double x) { return n(CD(x, 0)).real(); };
    std::vector<double> zs;
    const double h = 0.05;
    const long m = static_cast<long>(std::ceil(2 * hi / h));
    std::vector<double> xs(static_cast<std::size_t>(m + 1)), vs(xs.size());
    for (long i = 0; i <= m; ++i) {
        xs[static_cast<std::size_t>(i)] = -hi + h * i + 1e-9;
        vs[static_cast<std::size_t>(i)] = re(xs[static_cast<std::size_t>(i)]);
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (vs[i] == 0) {
            zs.push_back(xs[i]);
        } else if ((vs[i] < 0) != (vs[i + 1] < 0) && vs[i + 1] != 0) {
            zs.push_back(bisect_root(re, xs[i], xs[i + 1]));
        } else if (i > 0 && std::abs(vs[i]) < std::abs(vs[i - 1]) && std::abs(vs[i]) < std::abs(vs[i + 1])) {
            // golden section on |n| for a double zero
            double a = xs[i - 1], b = xs[i + 1];
            const double g = 0.5 * (std::sqrt(5.0) - 1);
            for (int k = 0; k < 100 && b - a > 1e-12; ++k) {
                const double c = b - g * (b - a), d = a + g * (b - a);
                if (std::abs(re(c)) < std::abs(re(d))) b = d;
                else a = c;
            }
            const double u = 0.5 * (a + b);
            const double scale = std::max(std::abs(vs[i - 1]), std::abs(vs[i + 1]));
            if (std::abs(re(u)) <= 1e-9 * scale) zs.push_back(u);
        }
    }
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end(), [](double a, double b) { return std::abs(a - b) < 1e-6; }), zs.end());
    return zs;
}

GrooveProbe probe_with(const std::string& target, const CFun& n, const GrooveGrid& grid) {
    GrooveProbe g;
    g.target = target;
    g.scan = ridge_groove_scan(n, grid.xs, grid.ts);
    g.real_zeros = real_zeros(n, grid.zero_scan_hi);
    // first strip between successive real zeros with left edge >= 0
    auto it = std::lower_bound(g.real_zeros.begin(), g.real_zeros.end(), -1e-6);
    if (it == g.real_zeros.end() || it + 1 == g.real_zeros.end())
        throw NumericError(ErrorKind::NoSignChange, "groove probe: fewer than two real zeros at or right of 0");
    g.strip_lo = *it;
    g.strip_hi = *(it + 1);
    g.strip_x = 0.5 * (g.strip_lo + g.strip_hi);
    const CD nx = n(CD(g.strip_x, 0));
    // equals the sign of n' at a simple zero on the left edge
    g.sigma = nx.real() >= 0 ? 1 : -1;
    std::vector<double> ts;
    for (long i = 0; i < grid.pd_m; ++i) ts.push_back(grid.pd_step * static_cast<double>(i));
    const double x = g.strip_x;
    g.pd = pd_probe([&](double w) { return nx / n(CD(x, w)); }, ts);
    return g;
}

}  // namespace

GrooveProbe groove_probe_dirichlet(const CharacterSpec& chi, Builder b, const GrooveGrid& grid,
                                   const PrecisionContext& ctx) {
    if (chi.principal) throw NumericError(ErrorKind::Precondition, "groove probe needs a non-principal character");
    if (b == Builder::V && !chi.real_valued) throw NumericError(ErrorKind::Precondition, "builder v needs a real character");
    if (b == Builder::J && chi.real_valued) throw NumericError(ErrorKind::Precondition, "builder j needs a nonreal character");
    CFun n;
    switch (b) {
        case Builder::V: n = [&](CD s) { return v_chi(s, chi, ctx); }; break;
        case Builder::G: n = [&](CD s) { return g_chi(s, chi, ctx); }; break;
        case Builder::H: n = [&](CD s) { return h_chi(s, chi, ctx); }; break;
        case Builder::J: n = [&](CD s) { return j_chi(s, chi, ctx); }; break;
    }
    return probe_with(std::string("dirichlet ") + chi.label() + " builder " + to_string(b), n, grid);
}

// ---------------------------------------------------------------- Ramanujan tau

std::string to_string_i128(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

using Poly = std::vector<__int128>;

void checked_fma(__int128& acc, __int128 a, __int128 b) {
    __int128 p;
    if (__builtin_mul_overflow(a, b, &p) || __builtin_add_overflow(acc, p, &acc))
        throw NumericError(ErrorKind::NonFinite, "tau expansion overflowed 128-bit integers");
}

Poly mul_trunc(const Poly& a, const Poly& b, std::size_t deg) {
    Poly c(deg + 1, 0);
    for (std::size_t i = 0; i <= deg && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j <= deg && j < b.size(); ++j)
            if (b[j] != 0) checked_fma(c[i + j], a[i], b[j]);
    }
    return c;
}

RamanujanSeries from_power(const Poly& p, long n_max) {
    RamanujanSeries t;
    t.n_max = n_max;
    t.tau.assign(static_cast<std::size_t>(n_max + 1), 0);
    for (long n = 1; n <= n_max; ++n) t.tau[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n - 1)];
    return t;
}

}  // namespace

RamanujanSeries tau_table(long n_max) {
    if (n_max < 1 || n_max > 10000) throw NumericError(ErrorKind::Precondition, "tau_table needs 1 <= n_max <= 10000");
    const std::size_t D = static_cast<std::size_t>(n_max - 1);
    Poly base(D + 1, 0);
    base[0] = 1;
    for (std::size_t n = 1; n <= D; ++n)
        for (std::size_t i = D; i >= n; --i) base[i] -= base[i - n];
    Poly result(D + 1, 0);
    result[0] = 1;
    for (unsigned e = 24;;) {
        if (e & 1u) result = mul_trunc(result, base, D);
        e >>= 1;
        if (!e) break;
        base = mul_trunc(base, base, D);
    }
    return from_power(result, n_max);
}

RamanujanSeries tau_table_jacobi(long n_max) {
    if (n_max < 1) throw NumericError(ErrorKind::Precondition, "tau_table_jacobi needs n_max >= 1");
    const std::size_t D = static_cast<std::size_t>(n_max - 1);
    std::vector<std::pair<std::size_t, __int128>> cube;
    for (std::size_t m = 0; m * (m + 1) / 2 <= D; ++m)
        cube.emplace_back(m * (m + 1) / 2, static_cast<__int128>((m % 2 ? -1 : 1) * static_cast<long>(2 * m + 1)));
    Poly d(D + 1, 0);
    for (auto [e, c] : cube) d[e] = c;
    for (int rep = 1; rep < 8; ++rep) {
        Poly nd(D + 1, 0);
        for (std::size_t i = 0; i <= D; ++i) {
            if (d[i] == 0) continue;
            for (auto [e, c] : cube) {
                if (i + e > D) break;
                checked_fma(nd[i + e], d[i], c);
            }
        }
        d.swap(nd);
    }
    return from_power(d, n_max);
}

namespace {

// mean of tau(n)^2 n^{-11} over the upper half of the table
double rankin_mean(const RamanujanSeries& t) {
    double s = 0;
    long cnt = 0;
    for (long n = std::max(1L, t.n_max / 2); n <= t.n_max; ++n) {
        const double v = t.tau_d(n);
        s += v * v * std::pow(static_cast<double>(n), -11.0);
        ++cnt;
    }
    return s / static_cast<double>(cnt);
}

// three standard deviations of a random-sign tail with variance c sum_{n > M} n^{11 - 2 sigma} w(n)
double modeled_tail(double c, double M, double sg, bool primes_only) {
    double var = c * std::pow(M, 12 - 2 * sg) / (2 * sg - 12);
    if (primes_only) var /= std::log(M);
    return 3 * std::sqrt(var);
}

}  // namespace

LValue r_dirichlet(CD s, const RamanujanSeries& t) {
    const double sg = s.real();
    if (sg < 7.5) throw NumericError(ErrorKind::Precondition, "r(s) series needs Re s >= 7.5");
    CD acc = 0;
    double mag = 0;
    for (long n = t.n_max; n >= 1; --n) {
        const double ln = std::log(static_cast<double>(n));
        const CD term = t.tau_d(n) * std::exp(-s * ln);
        acc += term;
        mag += std::abs(term) * (2 + std::abs(s) * ln);
    }
    LValue r;
    r.value = acc;
    r.bound = 4 * kEps * mag + modeled_tail(rankin_mean(t), static_cast<double>(t.n_max), sg, false);
    return r;
}

LValue r_euler(CD s, const RamanujanSeries& t, long P) {
    const double sg = s.real();
    if (sg < 7.5) throw NumericError(ErrorKind::Precondition, "r(s) Euler product needs Re s >= 7.5");
    if (P <= 0) P = t.n_max;
    if (P > t.n_max) throw NumericError(ErrorKind::Precondition, "Euler cap exceeds the tau table");
    CD acc = 0;
    double mag = 0;
    const std::vector<long> ps = primes_up_to(P);
    for (long p : ps) {
        const double lp = std::log(static_cast<double>(p));
        const CD f = 1.0 - t.tau_d(p) * std::exp(-s * lp) + std::exp((11.0 - 2.0 * s) * lp);
        const CD term = -std::log(f);
        acc += term;
        mag += std::abs(term) * (2 + 2 * std::abs(s) * lp);
    }
    LValue r;
    r.value = std::exp(acc);
    r.primes = static_cast<long>(ps.size());
    r.bound = std::abs(r.value) * (4 * kEps * (mag + std::abs(acc) + 1) +
                                   modeled_tail(rankin_mean(t), static_cast<double>(P), sg, true));
    return r;
}

double delta_iy(double y, const RamanujanSeries& t) {
    double s = 0;
    const long top = std::min(t.n_max, 60L);
    for (long n = top; n >= 1; --n) s += t.tau_d(n) * std::exp(-2 * kPi * n * y);
    return s;
}

LValue q_ram(CD s, const RamanujanSeries& t, double tol) {
    if (t.n_max < 60) throw NumericError(ErrorKind::Precondition, "q_ram needs tau up to 60");
    const double a = std::max({s.real() - 1, 11 - s.real(), 0.0});
    const double ystar = std::max(1.0, a / kPi);
    // |Delta(iy)| <= 1.01 e^{-2 pi y} on y >= 1, so the integrand is below scale e^{-pi y}
    const double scale = 2.02 * std::pow(ystar, a) * std::exp(-kPi * ystar);
    IntegrandVB f = [&](const Real& yr) {
        const double y = yr.to_double();
        const double d = delta_iy(y, t);
        const double ly = std::log(y);
        const CD v = d * (std::exp((s - 1.0) * ly) + std::exp((11.0 - s) * ly));
        return ValueWithBound(Complex(v, 64), Real(8 * kEps * std::abs(v) * (2 + std::abs(s) * ly), 64), Real(0.0, 64));
    };
    ValueWithBound q = quad_semiinfinite_vb(f, Real(1.0, 64), DecayHint{kPi, scale, 1.0}, PrecisionContext(64, tol));
    LValue r;
    r.value = to_cd(q.value);
    // Delta truncated at n = 60: far below double rounding for y >= 1
    r.bound = q.total_d();
    return r;
}

CD n_ram(CD s, const RamanujanSeries& t) { return std::sin(kPi * s / 2.0) * q_ram(6.0 + s, t).value; }

GrooveProbe groove_probe_ramanujan(const RamanujanSeries& t, const GrooveGrid& grid) {
    CFun n = [&](CD s) { return n_ram(s, t); };
    return probe_with("ramanujan n(s) = sin(pi s/2) q(6 + s)", n, grid);
}

}  // namespace zetalab
