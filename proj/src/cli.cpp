#include "zetalab/cli.hpp"

#include "zetalab/density.hpp"
#include "zetalab/kronecker.hpp"
#include "zetalab/lfunc.hpp"
#include "zetalab/metric_geom.hpp"
#include "zetalab/specfn.hpp"
#include "zetalab/transforms.hpp"
#include "zetalab/zeros.hpp"
#include "zetalab/zeta_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

namespace zetalab::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// gamma_1 - 1/2: the zero-series identities need their argument this far below the first ordinate
constexpr double kGamma1Margin = 14.134725141734693 - 0.5;

[[noreturn]] void config_error(const std::string& what) { throw NumericError(ErrorKind::Config, what); }

// parse failures inside option values are config errors
template <class F>
void as_config(F&& f) {
    try {
        f();
    } catch (const NumericError& e) {
        if (e.kind() == ErrorKind::Config) throw;
        config_error(e.what());
    }
}

const std::set<std::string> kCommands = {"ingest", "constants", "verify", "recover", "metric", "groove", "kronecker"};
const std::set<std::string> kIdentities = {"mut1", "mut3", "mut4",    "cor32", "ct52", "eqstar",
                                           "eqcircle", "v-vs-e", "cc64", "cc65", "ct53-2", "shift"};
const std::set<std::string> kGrooves = {"zeta-n", "zeta-itself", "dirichlet", "ramanujan", "poly"};

struct SStrip {
    double lo, hi;
    double tmax_cap = kInf;
};

// closed Re s range each s-identity accepts
std::optional<SStrip> s_strip(const std::string& id, long w) {
    if (id == "mut1") return SStrip{0.55, 3.95};
    if (id == "mut3") return SStrip{-kInf, 3.95};
    if (id == "mut4") return SStrip{4.0 * w + 0.05, 4.0 * (w + 1) - 0.05};
    if (id == "cor32" || id == "ct52") return SStrip{0.05, 3.95};
    if (id == "cc64") return SStrip{-kInf, kGamma1Margin};
    if (id == "ct53-2") return SStrip{-kInf, kInf, kGamma1Margin};
    return std::nullopt;
}

struct SDefaults {
    double smin, smax, tmax;
    long samples;
};

SDefaults s_defaults(const std::string& id, long w) {
    if (id == "mut1") return {0.55, 3.95, 10, 20};
    if (id == "mut3") return {-3, 3.9, 10, 10};
    if (id == "mut4") return {4.0 * w + 0.05, 4.0 * w + 3.95, 10, 10};
    if (id == "cor32") return {0.05, 3.95, 10, 10};
    if (id == "ct52") return {0.25, 3.5, 5, 4};
    if (id == "cc64") return {-10, 10, 5, 5};
    return {-2, 2, 10, 5};   // ct53-2
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string brief(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string slug(const std::string& s) {
    std::string o;
    for (char c : s) o += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return o;
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        config_error("cannot parse " + what + " '" + s + "'");
    }
    if (pos != s.size()) config_error("cannot parse " + what + " '" + s + "'");
    return v;
}

std::complex<double> parse_complex(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) config_error("empty grid value");
    if (s.back() != 'i') return {parse_double(s, "grid value"), 0};
    s.pop_back();
    // split at the last sign that is not an exponent sign or the leading one
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    auto im_of = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t, "grid value");
    };
    if (cut == std::string::npos) return {0, im_of(s)};
    return {parse_double(s.substr(0, cut), "grid value"), im_of(s.substr(cut))};
}

std::vector<double> reals(const std::vector<std::complex<double>>& v, const std::string& name) {
    std::vector<double> r;
    for (auto z : v) {
        if (z.imag() != 0) config_error("grid '" + name + "' must be real");
        r.push_back(z.real());
    }
    return r;
}

std::string cjoin(std::complex<double> z) { return brief(z.real()) + (z.imag() < 0 ? "" : "+") + brief(z.imag()) + "i"; }

json cnum(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }
std::complex<double> cnum_from(const json& j) { return {num_from(j.at(0)), num_from(j.at(1))}; }

// ---------------------------------------------------------------- shared inputs

PrecisionContext context(const RunConfig& c) { return PrecisionContext(c.bits, c.tol); }

std::string zero_path(const RunConfig& c) {
    const std::string p = c.zeros.empty() ? default_zero_table_path() : c.zeros;
    if (!std::filesystem::exists(p)) config_error("zero table not found: " + p);
    return p;
}

struct Zeros {
    ZeroTable table;
    ZeroDerived derived;
};

Zeros load_zeros(const RunConfig& c, long refine = 100) {
    Zeros z;
    z.table = ingest_zero_table(zero_path(c), c.nzeros);
    DeriveOptions opt;
    opt.n = c.nzeros;
    opt.refine = std::min(refine, c.nzeros);
    z.derived = derive(z.table, context(c), opt);
    return z;
}

std::vector<std::complex<double>> grid_or(const RunConfig& c, const std::string& name,
                                          std::vector<std::complex<double>> fallback) {
    auto g = grid(c, name);
    return g ? *g : fallback;
}

VerificationReport make_check(std::string identity, ReportClass cls, double residual, double budget,
                              std::string budget_name, bool modeled = false) {
    VerificationReport r;
    r.identity = std::move(identity);
    r.cls = cls;
    r.safety = 1;
    r.residual = residual;
    r.add(std::move(budget_name), budget, modeled);
    r.pass = std::isfinite(residual) && residual <= budget;
    return r;
}

// ---------------------------------------------------------------- commands

void cmd_ingest(const RunConfig& c, ReportDocument& doc) {
    Zeros z = load_zeros(c);
    const ZeroDerived& d = z.derived;
    double worst = 0;
    long k_worst = 0;
    for (std::size_t k = 0; k < d.c_via_b.size(); ++k) {
        const double r = (abs(d.c_via_nprime[k] - d.c_via_b[k]) / abs(d.c_via_b[k])).to_double();
        if (r > worst || k == 0) {
            worst = r;
            k_worst = static_cast<long>(k) + 1;
        }
    }
    VerificationReport two = make_check("c(i gamma_k) as 1/n'(i gamma_k) and as 1/(b zeta'), refined zeros",
                                        ReportClass::Unconditional, worst, 1e-8, "declared relative tolerance");
    two.param("refined", static_cast<double>(d.c_via_b.size()));
    two.param("k_worst", static_cast<double>(k_worst));
    if (k_worst > 0) {
        two.lhs = {d.c_via_nprime[k_worst - 1].re().to_double(), d.c_via_nprime[k_worst - 1].im().to_double()};
        two.rhs = {d.c_via_b[k_worst - 1].re().to_double(), d.c_via_b[k_worst - 1].im().to_double()};
    }
    doc.reports.push_back(two);

    double im_ratio = 0;
    const std::size_t kmax = std::min<std::size_t>(1000, d.size());
    for (std::size_t k = 0; k < kmax; ++k) im_ratio = std::max(im_ratio, std::abs(d.c[k].imag()) / std::abs(d.c[k]));
    VerificationReport im = make_check("c(i gamma_k) real on the imaginary axis, k <= 1000", ReportClass::Unconditional,
                                       im_ratio, 1e-6, "declared relative tolerance");
    im.param("k_max", static_cast<double>(kmax));
    doc.reports.push_back(im);

    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(z.table.checksum));
    doc.data["table"] = {{"path", z.table.source},
                         {"count", z.table.count},
                         {"digits", z.table.digits},
                         {"checksum_fnv1a", hex},
                         {"gamma_first", num(d.gamma.front())},
                         {"gamma_last", num(d.gamma.back())}};
    doc.data["caches"] = json::array({z.table.source + ".bin", z.table.source + ".derived.bin"});
}

void cmd_constants(const RunConfig& c, ReportDocument& doc) {
    const PrecisionContext ctx = context(c);
    Zeros z = load_zeros(c);
    const ZeroDerived& d = z.derived;
    const SeriesConstants sc = constants(d, c.nzeros);
    doc.data["A"] = vb(sc.A(), sc.A_tail);
    doc.data["B0"] = vb(sc.B0_partial + sc.B0_tail, sc.B0_tail);
    doc.data["C0"] = vb(sc.C0_partial + sc.C0_tail, sc.C0_tail);
    doc.data["N"] = sc.N;

    // c(0) two ways
    const Complex c0a = coeff_c(Complex(Real(0L, ctx.bits), Real(0L, ctx.bits)), ctx);
    const Real c0b = coeff_c0_closed_form(ctx);
    VerificationReport c0;
    c0.identity = "c(0) as 1/n'(0) against the closed form";
    c0.lhs = {c0a.re().to_double(), c0a.im().to_double()};
    c0.rhs = {c0b.to_double(), 0};
    c0.residual = abs(c0a - Complex(c0b)).to_double();
    c0.add("1/n'(0) working tolerance", ctx.tol());
    c0.add("closed form working tolerance", ctx.tol());
    c0.pass = c0.residual <= c0.safety * c0.budget_total();
    doc.reports.push_back(c0);

    const ValueWithBound p0pi = P0(Complex(Real::pi(ctx.bits)), ctx);
    doc.data["P0_at_pi"] = vb(p0pi.value.re().to_double(), p0pi.total_d());

    const C5Report c5 = c5_evaluate(sc.A(), ctx, c.n_scan.value_or(1000));
    doc.data["C5"] = {{"A", num(c5.A)},
                      {"c0", num(c5.c0)},
                      {"P0_at_pi", num(c5.P0_at_pi)},
                      {"cond_i", c5.cond_i},
                      {"cond_ii", c5.cond_ii},
                      {"v0_defined", c5.v0_defined},
                      {"v0", num(c5.v0_defined ? c5.v0 : std::numeric_limits<double>::quiet_NaN())},
                      {"cond_iii", c5.cond_iii},
                      {"scanned_to", num(c5.scanned_to)},
                      {"scan_truncated", c5.scan_truncated},
                      {"scan_points", c5.scan_points}};

    const ContinuityReport cr = continuity_criterion(d, c.nzeros, ctx);
    VerificationReport cont;
    cont.identity = "continuity criterion: sum c(i gamma_k) = -(c(0)/2 + sum c(4k))";
    cont.cls = ReportClass::Conditional;
    cont.lhs = cr.lhs;
    cont.rhs = cr.rhs;
    cont.add("zero-sum tail (extrapolated)", cr.lhs_tail, true);
    cont.add("coefficient tail", cr.rhs_tail);
    cont.param("N", static_cast<double>(c.nzeros));
    cont.param("rhs_terms", static_cast<double>(cr.rhs_terms));
    cont.settle();
    doc.reports.push_back(cont);

    const ExponentEstimates e = estimate_exponents(d, 0.25);
    doc.data["exponents"] = {{"class", "CONDITIONAL"},
                             {"eps0", num(e.eps0)},
                             {"eps1", num(e.eps1)},
                             {"eps2", num(e.eps2)},
                             {"eps1_tilde", num(e.eps1_tilde)},
                             {"c2_ii", e.c2_ii},
                             {"c3_ii", e.c3_ii},
                             {"c4_ii", e.c4_ii}};

    const double model = ctilde_stirling_inverse(20);
    const double actual = 1.0 / CoeffTable::shared().ctilde(20, ctx.bits).to_double();
    doc.data["stirling_inverse_k20"] = {{"model", num(model)}, {"actual", num(actual)}, {"ratio", num(actual / model)}};
}

struct Sample {
    std::complex<double> arg;
    VerificationReport rep;
};

std::vector<std::complex<double>> s_samples(const RunConfig& c, const std::string& id, long w) {
    if (auto g = grid(c, "s")) return *g;
    const SDefaults def = s_defaults(id, w);
    const double lo = c.smin.value_or(def.smin), hi = c.smax.value_or(def.smax), tm = c.tmax.value_or(def.tmax);
    const long n = c.samples.value_or(def.samples);
    std::mt19937_64 g(c.seed);
    std::uniform_real_distribution<double> ure(lo, hi), uim(-tm, tm);
    std::vector<std::complex<double>> v;
    for (long i = 0; i < n; ++i) {
        const double re = ure(g);
        v.emplace_back(re, uim(g));
    }
    return v;
}

void cmd_verify(const RunConfig& c, ReportDocument& doc) {
    const std::string& id = c.target;
    const long w = c.w.value_or(1);
    const TransformConfig tc;
    std::vector<Sample> out;
    auto ds = std::make_unique<DensitySampler>();
    std::optional<Zeros> zs;
    auto zeros = [&]() -> const ZeroDerived& {
        if (!zs) zs = load_zeros(c);
        return zs->derived;
    };
    const long N = c.nzeros;
    if (s_strip(id, w)) {
        for (auto s : s_samples(c, id, w)) {
            VerificationReport r;
            if (id == "mut1") r = verify_mut1(s, *ds, tc);
            else if (id == "mut3") r = verify_mut3(s, *ds, tc);
            else if (id == "mut4") r = verify_mut4(w, s, *ds, tc);
            else if (id == "cor32") r = verify_cor32(s, *ds, tc);
            else if (id == "ct52") r = verify_ct52(s, zeros(), N, *ds, tc);
            else if (id == "cc64") r = verify_cc64(s, zeros(), N, tc);
            else r = verify_ct53_2(s, zeros(), N, tc);
            out.push_back({s, r});
        }
    } else if (id == "eqstar") {
        for (double y : reals(grid_or(c, "y", {0.0, 0.25, 0.5, 1.0}), "y"))
            out.push_back({y, verify_eq_star(y, zeros(), N, *ds)});
    } else if (id == "eqcircle") {
        for (auto z : grid_or(c, "z", {1.0, {2, 1}, {0.5, -0.5}})) out.push_back({z, verify_eq_circle(z, zeros(), N, tc)});
    } else if (id == "v-vs-e") {
        const TransformConfig tv{1e-6, 3.5, 5.0, 64};
        for (auto z : grid_or(c, "z", {0.1})) out.push_back({z, verify_v_vs_e(z, zeros(), N, *ds, c.Y.value_or(3.8), tv)});
    } else if (id == "cc65") {
        for (auto z : grid_or(c, "z", {{0, -5}, {1, -2}})) out.push_back({z, verify_cc65(z, zeros(), N, *ds, c.Y.value_or(3.5), tc)});
    } else if (id == "shift") {
        std::vector<double> ys;
        if (auto g = grid(c, "y")) {
            ys = reals(*g, "y");
        } else {
            std::mt19937_64 rg(c.seed);
            std::uniform_real_distribution<double> u(-2, 4);
            for (long i = 0; i < c.samples.value_or(100); ++i) ys.push_back(u(rg));
        }
        out.push_back({0.0, density_shift(ys, context(c))});
        ToyShift toy = density_shift_toy(CD(2, 0), tc);
        VerificationReport jump = make_check("toy transition m1 = m0 + e^{-y}/N'(1) across r = 1", ReportClass::Unconditional,
                                             toy.jump_residual, 1e-13, "rounding");
        out.push_back({0.0, jump});
        out.push_back({2.0, toy.transform});
    }
    json samples = json::array();
    for (auto& [arg, r] : out) {
        doc.reports.push_back(r);
        samples.push_back(cnum(arg));
    }
    doc.data["identity"] = id;
    doc.data["arguments"] = samples;
    if (id == "mut4") doc.data["w"] = w;
    if (zs) doc.data["zeros_used"] = N;
}

void cmd_recover(const RunConfig& c, ReportDocument& doc) {
    const long n = c.n.value_or(1);
    const PrecisionContext ctx = context(c);
    Zeros z = load_zeros(c);
    std::vector<double> xs = reals(grid_or(c, "x", {1.0, 1.5, 2.0, 2.5, 3.0}), "x");
    const Recovery r = recover_gamma_n(n, xs, z.derived, c.nzeros, ctx);
    VerificationReport g;
    g.identity = "gamma_n from the decay of e_hat(-x, n) (route a)";
    g.cls = ReportClass::Conditional;
    g.lhs = r.gamma_slope;
    g.rhs = r.gamma_table;
    g.safety = 1;
    g.add("slope-fit bias at desk x (modeled)", n == 1 ? 0.1 : 0.3, true);
    g.param("n", static_cast<double>(n));
    g.settle();
    doc.reports.push_back(g);
    VerificationReport zp;
    zp.identity = "zeta'(1/2 + i gamma_n) from the amplitude of e_hat at the last x";
    zp.cls = ReportClass::Conditional;
    zp.lhs = r.zeta_prime_recovered;
    zp.rhs = r.zeta_prime_direct;
    zp.safety = 1;
    zp.add("three significant digits (modeled)", 5e-4 * std::abs(r.zeta_prime_direct), true);
    zp.param("x", xs.back());
    zp.settle();
    doc.reports.push_back(zp);
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back({{"x", num(p.x)}, {"log_value", num(p.log_value)}, {"gamma_from_log", num(p.gamma_from_log)},
                       {"amplitude", num(p.amplitude)}});
    doc.data["route_a"] = {{"n", n}, {"gamma_slope", num(r.gamma_slope)}, {"gamma_table", num(r.gamma_table)}, {"points", pts}};

    DensitySampler ds;
    const RecoveryB b = recover_route_b(n, c.x.value_or(0.3), z.derived, c.nzeros, ds, c.Y.value_or(3.5));
    doc.data["route_b"] = {{"class", "CONDITIONAL"},
                           {"x", num(b.x)},
                           {"sign_ok", b.sign_ok},
                           {"estimate", vb(b.estimate, b.uncertainty)},
                           {"note", "uncertainty covers the v numerics only; biased above gamma_n at desk x"}};
}

void cmd_metric(const RunConfig& c, ReportDocument& doc) {
    const double x = c.x.value_or(5.0);
    const long trials = c.trials.value_or(10000);
    const MetricProbe p = metric_probe(x, trials, c.seed, PrecisionContext(64, 1e-15));
    VerificationReport r;
    r.identity = "triangle inequality for m(t) = |1 - n(x)/n(x + it)|^{1/2}";
    r.cls = p.cls;
    r.lhs = static_cast<double>(p.violations.size());
    r.rhs = 0;
    r.residual = static_cast<double>(p.violations.size());
    r.safety = 1;
    r.add("probe tolerance", p.tol);
    r.pass = p.violations.empty();
    r.param("x", x);
    r.param("trials", static_cast<double>(p.trials));
    r.param("adversarial", static_cast<double>(p.adversarial));
    r.param("min_slack", p.min_slack);
    r.param("infinite_values", static_cast<double>(p.infinite_values));
    doc.reports.push_back(r);
    json v = json::array();
    for (const auto& m : p.violations)
        v.push_back({{"kind", m.kind}, {"t1", num(m.t1)}, {"t2", num(m.t2)}, {"lhs", num(m.lhs)}, {"rhs", num(m.rhs)}});
    doc.data["violations"] = v;
}

json scan_json(const RidgeGrooveScan& s) {
    auto wl = [](const std::vector<ScanWitness>& ws) {
        json a = json::array();
        for (const auto& w : ws) a.push_back({{"x", num(w.x)}, {"t", num(w.t)}, {"ratio", num(w.ratio)}});
        return a;
    };
    return {{"points", s.points},
            {"classification", s.classification()},
            {"ridge_failure_count", s.ridge_failure_count},
            {"groove_failure_count", s.groove_failure_count},
            {"ridge_failures", wl(s.ridge_failures)},
            {"groove_failures", wl(s.groove_failures)}};
}

json pd_json(const PDProbeResult& p) {
    return {{"m", p.m}, {"min_eig", num(p.min_eig)}, {"tol", num(p.tol)}, {"hermitian_defect", num(p.hermitian_defect)},
            {"pass", p.pass}};
}

void groove_report(ReportDocument& doc, const std::string& identity, ReportClass cls, const RidgeGrooveScan& s,
                   const PDProbeResult* pd) {
    VerificationReport r;
    r.identity = identity;
    r.cls = cls;
    r.residual = static_cast<double>(s.groove_failure_count);
    r.safety = 1;
    r.add("grid tolerance", 0);
    r.pass = s.groove() && (!pd || pd->pass);
    r.param("points", static_cast<double>(s.points));
    r.note = s.classification();
    doc.reports.push_back(r);
}

void cmd_groove(const RunConfig& c, ReportDocument& doc) {
    const std::string& t = c.target;
    const PrecisionContext ctx(64, 1e-15);
    std::vector<double> ts;
    if (auto g = grid(c, "t")) ts = reals(*g, "t");
    else
        for (int i = -20; i <= 20; ++i) ts.push_back(0.5 * i);
    GrooveGrid gg;
    gg.ts = ts;
    auto cd = [](const Complex& z) { return CD(z.re().to_double(), z.im().to_double()); };
    if (t == "zeta-n") {
        gg.xs = reals(grid_or(c, "x", {0.2, 1.0, 2.0, 3.5}), "x");
        CFun f = [&](CD s) { return cd(eval_n(Complex(s, 64), ctx)); };
        RidgeGrooveScan s = ridge_groove_scan(f, gg.xs, ts);
        groove_report(doc, "|n(x + it)| >= |n(x)| on the grid", ReportClass::Conditional, s, nullptr);
        doc.data["scan"] = scan_json(s);
    } else if (t == "zeta-itself") {
        gg.xs = reals(grid_or(c, "x", {0.55, 0.7, 0.9}), "x");
        CFun f = [&](CD s) { return cd(zeta(Complex(s, 64), ctx)); };
        RidgeGrooveScan s = ridge_groove_scan(f, gg.xs, ts);
        groove_report(doc, "|zeta(x + it)| >= |zeta(x)| on the grid", ReportClass::Conditional, s, nullptr);
        doc.data["scan"] = scan_json(s);
    } else if (t == "dirichlet" || t == "ramanujan") {
        gg.xs = reals(grid_or(c, "x", {0.25, 0.5, 0.75, 1.5}), "x");
        GrooveProbe p;
        if (t == "dirichlet") {
            const std::string spec = c.builder.empty() ? "v" : c.builder;
            p = groove_probe_dirichlet(parse_character(c.character.empty() ? "mod:3,index:1" : c.character), parse_builder(spec), gg, ctx);
        } else {
            p = groove_probe_ramanujan(tau_table(c.n.value_or(2000)), gg);
        }
        groove_report(doc, p.target + ": groove on the grid and positive definite on the strip", p.cls, p.scan, &p.pd);
        json zs = json::array();
        for (double z : p.real_zeros) zs.push_back(num(z));
        doc.data["probe"] = {{"target", p.target},    {"real_zeros", zs},          {"strip_lo", num(p.strip_lo)},
                             {"strip_hi", num(p.strip_hi)}, {"strip_x", num(p.strip_x)}, {"sigma", p.sigma},
                             {"scan", scan_json(p.scan)},   {"pd", pd_json(p.pd)}};
    } else {
        const double v1 = c.v1.value_or(1.0), v2 = c.v2.value_or(1.3);
        const PolyCounterexample p = poly_counterexample_check(v1, v2);
        VerificationReport r;
        r.identity = "|n1'(i v1)|/n1'(0) = 2(1 - (v1/v2)^2), symbolic against numeric";
        r.lhs = p.ratio_numeric;
        r.rhs = p.ratio_formula;
        r.safety = 1;
        r.add("declared agreement", 1e-10);
        r.settle();
        r.param("v1", v1);
        r.param("v2", v2);
        doc.reports.push_back(r);
        VerificationReport wv;
        wv.identity = "groove violation witness |n1(x + i v1)| < |n1(x)|";
        wv.lhs = p.witness_lhs;
        wv.rhs = p.witness_rhs;
        wv.residual = p.witness_found ? p.witness_rhs - p.witness_lhs : 0;
        wv.safety = 1;
        wv.add("none", 0);
        // a witness is expected exactly when the ratio predicts one
        wv.pass = p.violation_predicted ? p.witness_found && p.witness_lhs < p.witness_rhs : p.scan.groove();
        wv.note = p.violation_predicted ? "violation predicted" : "no violation predicted";
        doc.reports.push_back(wv);
        doc.data["poly"] = {{"v1", num(v1)},
                            {"v2", num(v2)},
                            {"ratio_formula", num(p.ratio_formula)},
                            {"ratio_numeric", num(p.ratio_numeric)},
                            {"odd", p.odd},
                            {"roots_on_axes", p.roots_on_axes},
                            {"derivative_real", p.derivative_real},
                            {"violation_predicted", p.violation_predicted},
                            {"witness_found", p.witness_found},
                            {"witness_x", num(p.witness_x)},
                            {"witness_t", num(p.witness_t)}};
    }
}

void cmd_kronecker(const RunConfig& c, ReportDocument& doc) {
    const CharacterSpec chi = parse_character(c.character.empty() ? "mod:5,index:1" : c.character);
    const Corollary3Result r = corollary3_demo(chi, c.x.value_or(2.0), c.T.value_or(10.0), c.primes.value_or(200),
                                               c.budget.value_or(2000000));
    doc.data["character"] = chi.label();
    doc.data["accepted"] = r.accepted;
    doc.data["condition"] = r.condition;
    if (!r.accepted || !r.up.found || !r.down.found) {
        doc.data["rejection"] = r.rejection;
        VerificationReport s = make_check("|L(x + it)| < |L(x)| < |L(x + it')| with t, t' > T", ReportClass::Search, kInf, 0,
                                          "evaluation budget");
        s.note = r.rejection;
        doc.reports.push_back(s);
        return;
    }
    VerificationReport s;
    s.identity = "|L(x + it)| < |L(x)| < |L(x + it')| with t, t' > T";
    s.cls = ReportClass::Search;
    s.lhs = std::min(r.margin_low, r.margin_high);
    s.residual = s.lhs.real();
    s.safety = 10;
    s.add("Euler product evaluation budget", r.budget);
    s.pass = r.holds;
    s.param("t", r.t);
    s.param("t_prime", r.t_prime);
    s.note = "margin is min(|L(x)| - |L(x+it)|, |L(x+it')| - |L(x)|); it must exceed safety times the budget";
    doc.reports.push_back(s);
    VerificationReport id = make_check("|L(s, chi)| G(-t omega) = 1 at t = 0, t, t'", ReportClass::Unconditional,
                                       r.identity_residual, r.identity_budget, "Euler product and G tail");
    doc.reports.push_back(id);
    doc.data["x"] = num(r.x);
    doc.data["T"] = num(r.T);
    doc.data["t"] = num(r.t);
    doc.data["t_prime"] = num(r.t_prime);
    doc.data["L_x"] = vb(r.L_x, r.budget);
    doc.data["L_t"] = vb(r.L_t, r.budget);
    doc.data["L_t_prime"] = vb(r.L_tp, r.budget);
    doc.data["margin_low"] = num(r.margin_low);
    doc.data["margin_high"] = num(r.margin_high);
    for (const auto* w : {&r.up, &r.down})
        doc.data[w == &r.up ? "witness_up" : "witness_down"] = {{"k_prime", w->k_prime},
                                                                {"theta", num(w->theta)},
                                                                {"N", w->N},
                                                                {"d", num(w->search.d)},
                                                                {"evaluations", w->search.evaluations},
                                                                {"G_t", num(w->G_t)},
                                                                {"G_0", num(w->G_0)},
                                                                {"margin", num(w->margin)}};
}

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_side_files(const RunConfig& c, const ReportDocument& doc) {
    if (!c.plot_dir.empty()) {
        std::filesystem::create_directories(c.plot_dir);
        std::map<std::string, std::ofstream> files;
        std::map<std::string, long> idx;
        for (const auto& r : doc.reports) {
            const std::string key = slug(c.command + "_" + r.identity);
            auto [it, fresh] = files.try_emplace(key);
            if (fresh) {
                it->second.open(std::filesystem::path(c.plot_dir) / (key + ".txt"));
                it->second << "# sample residual/budget\n";
            }
            it->second << idx[key]++ << ' ' << fmt(r.ratio()) << '\n';
        }
    }
    if (!c.csv.empty()) {
        std::ofstream os(c.csv);
        os << "identity,class,arg_re,arg_im,lhs_re,lhs_im,rhs_re,rhs_im,residual,budget,pass\n";
        const json& args = doc.data.contains("arguments") ? doc.data["arguments"] : json::array();
        for (std::size_t i = 0; i < doc.reports.size(); ++i) {
            const auto& r = doc.reports[i];
            const std::complex<double> a = i < args.size() ? cnum_from(args[i]) : std::complex<double>(0, 0);
            os << '"' << r.identity << "\"," << to_string(r.cls) << ',' << fmt(a.real()) << ',' << fmt(a.imag()) << ','
               << fmt(r.lhs.real()) << ',' << fmt(r.lhs.imag()) << ',' << fmt(r.rhs.real()) << ',' << fmt(r.rhs.imag())
               << ',' << fmt(r.residual) << ',' << fmt(r.budget_total()) << ',' << (r.pass ? 1 : 0) << '\n';
        }
    }
}

ReportClass class_from(const std::string& s) {
    if (s == "UNCONDITIONAL") return ReportClass::Unconditional;
    if (s == "CONDITIONAL") return ReportClass::Conditional;
    if (s == "SEARCH") return ReportClass::Search;
    throw NumericError(ErrorKind::Parse, "unknown report class " + s);
}

}  // namespace

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
    if (!kCommands.count(command)) config_error("unknown command '" + command + "'");
    if (nzeros < 1) config_error("--nzeros must be positive");
    if (bits < 53 || bits > 65536) config_error("--bits must lie in [53, 65536]");
    if (!(tol > 0) || !std::isfinite(tol)) config_error("--tol must be positive and finite");
    for (auto [name, v] : {std::pair{"--samples", samples}, {"--trials", trials}, {"--budget", budget},
                           {"--primes", primes}, {"--n-scan", n_scan}})
        if (v && *v < 1) config_error(std::string(name) + " must be positive");
    if (tmax && !(*tmax >= 0)) config_error("--tmax must be non-negative");
    for (const auto& g : grids) {
        const auto eq = g.find('=');
        if (eq == std::string::npos || eq == 0) config_error("grid '" + g + "' is not name=spec");
        parse_grid_values(g.substr(eq + 1));
    }
    if (command == "verify") {
        if (!kIdentities.count(target)) config_error("unknown identity '" + target + "'");
        const long ww = w.value_or(1);
        if (target == "mut4" && ww < 1) config_error("--w must be at least 1");
        const auto strip = s_strip(target, ww);
        if (strip) {
            auto check_re = [&](double v, const char* what) {
                if (!(v >= strip->lo && v <= strip->hi))
                    config_error(std::string(what) + " " + brief(v) + " outside [" + brief(strip->lo) + ", " + brief(strip->hi) +
                                 "] for " + target);
            };
            if (smin) check_re(*smin, "--smin");
            if (smax) check_re(*smax, "--smax");
            const SDefaults def = s_defaults(target, ww);
            if (smin.value_or(def.smin) > smax.value_or(def.smax)) config_error("--smin exceeds --smax");
            if (tmax && *tmax > strip->tmax_cap) config_error("--tmax " + brief(*tmax) + " too large for " + target);
            if (auto g = grid(*this, "s"))
                for (auto s : *g) {
                    check_re(s.real(), "grid value");
                    if (std::abs(s.imag()) > strip->tmax_cap) config_error("grid value " + cjoin(s) + " too far from the real axis");
                }
        } else if (smin || smax || tmax) {
            config_error("--smin/--smax/--tmax do not apply to " + target);
        }
    }
    if (command == "groove") {
        if (!kGrooves.count(target)) config_error("unknown groove target '" + target + "'");
        if (target == "dirichlet") as_config([&] { parse_builder(builder); });
    }
    if (!character.empty()) as_config([&] { parse_character(character); });
    if (command == "recover" && n && (*n < 1 || *n > 5)) config_error("--n must lie in [1, 5] for recover");
    if (command == "kronecker") {
        if (!target.empty()) config_error("kronecker takes the character through --character");
        if (x && !(*x >= 1.05)) config_error("--x must be at least 1.05 for kronecker");
        if (T && !(*T >= 0)) config_error("--T must be non-negative");
    }
}

std::vector<std::complex<double>> parse_grid_values(const std::string& spec) {
    std::vector<std::complex<double>> v;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) config_error("range grid must be lo:hi:n, got '" + spec + "'");
        const double lo = parse_double(parts[0], "grid bound"), hi = parse_double(parts[1], "grid bound");
        const double nd = parse_double(parts[2], "grid count");
        if (!(nd >= 1) || nd != std::floor(nd) || nd > 1e7) config_error("grid count must be a positive integer");
        const long n = static_cast<long>(nd);
        for (long i = 0; i < n; ++i) v.emplace_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1), 0);
        return v;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) v.push_back(parse_complex(p));
    if (v.empty()) config_error("empty grid");
    return v;
}

std::optional<std::vector<std::complex<double>>> grid(const RunConfig& cfg, const std::string& name) {
    for (auto it = cfg.grids.rbegin(); it != cfg.grids.rend(); ++it)
        if (it->rfind(name + "=", 0) == 0) return parse_grid_values(it->substr(name.size() + 1));
    return std::nullopt;
}

// ---------------------------------------------------------------- json

json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double num_from(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw NumericError(ErrorKind::Parse, "bad number '" + s + "'");
    }
    return j.get<double>();
}

json vb(double v, double b) { return {{"value", num(v)}, {"bound", num(b)}}; }

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["target"] = c.target;
    j["zeros"] = c.zeros;
    j["nzeros"] = c.nzeros;
    j["bits"] = c.bits;
    j["tol"] = num(c.tol);
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["plot_dir"] = c.plot_dir;
    j["csv"] = c.csv;
    j["grids"] = c.grids;
    json o = json::object();
    auto opt_d = [&](const char* k, const std::optional<double>& v) {
        if (v) o[k] = num(*v);
    };
    auto opt_l = [&](const char* k, const std::optional<long>& v) {
        if (v) o[k] = *v;
    };
    opt_d("smin", c.smin);
    opt_d("smax", c.smax);
    opt_d("tmax", c.tmax);
    opt_d("Y", c.Y);
    opt_d("x", c.x);
    opt_d("T", c.T);
    opt_d("v1", c.v1);
    opt_d("v2", c.v2);
    opt_l("samples", c.samples);
    opt_l("w", c.w);
    opt_l("n", c.n);
    opt_l("trials", c.trials);
    opt_l("budget", c.budget);
    opt_l("primes", c.primes);
    opt_l("n_scan", c.n_scan);
    o["builder"] = c.builder;
    o["character"] = c.character;
    j["options"] = o;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.target = j.at("target").get<std::string>();
    c.zeros = j.at("zeros").get<std::string>();
    c.nzeros = j.at("nzeros").get<long>();
    c.bits = j.at("bits").get<long>();
    c.tol = num_from(j.at("tol"));
    c.seed = j.at("seed").get<std::uint64_t>();
    c.out = j.at("out").get<std::string>();
    c.plot_dir = j.at("plot_dir").get<std::string>();
    c.csv = j.at("csv").get<std::string>();
    c.grids = j.at("grids").get<std::vector<std::string>>();
    const json& o = j.at("options");
    auto opt_d = [&](const char* k, std::optional<double>& v) {
        if (o.contains(k)) v = num_from(o[k]);
    };
    auto opt_l = [&](const char* k, std::optional<long>& v) {
        if (o.contains(k)) v = o[k].get<long>();
    };
    opt_d("smin", c.smin);
    opt_d("smax", c.smax);
    opt_d("tmax", c.tmax);
    opt_d("Y", c.Y);
    opt_d("x", c.x);
    opt_d("T", c.T);
    opt_d("v1", c.v1);
    opt_d("v2", c.v2);
    opt_l("samples", c.samples);
    opt_l("w", c.w);
    opt_l("n", c.n);
    opt_l("trials", c.trials);
    opt_l("budget", c.budget);
    opt_l("primes", c.primes);
    opt_l("n_scan", c.n_scan);
    c.builder = o.at("builder").get<std::string>();
    c.character = o.at("character").get<std::string>();
    return c;
}

json to_json(const VerificationReport& r) {
    json j;
    j["identity"] = r.identity;
    j["class"] = to_string(r.cls);
    json p = json::array();
    for (const auto& [k, v] : r.params) p.push_back({k, num(v)});
    j["params"] = p;
    j["lhs"] = cnum(r.lhs);
    j["rhs"] = cnum(r.rhs);
    j["residual"] = num(r.residual);
    json b = json::array();
    for (const auto& it : r.budget) b.push_back({{"name", it.name}, {"value", num(it.value)}, {"modeled", it.modeled}});
    j["budget"] = b;
    j["budget_total"] = num(r.budget_total());
    j["safety"] = num(r.safety);
    j["pass"] = r.pass;
    j["note"] = r.note;
    return j;
}

VerificationReport report_from_json(const json& j) {
    VerificationReport r;
    r.identity = j.at("identity").get<std::string>();
    r.cls = class_from(j.at("class").get<std::string>());
    for (const auto& p : j.at("params")) r.params.emplace_back(p.at(0).get<std::string>(), num_from(p.at(1)));
    r.lhs = cnum_from(j.at("lhs"));
    r.rhs = cnum_from(j.at("rhs"));
    r.residual = num_from(j.at("residual"));
    for (const auto& b : j.at("budget")) r.add(b.at("name").get<std::string>(), num_from(b.at("value")), b.at("modeled").get<bool>());
    r.safety = num_from(j.at("safety"));
    r.pass = j.at("pass").get<bool>();
    r.note = j.at("note").get<std::string>();
    return r;
}

bool ReportDocument::unconditional_pass() const {
    for (const auto& r : reports)
        if (r.cls == ReportClass::Unconditional && !r.pass) return false;
    return true;
}

json to_json(const ReportDocument& d) {
    json j;
    j["tool_version"] = d.tool_version;
    j["timestamp"] = d.timestamp;
    j["config"] = to_json(d.config);
    json rs = json::array();
    long counts[3][2] = {{0, 0}, {0, 0}, {0, 0}};
    for (const auto& r : d.reports) {
        rs.push_back(to_json(r));
        ++counts[static_cast<int>(r.cls)][r.pass ? 0 : 1];
    }
    j["reports"] = rs;
    j["data"] = d.data;
    json s;
    for (ReportClass c : {ReportClass::Unconditional, ReportClass::Conditional, ReportClass::Search})
        s[to_string(c)] = {{"pass", counts[static_cast<int>(c)][0]}, {"fail", counts[static_cast<int>(c)][1]}};
    s["verdict"] = d.unconditional_pass() ? "PASS" : "FAIL";
    j["summary"] = s;
    return j;
}

ReportDocument document_from_json(const json& j) {
    ReportDocument d;
    d.tool_version = j.at("tool_version").get<std::string>();
    d.timestamp = j.at("timestamp").get<std::string>();
    d.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("reports")) d.reports.push_back(report_from_json(r));
    d.data = j.at("data");
    return d;
}

// ---------------------------------------------------------------- dispatch

ReportDocument run(const RunConfig& cfg) {
    cfg.validate();
    ReportDocument doc;
    doc.config = cfg;
    doc.timestamp = now_utc();
    if (cfg.command == "ingest") cmd_ingest(cfg, doc);
    else if (cfg.command == "constants") cmd_constants(cfg, doc);
    else if (cfg.command == "verify") cmd_verify(cfg, doc);
    else if (cfg.command == "recover") cmd_recover(cfg, doc);
    else if (cfg.command == "metric") cmd_metric(cfg, doc);
    else if (cfg.command == "groove") cmd_groove(cfg, doc);
    else cmd_kronecker(cfg, doc);
    return doc;
}

int run_and_write(const RunConfig& cfg) {
    ReportDocument doc;
    try {
        doc = run(cfg);
    } catch (const NumericError& e) {
        std::cerr << "zetalab: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config ? kConfigError : kRuntimeError;
    }
    const std::string text = to_json(doc).dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(cfg.out);
        if (!os) {
            std::cerr << "zetalab: cannot write " << cfg.out << '\n';
            return kConfigError;
        }
        os << text;
    }
    write_side_files(cfg, doc);
    for (const auto& r : doc.reports)
        std::cerr << (r.pass ? "pass " : "FAIL ") << to_string(r.cls) << "  " << r.identity << "  residual " << fmt(r.residual)
                  << "  budget " << fmt(r.budget_total()) << '\n';
    return doc.exit_code();
}

}  // namespace zetalab::cli
