#include "zetalab/cli.hpp"
#include "zetalab/numerics.hpp"

#include <CLI11.hpp>

#include <iostream>

using zetalab::cli::RunConfig;

namespace {

template <class T>
void opt(CLI::App* app, const std::string& name, std::optional<T>& v, const std::string& help) {
    app->add_option_function<T>(name, [&v](const T& x) { v = x; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zetalab: numerical checks of zeta-related transform identities"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;

    app.add_option("--zeros", c.zeros, "zero table (default: $ZETALAB_ZERO_DIR/zeros_100k.txt or the build data dir)");
    app.add_option("--nzeros", c.nzeros, "number of zeros used")->capture_default_str();
    app.add_option("--bits", c.bits, "working precision in bits")->capture_default_str();
    app.add_option("--tol", c.tol, "absolute tolerance")->capture_default_str();
    app.add_option("--seed", c.seed, "seed for sampled arguments")->capture_default_str();
    app.add_option("--out", c.out, "report path (default: stdout)");
    app.add_option("--plot-dir", c.plot_dir, "directory for two-column plot data");
    app.add_option("--csv", c.csv, "per-sample CSV for verify");
    app.add_option("--grid", c.grids, "name=lo:hi:n or name=v1,v2,... (complex values as a+bi); repeatable");

    auto* ingest = app.add_subcommand("ingest", "ingest a zero table and derive c(i gamma_k), writing caches");
    ingest->add_option("path", c.zeros, "zero table");

    auto* cons = app.add_subcommand("constants", "series constants, c(0), P0(pi), C5 verdicts, exponent estimates");
    opt(cons, "--n-scan", c.n_scan, "points in the C5 (iii) scan");

    auto* ver = app.add_subcommand("verify", "two-route check of one identity");
    ver->add_option("identity", c.target, "mut1 mut3 mut4 cor32 ct52 eqstar eqcircle v-vs-e cc64 cc65 ct53-2 shift")
        ->required();
    opt(ver, "--smin", c.smin, "smallest Re s sampled");
    opt(ver, "--smax", c.smax, "largest Re s sampled");
    opt(ver, "--tmax", c.tmax, "largest |Im s| sampled");
    opt(ver, "--samples", c.samples, "number of sampled arguments");
    opt(ver, "--w", c.w, "shift index for mut4");
    opt(ver, "--Y", c.Y, "truncation point for v-vs-e and cc65");

    auto* rec = app.add_subcommand("recover", "gamma_n and zeta'(1/2 + i gamma_n) from e_hat, both routes");
    opt(rec, "--n", c.n, "zero index, 1..5");
    opt(rec, "--x", c.x, "x for route b");
    opt(rec, "--Y", c.Y, "truncation point for route b");

    auto* met = app.add_subcommand("metric", "triangle-inequality probe of the metric on a vertical line");
    opt(met, "--x", c.x, "abscissa");
    opt(met, "--trials", c.trials, "random trials");

    auto* gro = app.add_subcommand("groove", "ridge/groove scans and positive-definiteness probes");
    gro->add_option("target", c.target, "zeta-n zeta-itself dirichlet ramanujan poly")->required();
    gro->add_option("--character", c.character, "mod:k,index:j for dirichlet");
    gro->add_option("--builder", c.builder, "v g h j for dirichlet")->capture_default_str();
    opt(gro, "--n", c.n, "tau table length for ramanujan");
    opt(gro, "--v1", c.v1, "poly: first root height");
    opt(gro, "--v2", c.v2, "poly: second root height");

    auto* kro = app.add_subcommand("kronecker", "explicit t, t' with |L(x+it)| < |L(x)| < |L(x+it')|");
    kro->add_option("--character", c.character, "mod:k,index:j (default mod:5,index:1)");
    opt(kro, "--x", c.x, "abscissa, at least 1.05");
    opt(kro, "--T", c.T, "witnesses must exceed T");
    opt(kro, "--primes", c.primes, "primes in the working prefix");
    opt(kro, "--budget", c.budget, "evaluations per witness search");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : zetalab::cli::kConfigError;
    }
    for (auto* s : {ingest, cons, ver, rec, met, gro, kro})
        if (s->parsed()) c.command = s->get_name();
    return zetalab::cli::run_and_write(c);
}
