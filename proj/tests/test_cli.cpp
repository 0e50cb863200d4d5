#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zetalab/cli.hpp"
#include "zetalab/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace zetalab;
using namespace zetalab::cli;

namespace {

RunConfig cfg(std::string command, std::string target = "") {
    RunConfig c;
    c.command = std::move(command);
    c.target = std::move(target);
    return c;
}

std::string without_timestamp(const ReportDocument& d) {
    auto j = to_json(d);
    j.erase("timestamp");
    return j.dump();
}

ErrorKind kind_of(const RunConfig& c) {
    try {
        run(c);
    } catch (const NumericError& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Domain;
}

int shell(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("grid specs") {
    auto r = parse_grid_values("0:1:5");
    REQUIRE(r.size() == 5);
    CHECK(r[2] == std::complex<double>(0.5, 0));
    CHECK(r[4] == std::complex<double>(1, 0));
    auto l = parse_grid_values("2,1+10i,3.3-2i,-5i,i,1e-3+2e+1i");
    REQUIRE(l.size() == 6);
    CHECK(l[1] == std::complex<double>(1, 10));
    CHECK(l[2] == std::complex<double>(3.3, -2));
    CHECK(l[3] == std::complex<double>(0, -5));
    CHECK(l[4] == std::complex<double>(0, 1));
    CHECK(l[5] == std::complex<double>(1e-3, 20));
    CHECK(parse_grid_values("7:9:1").size() == 1);
    for (const char* bad : {"1:2", "a,b", "1:2:0", "1:2:2.5", "3+", ""}) CHECK_THROWS_AS(parse_grid_values(bad), NumericError);
    RunConfig c = cfg("verify", "eqstar");
    c.grids = {"y=0,1", "s=1", "y=2"};
    CHECK(grid(c, "y")->front() == std::complex<double>(2, 0));   // the last one wins
    CHECK_FALSE(grid(c, "z").has_value());
}

TEST_CASE("config validation") {
    RunConfig c = cfg("verify", "mut1");
    c.smin = 0.4;
    CHECK(kind_of(c) == ErrorKind::Config);
    c.smin = 0.6;
    c.smax = 4.0;
    CHECK(kind_of(c) == ErrorKind::Config);
    c.smax = 0.58;
    c.smin = 0.7;
    CHECK(kind_of(c) == ErrorKind::Config);
    RunConfig g = cfg("verify", "mut1");
    g.grids = {"s=0.3+1i"};
    CHECK(kind_of(g) == ErrorKind::Config);
    RunConfig m4 = cfg("verify", "mut4");
    m4.w = 2;
    m4.smin = 5.0;   // fine for w = 1, outside (8, 12)
    CHECK(kind_of(m4) == ErrorKind::Config);
    CHECK(kind_of(cfg("verify", "nope")) == ErrorKind::Config);
    CHECK(kind_of(cfg("frobnicate")) == ErrorKind::Config);
    CHECK(kind_of(cfg("groove", "zeta-x")) == ErrorKind::Config);
    RunConfig b = cfg("groove", "dirichlet");
    b.builder = "q";
    CHECK(kind_of(b) == ErrorKind::Config);
    RunConfig k = cfg("kronecker");
    k.character = "mod:5,index:9";
    CHECK(kind_of(k) == ErrorKind::Config);
    k.character = "";
    k.x = 1.0;
    CHECK(kind_of(k) == ErrorKind::Config);
    RunConfig t = cfg("metric");
    t.tol = -1;
    CHECK(kind_of(t) == ErrorKind::Config);
    RunConfig s = cfg("verify", "eqstar");
    s.tmax = 3;
    CHECK(kind_of(s) == ErrorKind::Config);
    RunConfig z = cfg("ingest");
    z.zeros = "/nonexistent/zeros.txt";
    CHECK(kind_of(z) == ErrorKind::Config);
}

TEST_CASE("report documents round-trip") {
    ReportDocument d;
    d.config = cfg("verify", "mut1");
    d.config.smin = 0.6;
    d.config.samples = 3;
    d.config.grids = {"s=1+2i"};
    d.config.character = "mod:5,index:1";
    d.timestamp = "2026-01-01T00:00:00Z";
    VerificationReport r;
    r.identity = "x";
    r.cls = ReportClass::Conditional;
    r.lhs = {0.1, -1.0 / 3};
    r.rhs = {std::nan(""), INFINITY};
    r.residual = 1e-300;
    r.add("a", 2.5e-17, true);
    r.add("b", -INFINITY);
    r.param("p", 3.0000000000000004);
    r.pass = true;
    r.note = "n";
    d.reports.push_back(r);
    d.data["k"] = vb(1.5, std::nan(""));
    const auto j = to_json(d);
    const ReportDocument back = document_from_json(nlohmann::ordered_json::parse(j.dump(2)));
    CHECK(to_json(back).dump() == j.dump());
    const auto& b = back.reports.at(0);
    CHECK(b.lhs == r.lhs);
    CHECK(std::isnan(b.rhs.real()));
    CHECK(std::isinf(b.rhs.imag()));
    CHECK(b.params[0].second == 3.0000000000000004);
    CHECK(b.budget[0].modeled);
    CHECK(back.config.smin == 0.6);
    CHECK_FALSE(back.config.smax.has_value());
    CHECK(j["summary"]["CONDITIONAL"]["pass"] == 1);
}

TEST_CASE("exit code follows unconditional checks only") {
    ReportDocument d;
    VerificationReport c;
    c.cls = ReportClass::Conditional;
    c.pass = false;
    d.reports.push_back(c);
    VerificationReport s;
    s.cls = ReportClass::Search;
    s.pass = false;
    d.reports.push_back(s);
    CHECK(d.exit_code() == kOk);
    VerificationReport u;
    u.pass = false;
    d.reports.push_back(u);
    CHECK(d.exit_code() == kCheckFailed);
    // zeta on the critical-strip grid is neither ridge nor groove: a conditional failure
    const ReportDocument z = run(cfg("groove", "zeta-itself"));
    CHECK_FALSE(z.reports.at(0).pass);
    CHECK(z.exit_code() == kOk);
}

TEST_CASE("determinism modulo timestamp") {
    RunConfig k = cfg("kronecker");
    CHECK(without_timestamp(run(k)) == without_timestamp(run(k)));
    RunConfig m = cfg("metric");
    m.trials = 300;
    m.seed = 9;
    const auto a = run(m);
    CHECK(without_timestamp(a) == without_timestamp(run(m)));
    CHECK(a.reports.at(0).pass);
    RunConfig sh = cfg("verify", "shift");
    sh.samples = 20;
    sh.seed = 4;
    const auto s1 = run(sh);
    CHECK(without_timestamp(s1) == without_timestamp(run(sh)));
    sh.seed = 5;
    CHECK(without_timestamp(s1) != without_timestamp(run(sh)));
}

TEST_CASE("verify mut1 with defaults") {
    const ReportDocument d = run(cfg("verify", "mut1"));
    CHECK(d.reports.size() >= 20);
    CHECK(d.exit_code() == kOk);
    for (const auto& r : d.reports) CHECK(r.cls == ReportClass::Unconditional);
    CHECK(d.data["arguments"].size() == d.reports.size());
}

TEST_CASE("kronecker report") {
    const ReportDocument d = run(cfg("kronecker"));
    CHECK(d.data["t"].get<double>() > 10);
    CHECK(d.data["t_prime"].get<double>() > 10);
    CHECK(d.data["margin_low"].get<double>() > 0);
    CHECK(d.data["margin_high"].get<double>() > 0);
    CHECK(d.exit_code() == kOk);
}

TEST_CASE("zero table directory from the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "zetalab_env_test";
    std::filesystem::create_directories(dir);
    const char* old = std::getenv("ZETALAB_ZERO_DIR");
    const std::string saved = old ? old : "";
    setenv("ZETALAB_ZERO_DIR", dir.c_str(), 1);
    CHECK(kind_of(cfg("ingest")) == ErrorKind::Config);
    if (old) setenv("ZETALAB_ZERO_DIR", saved.c_str(), 1);
    else unsetenv("ZETALAB_ZERO_DIR");
    std::filesystem::remove_all(dir);
}

TEST_CASE("command-line binary") {
    const std::string bin = ZETALAB_CLI_PATH;
    const auto dir = std::filesystem::temp_directory_path() / "zetalab_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string quiet = " 2>/dev/null";
    CHECK(shell(bin + " verify mut1 --smin 0.4" + quiet) == kConfigError);
    CHECK(shell(bin + " verify" + quiet + " >/dev/null") == kConfigError);
    CHECK(shell(bin + " --bogus groove poly" + quiet + " >/dev/null") == kConfigError);
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    const std::string plots = (dir / "plots").string();
    CHECK(shell(bin + " groove poly --v1 1 --v2 1.3 --out " + a + " --plot-dir " + plots + quiet) == kOk);
    CHECK(shell(bin + " groove poly --v2 1.3 --v1 1 --out " + b + quiet) == kOk);
    auto ja = nlohmann::ordered_json::parse(slurp(a)), jb = nlohmann::ordered_json::parse(slurp(b));
    ja.erase("timestamp");
    jb.erase("timestamp");
    ja["config"].erase("out");
    jb["config"].erase("out");
    ja["config"].erase("plot_dir");
    jb["config"].erase("plot_dir");
    CHECK(ja.dump() == jb.dump());
    CHECK(ja["summary"]["verdict"] == "PASS");
    CHECK_FALSE(std::filesystem::is_empty(plots));
    const std::string csv = (dir / "s.csv").string();
    CHECK(shell(bin + " verify mut3 --grid s=0,1+1i --csv " + csv + " --out " + a + quiet) == kOk);
    const std::string text = slurp(csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    std::filesystem::remove_all(dir);
}
