#pragma once

#include "zetalab/report.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zetalab::cli {

inline constexpr const char* kToolVersion = "zetalab 0.1.0";

// Exit codes: 0 every UNCONDITIONAL check passed, 1 one failed, 2 bad config or
// missing input, 3 a numeric failure while running.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct RunConfig {
    std::string command;      // ingest constants verify recover metric groove kronecker
    std::string target;       // identity, groove target or character
    std::string zeros;        // empty: default table
    long nzeros = 100000;
    long bits = 128;
    double tol = 1e-30;
    std::uint64_t seed = 1;
    std::string out;          // report path; empty writes to stdout
    std::string plot_dir;     // two-column files, one per check
    std::string csv;          // per-sample table for verify
    std::vector<std::string> grids;   // "name=lo:hi:n" or "name=v1,v2,..." (complex as a+bi)

    // command options; unset ones take per-command defaults
    std::optional<double> smin, smax, tmax, Y, x, T, v1, v2;
    std::optional<long> samples, w, n, trials, budget, primes, n_scan;
    std::string builder = "v";
    std::string character;    // "mod:k,index:j"; empty takes the command default

    void validate() const;
};

// A named grid from --grid; nullopt when absent. Parse errors are Config errors.
std::optional<std::vector<std::complex<double>>> grid(const RunConfig& cfg, const std::string& name);
std::vector<std::complex<double>> parse_grid_values(const std::string& spec);

struct ReportDocument {
    std::string tool_version = kToolVersion;
    RunConfig config;
    std::vector<VerificationReport> reports;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::string timestamp;

    bool unconditional_pass() const;
    int exit_code() const { return unconditional_pass() ? kOk : kCheckFailed; }
};

nlohmann::ordered_json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const ReportDocument& d);
ReportDocument document_from_json(const nlohmann::ordered_json& j);

// Non-finite doubles are written as the strings "nan", "inf", "-inf".
nlohmann::ordered_json num(double v);
double num_from(const nlohmann::ordered_json& j);
// {"value": v, "bound": b}
nlohmann::ordered_json vb(double v, double b);

// Runs one command. NumericError propagates; Config kind marks bad input.
ReportDocument run(const RunConfig& cfg);

// Writes the report (and plot/csv files) as configured; returns the exit code.
int run_and_write(const RunConfig& cfg);

}  // namespace zetalab::cli
