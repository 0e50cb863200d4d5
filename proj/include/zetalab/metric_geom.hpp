#pragma once

#include "zetalab/numerics.hpp"
#include "zetalab/report.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace zetalab {

using CFun = std::function<std::complex<double>(std::complex<double>)>;

// m_x(t) = |1 - n(x)/n(x + it)|^{1/2}; +inf where n(x + it) = 0
double metric_norm(double x, double t, const PrecisionContext& ctx);

struct MetricViolation {
    std::string kind;   // "negative", "definiteness", "symmetry", "triangle"
    double t1 = 0, t2 = 0;
    double lhs = 0, rhs = 0;
};

struct MetricProbe {
    double x = 0;
    ReportClass cls = ReportClass::Unconditional;  // |x| > 4; otherwise conditional
    long trials = 0;
    long adversarial = 0;
    double tol = 1e-10;
    double min_slack = 0;          // smallest m(t1) + m(t2) - m(t1 + t2) met
    long infinite_values = 0;
    std::vector<MetricViolation> violations;
};

// random triples t1, t2 in [-t_max, t_max] plus triples aimed at local minima of |n(x + it)|
MetricProbe metric_probe(double x, long trials, std::uint64_t seed, const PrecisionContext& ctx, double t_max = 40.0);

struct ScanWitness {
    double x = 0, t = 0;
    double ratio = 0;  // |q(x + it)| / |q(x)|
};

struct RidgeGrooveScan {
    long points = 0;
    std::vector<ScanWitness> ridge_failures;   // ratio >= 1 + tol
    std::vector<ScanWitness> groove_failures;  // ratio <= 1 - tol
    long ridge_failure_count = 0, groove_failure_count = 0;
    bool ridge() const { return ridge_failure_count == 0; }
    bool groove() const { return groove_failure_count == 0; }
    std::string classification() const { return ridge() ? "ridge" : groove() ? "groove" : "neither"; }
};

// exhaustive grid comparison of |q(x + it)| against |q(x)|, t = 0 skipped; keeps at most
// max_witnesses of each kind, the most extreme first
RidgeGrooveScan ridge_groove_scan(const CFun& q, const std::vector<double>& xs, const std::vector<double>& ts,
                                  double tol = 1e-12, std::size_t max_witnesses = 16);

// n1(s) = s w(s) w(-s), w(s) = (s - i v1)(s - i v2)
std::complex<double> poly_n1(std::complex<double> s, double v1, double v2);

struct PolyCounterexample {
    double v1 = 0, v2 = 0;
    double ratio_formula = 0;     // 2(1 - (v1/v2)^2)
    double ratio_numeric = 0;     // |n1'(i v1)| / n1'(0) by extrapolated differences
    bool odd = false, roots_on_axes = false, derivative_real = false;
    bool violation_predicted = false;
    bool witness_found = false;
    double witness_x = 0, witness_t = 0;
    double witness_lhs = 0, witness_rhs = 0;   // |n1(x + i v1)|, |n1(x)|
    RidgeGrooveScan scan;                       // run when no violation is predicted
};
PolyCounterexample poly_counterexample_check(double v1, double v2);

struct Claim72Report {
    bool zero_ok = false;
    bool groove_ok = false;       // |j(z0 + h)| >= |j(x0 + h)| on every sampled h
    long h_points = 0;
    double min_ratio = 0;         // min over h of |j(z0 + h)| / |j(x0 + h)|
    double dj_z0 = 0, dj_x0 = 0;  // derivative magnitudes
    bool derivative_order = false;   // |j'(z0)| >= |j'(x0)| within tolerance
    bool conclusion = false;         // j'(x0) != 0 implies j'(z0) != 0
    std::string failure;
};
Claim72Report claim72_check(const CFun& j, std::complex<double> z0, double x0, double h_max = 1e-2, int nh = 20);

struct PDProbeResult {
    long m = 0;
    double min_eig = 0;
    double max_abs = 0;
    double tol = 0;                // rel_tol * max_abs
    double hermitian_defect = 0;   // max |psi(-t) - conj psi(t)|
    bool pass = false;
};
// min eigenvalue of [psi(t_a - t_b)] via a Hermitian eigensolver
PDProbeResult pd_probe(const std::function<std::complex<double>(double)>& psi, const std::vector<double>& ts,
                       double rel_tol = 1e-10, double hermitian_tol = 1e-9);

}  // namespace zetalab
