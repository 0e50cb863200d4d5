#pragma once

#include "zetalab/real.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zetalab {

struct PrecisionContext {
    long bits = 128;
    Real abs_tol{1e-30, 64};
    long max_series_terms = 200000;
    int quad_max_depth = 48;

    PrecisionContext() = default;
    PrecisionContext(long b, double tol, long max_terms = 200000, int depth = 48)
        : bits(b), abs_tol(tol, 64), max_series_terms(max_terms), quad_max_depth(depth) {
        validate();
    }
    // tolerance given as a power of two, for tolerances below double range
    static PrecisionContext with_tol_exp2(long b, long e2) {
        PrecisionContext c;
        c.bits = b;
        c.abs_tol = Real::pow2(e2, 64);
        c.validate();
        return c;
    }
    PrecisionContext with_bits(long b) const {
        PrecisionContext c(*this);
        c.bits = b;
        return c;
    }
    PrecisionContext with_tol(const Real& t) const {
        PrecisionContext c(*this);
        c.abs_tol = Real(t, 64);
        return c;
    }
    double tol() const { return abs_tol.to_double(); }
    void validate() const;
    Real zero() const { return Real(bits); }
    Real num(double d) const { return Real(d, bits); }
    Complex cnum(double re, double im = 0.0) const { return Complex(re, im, bits); }
};

enum class ErrorKind {
    Domain,
    Pole,
    Precondition,
    BudgetExhausted,
    NonFinite,
    HintViolated,
    NoSignChange,
    NoConvergence,
    PrecisionInfeasible,
    Parse,
    Config,
    CrossCheck,
};

const char* to_string(ErrorKind k);

struct ValueWithBound {
    Complex value;
    Real tail_bound{0.0, 64};
    Real rounding_bound{0.0, 64};

    ValueWithBound() = default;
    explicit ValueWithBound(Complex v) : value(std::move(v)) {}
    ValueWithBound(Complex v, double tail, double rnd) : value(std::move(v)), tail_bound(tail, 64), rounding_bound(rnd, 64) {}
    ValueWithBound(Complex v, Real tail, Real rnd)
        : value(std::move(v)), tail_bound(std::move(tail), 64), rounding_bound(std::move(rnd), 64) {}

    Real total() const { return Real(tail_bound + rounding_bound, 64); }
    double total_d() const { return total().to_double(); }
};

class NumericError : public std::runtime_error {
public:
    NumericError(ErrorKind kind, const std::string& what, std::optional<ValueWithBound> best = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), best_(std::move(best)) {}
    ErrorKind kind() const { return kind_; }
    const std::optional<ValueWithBound>& best() const { return best_; }

private:
    ErrorKind kind_;
    std::optional<ValueWithBound> best_;
};

// Open or closed vertical strip x0 < Re s < x1; infinities allowed.
struct Strip {
    double x0 = -std::numeric_limits<double>::infinity();
    double x1 = std::numeric_limits<double>::infinity();
    bool closed0 = false;
    bool closed1 = false;

    Strip() = default;
    Strip(double a, double b, bool c0 = false, bool c1 = false);
    bool contains(double x) const;
    bool contains(const Complex& s) const { return contains(s.re().to_double()); }
    // distance of Re s from the nearest edge
    double margin(double x) const;
};

// ---- quadrature ----

using Integrand = std::function<Complex(const Real&)>;
using IntegrandVB = std::function<ValueWithBound(const Real&)>;

struct QuadOptions {
    int initial_panels = 1;
    long max_evals = 2000000;
    // accepted local error is scaled by this to form the reported bound
    double safety = 1.0;
};

ValueWithBound quad_finite(const Integrand& f, const Real& a, const Real& b, const PrecisionContext& ctx,
                           const QuadOptions& opt = {});
// integrand reports its own evaluation error; the weighted sum of those is folded
// into the result's bounds
ValueWithBound quad_finite_vb(const IntegrandVB& f, const Real& a, const Real& b, const PrecisionContext& ctx,
                              const QuadOptions& opt = {});

struct DecayHint {
    double rate = 1.0;    // lambda
    double scale = 1.0;   // M, with |f(y)| <= M e^{-lambda y} for y >= from
    double from = 0.0;    // Y0
};

struct SemiInfiniteOptions {
    std::optional<double> cutoff;  // truncation point Y; chosen from the tolerance if absent
    QuadOptions quad;
};

ValueWithBound quad_semiinfinite(const Integrand& f, const Real& a, const DecayHint& hint, const PrecisionContext& ctx,
                                 const SemiInfiniteOptions& opt = {});
ValueWithBound quad_semiinfinite_vb(const IntegrandVB& f, const Real& a, const DecayHint& hint,
                                    const PrecisionContext& ctx, const SemiInfiniteOptions& opt = {});

// ---- summation ----

ValueWithBound sum_compensated(const std::vector<Complex>& terms, const PrecisionContext& ctx);
ValueWithBound sum_compensated(const std::vector<Real>& terms, const PrecisionContext& ctx);

// ---- roots and fits ----

using RealFn = std::function<Real(const Real&)>;

Real find_root(const RealFn& f, const Real& lo, const Real& hi, const PrecisionContext& ctx, int max_iter = 2000);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t envelope_points = 0;
};

LineFit fit_log_envelope(const std::vector<std::pair<double, double>>& points);
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace zetalab
