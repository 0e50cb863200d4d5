#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace zetalab {

enum class ReportClass { Unconditional, Conditional, Search };

inline const char* to_string(ReportClass c) {
    switch (c) {
        case ReportClass::Unconditional: return "UNCONDITIONAL";
        case ReportClass::Conditional: return "CONDITIONAL";
        case ReportClass::Search: return "SEARCH";
    }
    return "?";
}

// one line of an error budget; modeled items are estimates, not proven bounds
struct BudgetItem {
    std::string name;
    double value = 0;
    bool modeled = false;
};

struct VerificationReport {
    std::string identity;
    ReportClass cls = ReportClass::Unconditional;
    std::vector<std::pair<std::string, double>> params;
    std::complex<double> lhs{0, 0};
    std::complex<double> rhs{0, 0};
    double residual = 0;
    std::vector<BudgetItem> budget;
    double safety = 5.0;
    bool pass = false;
    std::string note;

    double budget_total() const {
        double s = 0;
        for (const auto& b : budget) s += b.value;
        return s;
    }
    double ratio() const {
        const double b = budget_total();
        return b > 0 ? residual / b : (residual == 0 ? 0.0 : INFINITY);
    }
    void add(std::string name, double v, bool modeled = false) { budget.push_back({std::move(name), v, modeled}); }
    void param(std::string name, double v) { params.emplace_back(std::move(name), v); }
    // residual against the summed budget of both routes
    void settle() {
        residual = std::abs(lhs - rhs);
        pass = std::isfinite(residual) && residual <= safety * budget_total();
    }
};

}  // namespace zetalab
