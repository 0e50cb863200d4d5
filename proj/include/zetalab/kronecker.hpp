#pragma once

#include "zetalab/lfunc.hpp"

#include <complex>
#include <string>
#include <vector>

namespace zetalab {

// s reduced to (-pi, pi]
double circle_reduce(double s);
// d_N(u, v) = max_{k <= N} |u(k) - v(k) mod 2 pi|
double d_N(const std::vector<double>& u, const std::vector<double>& v, long N);

struct ZSequence {
    std::vector<std::complex<double>> z;   // working prefix, |z(k)| < 1
    double tail_abs = 0;                   // bound on sum_{k > prefix} |z(k)|
    void validate() const;
};

// z(k) = chi(p_k) p_k^{-x} over the first P primes; tail by integral comparison
ZSequence zsequence_from_character(const CharacterSpec& chi, double x, long P = 200);

// g_k(theta) = |1 - z(k) e^{i theta}|, k is 1-based
double g_k(const ZSequence& z, long k, double theta);
// G_N(y) = prod_{k <= N} g_k(y(k))
double G_partial(const ZSequence& z, const std::vector<double>& y, long N);

struct GValue {
    double value = 0;     // product over the whole prefix
    double bound = 0;     // |G - value| from the coordinates past the prefix, plus rounding
};
GValue G_full(const ZSequence& z, const std::vector<double>& y);

// V_N(y) = G(y) - G_N(P_N y) and D_N(x, y) = G_N(P_N x) - G_N(P_N y), prefix-level
double V_N(const ZSequence& z, const std::vector<double>& y, long N);
double D_N(const ZSequence& z, const std::vector<double>& x, const std::vector<double>& y, long N);

enum class SearchMode { Real, Integral };

struct KroneckerResult {
    double t = 0;
    double d = 0;                 // achieved d_N(t P_N(alpha), target)
    long evaluations = 0;
    bool budget_exhausted = false;
};

// Coarse grid over t > J with step 0.1/max|alpha|; promising local minima are refined by
// golden section as they appear. Integral mode scans integers. Stops once d <= goal.
KroneckerResult kronecker_search(const std::vector<double>& alpha, const std::vector<double>& target, long N, double J,
                                 SearchMode mode, long budget, double goal = 0.0);

struct Lemma2Witness {
    bool found = false;
    std::string failure;
    long k_prime = 0;           // 1-based coordinate moved
    double theta = 0;
    long N = 0;                 // coordinates steered by the search
    KroneckerResult search;
    double G_t = 0, G_0 = 0;
    double margin = 0;          // sigma (G(t alpha) - G(0)) minus both bounds
};

// t > J with sign(G(t alpha) - G(0)) = sigma, sigma = +1 or -1
Lemma2Witness lemma2_witness(const ZSequence& z, const std::vector<double>& alpha, int sigma, double J,
                             long budget = 2000000, long max_N = 6);

struct Corollary3Result {
    bool accepted = false;
    std::string rejection;
    int condition = 0;          // 1: a nonreal value, 2: chi(p) = 1 and chi(p') = -1
    double x = 0, T = 0;
    double t = 0, t_prime = 0;
    double L_x = 0, L_t = 0, L_tp = 0;    // |L| from the Euler product
    double budget = 0;                    // largest Euler-product bound among the three
    double margin_low = 0, margin_high = 0;   // |L_x| - |L_t|, |L_tp| - |L_x|
    double identity_residual = 0;         // max |L| G(-t omega) - 1 over the three points
    double identity_budget = 0;
    Lemma2Witness up, down;
    bool holds = false;                   // strict inequalities with margin > 10 budget
};

// 0 if chi meets neither condition within the first P primes
int corollary3_condition(const CharacterSpec& chi, long P = 200);
// budget caps the evaluations of each witness search
Corollary3Result corollary3_demo(const CharacterSpec& chi, double x, double T, long P = 200, long budget = 2000000);

}  // namespace zetalab
