// Generates the table of the first N ordinates of zeros of zeta on the critical
// line: Gram-point sign scan, Rosser blocks refined by bisection until each
// block holds its expected count, then Illinois polishing of every bracket.
#include "zetalab/specfn.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

using zetalab::FastCriticalZeta;
using zetalab::siegel_theta;

namespace {

constexpr double kPi = 3.14159265358979323846;

double gram_point(long n, double guess) {
    double g = guess;
    for (int it = 0; it < 60; ++it) {
        long double th = siegel_theta(g);
        double d = static_cast<double>(th - static_cast<long double>(n) * kPi);
        double dth = 0.5 * std::log(g / (2 * kPi));
        double step = d / dth;
        g -= step;
        if (std::abs(step) < 1e-13 * g) break;
    }
    return g;
}

double polish(const FastCriticalZeta& fz, double lo, double hi, double flo, double fhi) {
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        if (hi - lo < 1e-11) return 0.5 * (lo + hi);
        double fx = fz.hardy_z(x);
        if (fx == 0.0) return x;
        if ((fx < 0) == (flo < 0)) {
            lo = x; flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x; fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical-line zero table generator"};
    long count = 100000;
    std::string out = "zeros.txt";
    app.add_option("-n,--count", count, "number of ordinates");
    app.add_option("-o,--out", out, "output path");
    CLI11_PARSE(app, argc, argv);

    // N(T) ~ theta(T)/pi + 1; leave headroom for the final block
    double tmax = 20.0;
    while (siegel_theta(tmax) / kPi + 1 < static_cast<double>(count) + 50) tmax *= 1.05;
    FastCriticalZeta fz(tmax * 1.01);

    std::vector<double> gram;
    std::vector<double> zg;
    double g = gram_point(-1, 9.67);
    for (long n = -1;; ++n) {
        if (n > -1) g = gram_point(n, g + kPi / (0.5 * std::log(g / (2 * kPi))));
        gram.push_back(g);
        zg.push_back(fz.hardy_z(g));
        if (g > tmax) break;
    }
    auto good = [&](std::size_t i) {
        long n = static_cast<long>(i) - 1;
        double v = (n % 2 == 0) ? zg[i] : -zg[i];
        return v > 0;
    };
    std::vector<double> zeros;
    zeros.reserve(static_cast<std::size_t>(count) + 64);
    std::size_t a = 0;
    if (!good(0)) {
        std::cerr << "first Gram point is not good\n";
        return 2;
    }
    long refined_blocks = 0;
    while (a + 1 < gram.size() && static_cast<long>(zeros.size()) < count) {
        std::size_t b = a + 1;
        while (b < gram.size() && !good(b)) ++b;
        if (b >= gram.size()) break;
        const long expected = static_cast<long>(b - a);
        std::vector<double> ts(gram.begin() + static_cast<long>(a), gram.begin() + static_cast<long>(b) + 1);
        std::vector<double> zs(zg.begin() + static_cast<long>(a), zg.begin() + static_cast<long>(b) + 1);
        auto changes = [&]() {
            long c = 0;
            for (std::size_t i = 0; i + 1 < zs.size(); ++i)
                if ((zs[i] < 0) != (zs[i + 1] < 0)) ++c;
            return c;
        };
        int depth = 0;
        while (changes() < expected && depth < 14) {
            std::vector<double> nt, nz;
            for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
                nt.push_back(ts[i]);
                nz.push_back(zs[i]);
                double m = 0.5 * (ts[i] + ts[i + 1]);
                nt.push_back(m);
                nz.push_back(fz.hardy_z(m));
            }
            nt.push_back(ts.back());
            nz.push_back(zs.back());
            ts.swap(nt);
            zs.swap(nz);
            ++depth;
        }
        if (depth > 0) ++refined_blocks;
        if (changes() != expected) {
            std::cerr << "block [" << ts.front() << ", " << ts.back() << "] has " << changes()
                      << " sign changes, expected " << expected << "\n";
            return 3;
        }
        for (std::size_t i = 0; i + 1 < zs.size(); ++i)
            if ((zs[i] < 0) != (zs[i + 1] < 0)) zeros.push_back(polish(fz, ts[i], ts[i + 1], zs[i], zs[i + 1]));
        if ((zeros.size() / 10000) != ((zeros.size() - static_cast<std::size_t>(expected)) / 10000))
            std::cerr << "zeros: " << zeros.size() << "  t = " << ts.back() << "\n";
        a = b;
    }
    // every block ended on a good Gram point g_m with exactly m+1 zeros below it
    const long m = static_cast<long>(a) - 1;
    if (static_cast<long>(zeros.size()) != m + 1) {
        std::cerr << "count check failed: " << zeros.size() << " zeros below g_" << m << "\n";
        return 4;
    }
    if (static_cast<long>(zeros.size()) < count) {
        std::cerr << "only " << zeros.size() << " zeros found\n";
        return 5;
    }
    std::ofstream os(out);
    char buf[64];
    for (long i = 0; i < count; ++i) {
        std::snprintf(buf, sizeof buf, "%.9f\n", zeros[static_cast<std::size_t>(i)]);
        os << buf;
    }
    std::cerr << "wrote " << count << " ordinates; blocks needing refinement: " << refined_blocks
              << "; zeros below good Gram point g_" << m << ": " << zeros.size() << "\n";
    return 0;
}
