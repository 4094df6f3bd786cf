#pragma once

#include <cmath>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/rng.hpp"

namespace histloom::testing {

/// Random piecewise-constant distribution with `pieces` pieces; breakpoints
/// drawn uniformly, levels from Exp(1), normalized.
inline PiecewiseDensity random_distribution(std::size_t pieces, Rng& rng) {
    std::vector<double> cuts{0.0, 1.0};
    while (cuts.size() < pieces + 1) {
        const double c = rng.next_double();
        bool ok = c > 1e-6 && c < 1.0 - 1e-6;
        for (double e : cuts) ok = ok && std::fabs(c - e) > 1e-6;
        if (ok) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> vals(pieces);
    double mass = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        vals[i] = -std::log(1.0 - rng.next_double());
        mass += vals[i] * (cuts[i + 1] - cuts[i]);
    }
    for (double& v : vals) v /= mass;
    return PiecewiseDensity(cuts, vals);
}

/// Random sub-distribution (not normalized).
inline PiecewiseDensity random_subdensity(std::size_t pieces, Rng& rng) {
    PiecewiseDensity d = random_distribution(pieces, rng);
    return d.scaled(0.25 + 1.5 * rng.next_double());
}

/// Numeric quadrature of |f - g| over [lo, hi) on a fixed fine grid; the
/// independent cross-check for the closed-form L1 computations.
inline double l1_quadrature(const PiecewiseDensity& f, const PiecewiseDensity& g, double lo,
                            double hi, std::size_t cells = 200000) {
    double acc = 0.0;
    const double w = (hi - lo) / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = lo + (static_cast<double>(i) + 0.5) * w;
        acc += std::fabs(f.value_at(x) - g.value_at(x)) * w;
    }
    return acc;
}

}  // namespace histloom::testing
