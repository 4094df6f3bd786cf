#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/rng.hpp"

namespace histloom {

/// Bracket on opt_k (in L1 units; tv = value/2) from the segment dynamic
/// program.  `lower` optimizes over arbitrary nonnegative k-flat functions
/// (a valid lower bound); `upper` is the distance to `argmin`, the best DP
/// function rescaled to a distribution.  lower <= opt_k <= upper <= 2*lower.
struct OptKResult {
    double lower = 0.0;
    double upper = 0.0;
    PiecewiseDensity argmin;
    std::vector<double> q_breakpoints;

    double value() const { return upper; }
    double tv_lower() const { return lower / 2.0; }
    double tv_upper() const { return upper / 2.0; }
};

/// Exact segment DP over (prefix position, pieces used); the optimal constant
/// level on a segment is the (weighted) median of the per-cell densities,
/// the exact L1 minimizer for step functions.  O(M^2 k log M); desk scale
/// only (M <= 4096).
OptKResult opt_k_exact(const DiscreteDistribution& p, std::size_t k);

/// DP on a grid of M cells; p's breakpoints must be grid-aligned (then the
/// restriction to grid-aligned q is lossless).
OptKResult opt_k_exact(const PiecewiseDensity& p, std::size_t k, std::size_t grid);

/// Lower weighted median of (value, weight) pairs: the smallest value whose
/// cumulative weight reaches half the total.
double weighted_median(std::vector<std::pair<double, double>> value_weight);

/// Maximum of sums of at most ell disjoint (contiguous) blocks of the signed
/// sequence; the empty selection counts as 0.  Building block of the A_ell
/// distance.
double max_disjoint_blocks_sum(std::span<const double> deltas, std::size_t ell);

/// A_ell distance: sup over unions A of at most ell intervals of
/// |f(A) - g(A)|, computed exactly on the merged refinement.  Monotone
/// nondecreasing in ell and equal to l1_distance/2 once ell exceeds the
/// number of sign changes of f - g.
double a_ell_distance(const PiecewiseDensity& f, const PiecewiseDensity& g, std::size_t ell);

/// A_ell distance between a density and an empirical sample (atoms at the
/// sample points); exact sweep over the union of breakpoints and sample
/// points.
double a_ell_distance(const PiecewiseDensity& f, const EmpiricalSample& s, std::size_t ell);

/// Monte Carlo estimate of E || f - f_hat_m ||_{A_ell} over `trials` fresh
/// samples of size m.
double vc_concentration_probe(const PiecewiseDensity& f, std::size_t m, std::size_t ell,
                              std::size_t trials, Rng& rng);

}  // namespace histloom
