#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "histloom/errors.hpp"
#include "histloom/rng.hpp"

namespace histloom {

/// Half-open interval [lo, hi) inside the unit domain.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_);

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x < hi; }
};

inline bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
}

/// True when a.hi == b.lo exactly, i.e. [a.lo,a.hi) and [a.hi,b.hi) touch.
inline bool consecutive(const Interval& a, const Interval& b) { return a.hi == b.lo; }

Interval merge_consecutive(const Interval& a, const Interval& b);

/// Nonnegative piecewise-constant function on [0,1): sorted breakpoints
/// (first 0, last 1) and one density value per piece.  Represents hypotheses,
/// targets, flattenings and sub-distributions; `is_full_distribution()`
/// reports whether the total mass is 1 within 1e-9.
///
/// Zero-width pieces are normalized away at construction; adjacent equal
/// breakpoints in the input are therefore accepted but never stored.
/// Immutable after construction.
class PiecewiseDensity {
public:
    /// The uniform density on [0,1).
    PiecewiseDensity();
    PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> values);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t piece_count() const { return values_.size(); }

    /// Density value at x in [0,1); O(log pieces).
    double value_at(double x) const;

    /// Integral over [0, x).
    double cdf(double x) const;

    /// Integral over I; exact for the piecewise representation.
    double mass_on(const Interval& I) const;

    /// Inverse CDF: smallest x with cdf(x) >= u * total_mass, u in [0,1).
    /// Result is always in [0,1).
    double quantile(double u) const;

    double total_mass() const { return cumulative_.back(); }
    bool is_full_distribution() const;

    /// Pointwise scaling by a >= 0 (result is generally a sub-distribution).
    PiecewiseDensity scaled(double a) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<double> cumulative_;  // cumulative_[i] = mass of pieces [0, i)
};

/// Sorted multiset of sample points in [0,1); carries the empirical
/// distribution of m draws.  Interval masses are computed by binary search.
class EmpiricalSample {
public:
    EmpiricalSample() = default;
    explicit EmpiricalSample(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<double>& points() const { return points_; }

    /// Number of sample points in I; O(log m).
    std::size_t count_in(const Interval& I) const;

    /// Fraction of sample points in I.
    double mass_on(const Interval& I) const;

private:
    std::vector<double> points_;
};

/// Probability vector over {1,...,M} (stored 0-based).
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<double> weights);

    std::size_t domain_size() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }

private:
    std::vector<double> weights_;
};

// --- flattening -------------------------------------------------------------

/// P-flattening of r: on each interval I of P the output has constant density
/// r(I)/|I|; zero outside the union of P.  P must consist of disjoint
/// intervals (overlap is a contract violation).  The intervals need not cover
/// [0,1).
PiecewiseDensity flatten(const PiecewiseDensity& r, std::span<const Interval> parts);
PiecewiseDensity flatten(const EmpiricalSample& r, std::span<const Interval> parts);

// --- merge cost -------------------------------------------------------------

/// Closed form (2/(|I|+|J|)) * |r(I)|J| - r(J)|I||; equals the L1 distance
/// between the {I,J}-flattening and the {I u J}-flattening of r.
/// I and J must be consecutive.
double alpha(const PiecewiseDensity& r, const Interval& I, const Interval& J);
double alpha(const EmpiricalSample& r, const Interval& I, const Interval& J);

/// The same closed form from precomputed masses and widths.
double alpha_from_masses(double mass_i, double mass_j, double width_i, double width_j);

// --- distances --------------------------------------------------------------

/// Exact integral of |f - g| over [0,1), computed on the merged breakpoint
/// refinement.
double l1_distance(const PiecewiseDensity& f, const PiecewiseDensity& g);

/// Total variation distance = l1_distance / 2.
double tv_distance(const PiecewiseDensity& f, const PiecewiseDensity& g);

/// Integral of |f - g| restricted to I.
double l1_on_interval(const PiecewiseDensity& f, const PiecewiseDensity& g, const Interval& I);

// --- sampling ---------------------------------------------------------------

/// m i.i.d. draws via inverse CDF over the pieces; deterministic given the
/// generator state.  Rejects sub-distribution inputs.
EmpiricalSample sample(const PiecewiseDensity& f, std::size_t m, Rng& rng);

/// One inverse-CDF draw (building block for sample sources).
double draw_from(const PiecewiseDensity& f, Rng& rng);

/// Draws from a distribution over {1,...,M}, embedded at bin midpoints
/// (atom i at (i-1+0.5)/M), so sampled points never collide with grid
/// breakpoints.
EmpiricalSample sample(const DiscreteDistribution& d, std::size_t m, Rng& rng);

/// Raw 0-based index draws from a discrete distribution.
std::vector<std::uint32_t> sample_indices(const DiscreteDistribution& d, std::size_t m, Rng& rng);

// --- discretization ---------------------------------------------------------

/// weights[i] = mass of f on [(i-1)/M, i/M).  Exact for grid-aligned f.
DiscreteDistribution discretize(const PiecewiseDensity& f, std::size_t M);

/// Grid-aligned density with value M*w[i] on [(i-1)/M, i/M); inverse of
/// discretize for grid-aligned inputs.
PiecewiseDensity density_from_discrete(const DiscreteDistribution& d);

/// Midpoint of discrete atom i (0-based) in the [0,1) embedding.
inline double midpoint_embedding(std::size_t i, std::size_t M) {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(M);
}

}  // namespace histloom
