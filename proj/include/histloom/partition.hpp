#pragma once

#include <cstddef>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/sample_source.hpp"

namespace histloom {

/// Ordered cover of [0,1) by disjoint half-open intervals, stored as the
/// strictly increasing cut vector {0 = c_0 < c_1 < ... < c_z = 1}.
struct IntervalPartition {
    std::vector<double> cuts;

    /// Set by approx_equal_partition when tie deduplication suppressed most of
    /// the expected cuts, which indicates the well-behavedness precondition
    /// was violated (e.g. a heavy atom in the sample).
    bool well_behavedness_suspect = false;

    std::size_t size() const { return cuts.size() - 1; }
    Interval interval(std::size_t j) const { return Interval(cuts[j], cuts[j + 1]); }
    std::vector<Interval> intervals() const;
};

struct PartitionConfig {
    /// Sample-size constant: m0 = ceil(c0 * (1/kappa) * log2(1/kappa)).
    double c0 = 16.0;
};

/// Sample budget used by approx_equal_partition for a given kappa.
std::size_t partition_sample_budget(double kappa, const PartitionConfig& cfg = {});

/// Partitions [0,1) into Theta(1/kappa) intervals of approximately equal mass
/// under the source's distribution, using evenly spaced order statistics of a
/// sorted sample.  For a kappa/64-well-behaved target, every interval has
/// true mass in [kappa/2, 3*kappa] with probability at least 99/100.
///
/// Cuts are sample values themselves (left-closed); duplicate values are
/// deduplicated by moving to the next distinct order statistic.  Degenerate
/// samples (all points equal) fall back to the single interval [0,1).
IntervalPartition approx_equal_partition(SampleSource& draws, double kappa,
                                         const PartitionConfig& cfg = {});

/// Step 1 of the learner: approx_equal_partition with kappa = eps'/(6k),
/// so that interval masses land in [eps'/(12k), eps'/(2k)].
IntervalPartition partition_for_learner(SampleSource& draws, std::size_t k, double eps_prime,
                                        const PartitionConfig& cfg = {});

}  // namespace histloom
