#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/partition.hpp"
#include "histloom/sample_source.hpp"

namespace histloom {

/// Loop state of the iterative merge: the current partition P_t with a
/// frozen flag per interval (membership in F_t).  Frozen intervals are never
/// altered by later passes.
struct MergeState {
    std::vector<Interval> intervals;
    std::vector<std::uint8_t> frozen;
    std::size_t t = 0;       ///< iteration index
    std::size_t passes = 0;  ///< total planned iterations s

    std::size_t size() const { return intervals.size(); }
    std::size_t unfrozen_count() const;
    bool is_frozen(std::size_t i) const { return frozen[i] != 0; }
};

MergeState initial_merge_state(const IntervalPartition& partition, std::size_t passes);

struct LearnerConfig {
    std::size_t k = 1;
    double eps = 0.1;
    /// Main sample budget; 0 selects ceil(c1 * (k/eps'^2) * log2(k/eps')).
    std::uint64_t m = 0;
    double c0 = 16.0;  ///< partitioner sample constant
    double c1 = 8.0;   ///< main sample budget constant
    double c2 = 64.0;  ///< hypothesis piece-count bound constant (validation only)
    /// Merge threshold = merge_threshold_numerator * eps' / k; 0.5 gives the
    /// eps'/(2k) rule.
    double merge_threshold_numerator = 0.5;
};

/// eps' = eps / log2(1/eps), guarded so eps' <= eps never inverts for
/// eps >= 1/2.
double eps_prime_for(double eps);

/// Number of merge passes s = ceil(log2(1/eps')), at least 1.
std::size_t merge_pass_count(double eps_prime);

/// Default main sample budget for the configuration.
std::uint64_t main_sample_budget(const LearnerConfig& cfg, double eps_prime);

/// Total draws used by learn_wb (partition phase + main phase).
std::uint64_t learner_total_budget(const LearnerConfig& cfg);

/// Per-bucket draw counts at the cuts of the initial partition.  All interval
/// masses the merge loop ever queries are aligned to these cuts, so prefix
/// counts give the same numbers as binary search over a sorted sample while
/// the sample itself never needs to be materialized.
class BinnedEmpirical {
public:
    BinnedEmpirical(std::vector<double> cuts, std::vector<std::uint64_t> bucket_counts);

    static BinnedEmpirical collect(const IntervalPartition& partition, SampleSource& draws,
                                   std::uint64_t m);
    static BinnedEmpirical from_sample(const IntervalPartition& partition,
                                       const EmpiricalSample& sample);

    std::uint64_t total() const { return prefix_.back(); }
    std::size_t buckets() const { return cuts_.size() - 1; }

    /// Count of draws in I; I's endpoints must be cut values (contract).
    std::uint64_t count_on(const Interval& I) const;

    /// Empirical mass of I (count / m); cut-aligned intervals only.
    double mass_on(const Interval& I) const;

    const std::vector<double>& cuts() const { return cuts_; }

private:
    std::size_t cut_index(double x) const;

    std::vector<double> cuts_;
    std::vector<std::uint64_t> prefix_;  // prefix_[j] = draws below cuts_[j]
};

/// One iteration of the merge loop: the freezing scan (phase b), the
/// four-case pairing pass (phase c), and the reassembly of P_t (phase d).
/// Total function on valid states.
MergeState merge_pass(const MergeState& state, const BinnedEmpirical& empirical,
                      double threshold);
MergeState merge_pass(const MergeState& state, const EmpiricalSample& empirical,
                      double threshold);

struct LearnerResult {
    PiecewiseDensity hypothesis;
    IntervalPartition initial_partition;
    double eps_prime = 0.0;
    double threshold = 0.0;
    std::size_t passes = 0;
    std::uint64_t draws_partition = 0;
    std::uint64_t draws_main = 0;
    /// Snapshots P_0..P_s; only populated by learner_trace.
    std::vector<MergeState> trace;

    std::uint64_t draws_total() const { return draws_partition + draws_main; }
    std::size_t piece_count() const { return hypothesis.piece_count(); }
};

/// Learn-WB-small-opt-k-histogram: partition, one empirical sample, s merge
/// passes, output the empirical flattening over the final partition.
/// Guarantee (for an eps'/(384k)-well-behaved target with opt_k <= eps):
/// ||h - p||_1 <= 2 opt_k(p) + 3 eps with probability >= 19/20.  Violated
/// preconditions degrade the guarantee but never crash.
LearnerResult learn_wb(const LearnerConfig& cfg, SampleSource& draws);

/// Same computation with per-iteration MergeState snapshots recorded.
LearnerResult learner_trace(const LearnerConfig& cfg, SampleSource& draws);

}  // namespace histloom
