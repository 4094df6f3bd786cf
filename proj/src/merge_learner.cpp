#include "histloom/merge_learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace histloom {

std::size_t MergeState::unfrozen_count() const {
    std::size_t n = 0;
    for (std::uint8_t f : frozen) n += f == 0;
    return n;
}

MergeState initial_merge_state(const IntervalPartition& partition, std::size_t passes) {
    MergeState st;
    st.intervals = partition.intervals();
    st.frozen.assign(st.intervals.size(), 0);
    st.t = 0;
    st.passes = passes;
    return st;
}

double eps_prime_for(double eps) { return eps / std::max(1.0, std::log2(1.0 / eps)); }

std::size_t merge_pass_count(double eps_prime) {
    const double s = std::ceil(std::log2(1.0 / eps_prime));
    return s < 1.0 ? 1 : static_cast<std::size_t>(s);
}

std::uint64_t main_sample_budget(const LearnerConfig& cfg, double eps_prime) {
    const double k = static_cast<double>(cfg.k);
    const double log_term = std::max(1.0, std::log2(k / eps_prime));
    const double m = std::ceil(cfg.c1 * (k / (eps_prime * eps_prime)) * log_term);
    return std::max<std::uint64_t>(32, static_cast<std::uint64_t>(m));
}

std::uint64_t learner_total_budget(const LearnerConfig& cfg) {
    const double eps_prime = eps_prime_for(cfg.eps);
    const double kappa = eps_prime / (6.0 * static_cast<double>(cfg.k));
    const std::uint64_t m = cfg.m != 0 ? cfg.m : main_sample_budget(cfg, eps_prime);
    return partition_sample_budget(kappa, PartitionConfig{cfg.c0}) + m;
}

// --- BinnedEmpirical -----------------------------------------------------------

BinnedEmpirical::BinnedEmpirical(std::vector<double> cuts, std::vector<std::uint64_t> counts)
    : cuts_(std::move(cuts)) {
    if (cuts_.size() != counts.size() + 1)
        throw contract_error("BinnedEmpirical: cuts/counts size mismatch");
    prefix_.resize(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) prefix_[i + 1] = prefix_[i] + counts[i];
}

BinnedEmpirical BinnedEmpirical::collect(const IntervalPartition& partition, SampleSource& draws,
                                         std::uint64_t m) {
    const std::vector<double>& cuts = partition.cuts;
    std::vector<std::uint64_t> counts(partition.size(), 0);
    constexpr std::size_t kBatch = 8192;
    double buf[kBatch];
    std::uint64_t done = 0;
    while (done < m) {
        const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, m - done));
        draws.next_batch(buf, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = std::upper_bound(cuts.begin(), cuts.end(), buf[i]);
            std::size_t b = static_cast<std::size_t>(it - cuts.begin());
            b = b > 0 ? b - 1 : 0;
            if (b >= counts.size()) b = counts.size() - 1;
            ++counts[b];
        }
        done += n;
    }
    return BinnedEmpirical(cuts, std::move(counts));
}

BinnedEmpirical BinnedEmpirical::from_sample(const IntervalPartition& partition,
                                             const EmpiricalSample& sample) {
    std::vector<std::uint64_t> counts(partition.size(), 0);
    for (std::size_t j = 0; j < partition.size(); ++j)
        counts[j] = sample.count_in(partition.interval(j));
    return BinnedEmpirical(partition.cuts, std::move(counts));
}

std::size_t BinnedEmpirical::cut_index(double x) const {
    const auto it = std::lower_bound(cuts_.begin(), cuts_.end(), x);
    if (it == cuts_.end() || *it != x)
        throw contract_error("BinnedEmpirical: interval endpoint is not a partition cut");
    return static_cast<std::size_t>(it - cuts_.begin());
}

std::uint64_t BinnedEmpirical::count_on(const Interval& I) const {
    return prefix_[cut_index(I.hi)] - prefix_[cut_index(I.lo)];
}

double BinnedEmpirical::mass_on(const Interval& I) const {
    return static_cast<double>(count_on(I)) / static_cast<double>(total());
}

// --- merge pass ----------------------------------------------------------------

namespace {

using MassFn = std::function<double(const Interval&)>;

MergeState merge_pass_impl(const MergeState& state, const MassFn& mass, double threshold) {
    const std::size_t z = state.size();
    const std::vector<std::uint8_t>& frozen_prev = state.frozen;  // F_{t-1}
    std::vector<std::uint8_t> frozen_cur = frozen_prev;           // F_t

    // Phase (b): freeze consecutive pairs with large empirical merge cost.
    // Condition (i) reads F_{t-1}; insertions go into F_t; the two phases are
    // not fused, exactly as written.
    std::vector<double> masses(z);
    for (std::size_t i = 0; i < z; ++i) masses[i] = mass(state.intervals[i]);
    for (std::size_t i = 0; i + 1 < z; ++i) {
        if (frozen_prev[i] || frozen_prev[i + 1]) continue;
        const double a = alpha_from_masses(masses[i], masses[i + 1],
                                           state.intervals[i].width(),
                                           state.intervals[i + 1].width());
        if (a > threshold) {
            frozen_cur[i] = 1;
            frozen_cur[i + 1] = 1;
        }
    }

    // Phase (c): single left-to-right pass over the four cases.
    std::vector<Interval> merged;  // new unfrozen intervals
    merged.reserve(z / 2 + 1);
    std::size_t i = 0;
    while (i < z) {
        if (i + 1 < z) {
            if (!frozen_cur[i] && !frozen_cur[i + 1]) {  // Case 1: merge the pair
                merged.push_back(merge_consecutive(state.intervals[i], state.intervals[i + 1]));
                i += 2;
            } else if (frozen_cur[i]) {  // Case 2: skip a frozen interval
                i += 1;
            } else {  // Case 3: unfrozen with frozen successor
                frozen_cur[i] = 1;
                i += 2;
            }
        } else {  // Case 4: the last interval
            frozen_cur[i] = 1;
            i += 1;
        }
    }

    // Phase (d): P_t = merged intervals plus F_t, re-sorted by position.
    MergeState next;
    next.t = state.t + 1;
    next.passes = state.passes;
    next.intervals.reserve(merged.size() + z);
    next.frozen.reserve(merged.size() + z);
    std::size_t mi = 0;
    for (std::size_t j = 0; j < z; ++j) {
        while (mi < merged.size() && merged[mi].lo < state.intervals[j].lo) {
            next.intervals.push_back(merged[mi]);
            next.frozen.push_back(0);
            ++mi;
        }
        if (frozen_cur[j]) {
            next.intervals.push_back(state.intervals[j]);
            next.frozen.push_back(1);
        }
    }
    while (mi < merged.size()) {
        next.intervals.push_back(merged[mi]);
        next.frozen.push_back(0);
        ++mi;
    }
    return next;
}

}  // namespace

MergeState merge_pass(const MergeState& state, const BinnedEmpirical& empirical,
                      double threshold) {
    return merge_pass_impl(
        state, [&](const Interval& I) { return empirical.mass_on(I); }, threshold);
}

MergeState merge_pass(const MergeState& state, const EmpiricalSample& empirical,
                      double threshold) {
    return merge_pass_impl(
        state, [&](const Interval& I) { return empirical.mass_on(I); }, threshold);
}

// --- learner -------------------------------------------------------------------

namespace {

PiecewiseDensity flatten_binned(const BinnedEmpirical& emp, const std::vector<Interval>& parts) {
    std::vector<double> bp;
    std::vector<double> vals;
    bp.reserve(parts.size() + 1);
    vals.reserve(parts.size());
    bp.push_back(0.0);
    const double m = static_cast<double>(emp.total());
    for (const Interval& I : parts) {
        vals.push_back(static_cast<double>(emp.count_on(I)) / (m * I.width()));
        bp.push_back(I.hi);
    }
    return PiecewiseDensity(std::move(bp), std::move(vals));
}

LearnerResult learn_core(const LearnerConfig& cfg, SampleSource& draws, bool want_trace) {
    if (cfg.k < 1) throw std::invalid_argument("learn_wb: need k >= 1");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw std::invalid_argument("learn_wb: eps must be in (0,1)");

    LearnerResult result;
    result.eps_prime = eps_prime_for(cfg.eps);
    result.passes = merge_pass_count(result.eps_prime);
    result.threshold =
        cfg.merge_threshold_numerator * result.eps_prime / static_cast<double>(cfg.k);

    // Step 1: partition into z = Theta(k/eps') intervals of mass ~eps'/(6k).
    CountingSource counted(draws);
    result.initial_partition =
        partition_for_learner(counted, cfg.k, result.eps_prime, PartitionConfig{cfg.c0});
    result.draws_partition = counted.count();

    // Step 2: the single main sampling phase.
    const std::uint64_t m = cfg.m != 0 ? cfg.m : main_sample_budget(cfg, result.eps_prime);
    const BinnedEmpirical emp = BinnedEmpirical::collect(result.initial_partition, counted, m);
    result.draws_main = counted.count() - result.draws_partition;

    // Steps 3-4: s merge passes.
    MergeState state = initial_merge_state(result.initial_partition, result.passes);
    if (want_trace) result.trace.push_back(state);
    for (std::size_t t = 1; t <= result.passes; ++t) {
        state = merge_pass(state, emp, result.threshold);
        if (want_trace) result.trace.push_back(state);
    }

    // Step 5: the empirical flattening over P_s.
    result.hypothesis = flatten_binned(emp, state.intervals);
    return result;
}

}  // namespace

LearnerResult learn_wb(const LearnerConfig& cfg, SampleSource& draws) {
    return learn_core(cfg, draws, false);
}

LearnerResult learner_trace(const LearnerConfig& cfg, SampleSource& draws) {
    return learn_core(cfg, draws, true);
}

}  // namespace histloom
