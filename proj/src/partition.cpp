#include "histloom/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace histloom {

std::vector<Interval> IntervalPartition::intervals() const {
    std::vector<Interval> out;
    out.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) out.push_back(interval(j));
    return out;
}

std::size_t partition_sample_budget(double kappa, const PartitionConfig& cfg) {
    const double log_term = std::max(1.0, std::log2(1.0 / kappa));
    return static_cast<std::size_t>(std::ceil(cfg.c0 * (1.0 / kappa) * log_term));
}

IntervalPartition approx_equal_partition(SampleSource& draws, double kappa,
                                         const PartitionConfig& cfg) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument("approx_equal_partition: kappa must be in (0,1)");

    const std::size_t m0 = partition_sample_budget(kappa, cfg);
    std::vector<double> pts = draws.take(m0);
    std::sort(pts.begin(), pts.end());

    // One cut every ceil(kappa*m0) order statistics, so each interval holds
    // empirical mass ~kappa and true mass in [kappa/2, 3*kappa] whp.  The
    // trailing remainder (fewer than `step` points) is merged into the last
    // interval, which therefore holds at most 2*step - 1 points.
    const std::size_t step =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(kappa * static_cast<double>(m0))));

    std::vector<double> cuts{0.0};
    std::size_t idx = step;
    while (idx < m0 && m0 - idx >= step) {
        if (pts[idx] > cuts.back() && pts[idx] < 1.0) {
            cuts.push_back(pts[idx]);
            idx += step;
        } else {
            ++idx;  // tie with previous cut: use next distinct order statistic
        }
    }
    cuts.push_back(1.0);

    IntervalPartition out{std::move(cuts)};
    const std::size_t expected = m0 / step;
    out.well_behavedness_suspect = expected > 2 && 2 * out.size() < expected;
    return out;
}

IntervalPartition partition_for_learner(SampleSource& draws, std::size_t k, double eps_prime,
                                        const PartitionConfig& cfg) {
    if (k < 1) throw std::invalid_argument("partition_for_learner: need k >= 1");
    if (!(eps_prime > 0.0 && eps_prime < 1.0))
        throw std::invalid_argument("partition_for_learner: eps' must be in (0,1)");
    const double kappa = eps_prime / (6.0 * static_cast<double>(k));
    return approx_equal_partition(draws, kappa, cfg);
}

}  // namespace histloom
