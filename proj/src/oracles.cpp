#include "histloom/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace histloom {

namespace {

constexpr std::size_t kMaxDomain = 4096;

/// Fenwick tree over value ranks holding counts and sums, supporting the
/// running median / absolute-deviation queries of the segment DP.
class MedianCostTracker {
public:
    explicit MedianCostTracker(const std::vector<double>& cell_mass) : values_(cell_mass) {
        const std::size_t n = values_.size();
        rank_of_.resize(n);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values_[a] < values_[b] || (values_[a] == values_[b] && a < b);
        });
        sorted_values_.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            rank_of_[order[r]] = r;
            sorted_values_[r] = values_[order[r]];
        }
        cnt_.assign(n + 1, 0);
        sum_.assign(n + 1, 0.0);
        log2_ = 0;
        while ((std::size_t{1} << (log2_ + 1)) <= n) ++log2_;
    }

    void clear() {
        std::fill(cnt_.begin(), cnt_.end(), 0);
        std::fill(sum_.begin(), sum_.end(), 0.0);
        inserted_ = 0;
        total_ = 0.0;
    }

    void insert_cell(std::size_t cell) {
        std::size_t i = rank_of_[cell] + 1;
        const double v = values_[cell];
        for (; i < cnt_.size(); i += i & (~i + 1)) {
            cnt_[i] += 1;
            sum_[i] += v;
        }
        ++inserted_;
        total_ += v;
    }

    /// Sum of |v - median| over inserted cells (the optimal constant's L1
    /// cost for the current segment).
    double cost() const {
        const std::size_t need = (inserted_ + 1) / 2;  // lower median position
        // binary lifting to the largest prefix with count < need
        std::size_t pos = 0;
        std::size_t cum = 0;
        double cumsum = 0.0;
        for (std::size_t step = std::size_t{1} << log2_; step > 0; step >>= 1) {
            const std::size_t nxt = pos + step;
            if (nxt < cnt_.size() && cum + cnt_[nxt] < need) {
                pos = nxt;
                cum += cnt_[nxt];
                cumsum += sum_[nxt];
            }
        }
        // pos is the rank index (1-based Fenwick) just below the median
        const double med = sorted_values_[pos];  // rank pos+1 -> 0-based pos
        const std::size_t below = cum;
        const double below_sum = cumsum;
        // cells strictly below the median rank contribute med - v; the rest v - med
        const double lo_cost = med * static_cast<double>(below) - below_sum;
        const double hi_cost =
            (total_ - below_sum) - med * static_cast<double>(inserted_ - below);
        return lo_cost + hi_cost;
    }

    double median() const {
        const std::size_t need = (inserted_ + 1) / 2;
        std::size_t pos = 0;
        std::size_t cum = 0;
        for (std::size_t step = std::size_t{1} << log2_; step > 0; step >>= 1) {
            const std::size_t nxt = pos + step;
            if (nxt < cnt_.size() && cum + cnt_[nxt] < need) {
                pos = nxt;
                cum += cnt_[nxt];
            }
        }
        return sorted_values_[pos];
    }

private:
    std::vector<double> values_;
    std::vector<double> sorted_values_;
    std::vector<std::size_t> rank_of_;
    std::vector<std::uint32_t> cnt_;
    std::vector<double> sum_;
    std::size_t log2_ = 0;
    std::size_t inserted_ = 0;
    double total_ = 0.0;
};

}  // namespace

double weighted_median(std::vector<std::pair<double, double>> vw) {
    if (vw.empty()) throw std::invalid_argument("weighted_median: empty input");
    std::sort(vw.begin(), vw.end());
    double total = 0.0;
    for (const auto& [v, w] : vw) {
        if (w < 0.0) throw std::invalid_argument("weighted_median: negative weight");
        total += w;
    }
    double cum = 0.0;
    for (const auto& [v, w] : vw) {
        cum += w;
        if (cum >= total / 2.0) return v;
    }
    return vw.back().first;
}

OptKResult opt_k_exact(const DiscreteDistribution& p, std::size_t k) {
    const std::size_t M = p.domain_size();
    if (k < 1) throw std::invalid_argument("opt_k_exact: need k >= 1");
    if (M > kMaxDomain) throw std::invalid_argument("opt_k_exact: domain size over the desk cap");
    if (k > M) k = M;

    const std::vector<double>& w = p.weights();
    MedianCostTracker tracker(w);
    const double inf = std::numeric_limits<double>::infinity();

    // dp[j][b]: best cost of covering cells [0,b) with exactly j segments.
    std::vector<std::vector<double>> dp(k + 1, std::vector<double>(M + 1, inf));
    std::vector<std::vector<std::uint16_t>> parent(
        k + 1, std::vector<std::uint16_t>(M + 1, 0));
    dp[0][0] = 0.0;

    for (std::size_t j = 1; j <= k; ++j) {
        for (std::size_t a = j - 1; a < M; ++a) {
            if (dp[j - 1][a] == inf) continue;
            const double base = dp[j - 1][a];
            tracker.clear();
            for (std::size_t b = a + 1; b <= M; ++b) {
                tracker.insert_cell(b - 1);
                const double c = base + tracker.cost();
                if (c < dp[j][b]) {
                    dp[j][b] = c;
                    parent[j][b] = static_cast<std::uint16_t>(a);
                }
            }
        }
    }

    std::size_t best_j = 1;
    for (std::size_t j = 2; j <= k; ++j)
        if (dp[j][M] < dp[best_j][M]) best_j = j;

    // reconstruct segment boundaries (cell indices)
    std::vector<std::size_t> bounds{M};
    for (std::size_t j = best_j, b = M; j >= 1; --j) {
        b = parent[j][b];
        bounds.push_back(b);
    }
    std::reverse(bounds.begin(), bounds.end());

    // segment levels: median cell mass, then convert to density
    std::vector<double> bp(bounds.size());
    std::vector<double> vals(bounds.size() - 1);
    for (std::size_t s = 0; s < bounds.size(); ++s)
        bp[s] = bounds[s] == M ? 1.0 : static_cast<double>(bounds[s]) / static_cast<double>(M);
    double mass = 0.0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        std::vector<double> seg(w.begin() + static_cast<std::ptrdiff_t>(bounds[s]),
                                w.begin() + static_cast<std::ptrdiff_t>(bounds[s + 1]));
        std::sort(seg.begin(), seg.end());
        const double level_mass = seg[(seg.size() - 1) / 2];  // lower median
        vals[s] = level_mass * static_cast<double>(M);
        mass += level_mass * static_cast<double>(bounds[s + 1] - bounds[s]);
    }

    OptKResult out;
    out.lower = dp[best_j][M];
    PiecewiseDensity g(bp, vals);
    // rescale to a distribution; within a factor 2 of the unconstrained value
    out.argmin = mass > 0.0 ? g.scaled(1.0 / mass) : PiecewiseDensity();
    out.upper = l1_distance(density_from_discrete(p), out.argmin);
    out.q_breakpoints.assign(bp.begin(), bp.end());
    return out;
}

OptKResult opt_k_exact(const PiecewiseDensity& p, std::size_t k, std::size_t grid) {
    for (double b : p.breakpoints()) {
        const double cell = b * static_cast<double>(grid);
        if (std::fabs(cell - std::round(cell)) > 1e-9)
            throw std::invalid_argument("opt_k_exact: density breakpoints are not grid-aligned");
    }
    OptKResult out = opt_k_exact(discretize(p, grid), k);
    out.upper = l1_distance(p, out.argmin);
    return out;
}

// --- A_ell distance --------------------------------------------------------------

double max_disjoint_blocks_sum(std::span<const double> deltas, std::size_t ell) {
    if (ell == 0 || deltas.empty()) return 0.0;
    ell = std::min(ell, (deltas.size() + 1) / 2);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    // open[j]: best sum of <= j blocks where the last block ends at the
    // current element; best[j]: best over the processed prefix.
    std::vector<double> open(ell + 1, neg_inf);
    std::vector<double> best(ell + 1, 0.0);
    for (const double x : deltas) {
        for (std::size_t j = ell; j >= 1; --j) {
            const double start_new = best[j - 1] + x;
            const double extend = open[j] == neg_inf ? neg_inf : open[j] + x;
            open[j] = std::max(start_new, extend);
        }
        for (std::size_t j = 1; j <= ell; ++j) best[j] = std::max(best[j], open[j]);
    }
    return best[ell];
}

namespace {

double a_ell_from_deltas(const std::vector<double>& deltas, std::size_t ell) {
    std::vector<double> negated(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) negated[i] = -deltas[i];
    return std::max(max_disjoint_blocks_sum(deltas, ell),
                    max_disjoint_blocks_sum(negated, ell));
}

}  // namespace

double a_ell_distance(const PiecewiseDensity& f, const PiecewiseDensity& g, std::size_t ell) {
    if (ell < 1) throw std::invalid_argument("a_ell_distance: need ell >= 1");
    // signed per-piece masses on the merged refinement
    const auto& fb = f.breakpoints();
    const auto& gb = g.breakpoints();
    std::vector<double> deltas;
    deltas.reserve(fb.size() + gb.size());
    std::size_t i = 0, j = 0;
    double x = 0.0;
    while (x < 1.0) {
        const double next = std::min(fb[i + 1], gb[j + 1]);
        deltas.push_back((f.values()[i] - g.values()[j]) * (next - x));
        if (next == fb[i + 1] && i + 2 < fb.size()) ++i;
        if (next == gb[j + 1] && j + 2 < gb.size()) ++j;
        x = next;
    }
    return a_ell_from_deltas(deltas, ell);
}

double a_ell_distance(const PiecewiseDensity& f, const EmpiricalSample& s, std::size_t ell) {
    if (ell < 1) throw std::invalid_argument("a_ell_distance: need ell >= 1");
    if (s.empty()) throw std::invalid_argument("a_ell_distance: empty sample");
    // alternating sequence of empirical atoms (+count/m) and the continuous
    // mass of f between them (negative); the signed-measure difference
    // p_hat - f evaluated on the natural event refinement
    const std::vector<double>& pts = s.points();
    const double m = static_cast<double>(pts.size());
    std::vector<double> deltas;
    deltas.reserve(2 * pts.size() + 1);
    double prev = 0.0;
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j < pts.size() && pts[j] == pts[i]) ++j;
        const double gap = f.cdf(pts[i]) - f.cdf(prev);
        if (gap > 0.0) deltas.push_back(-gap);
        deltas.push_back(static_cast<double>(j - i) / m);
        prev = pts[i];
        i = j;
    }
    const double tail = f.cdf(1.0) - f.cdf(prev);
    if (tail > 0.0) deltas.push_back(-tail);
    return a_ell_from_deltas(deltas, ell);
}

double vc_concentration_probe(const PiecewiseDensity& f, std::size_t m, std::size_t ell,
                              std::size_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("vc_concentration_probe: need trials >= 1");
    double acc = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const EmpiricalSample s = sample(f, m, rng);
        acc += a_ell_distance(f, s, ell);
    }
    return acc / static_cast<double>(trials);
}

}  // namespace histloom
