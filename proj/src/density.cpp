#include "histloom/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace histloom {

namespace {

constexpr double kFullDistributionTol = 1e-9;

void require(bool cond, const char* msg) {
    if (!cond) throw contract_error(msg);
}

}  // namespace

// --- Interval ----------------------------------------------------------------

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    require(lo >= 0.0 && lo < hi && hi <= 1.0, "Interval: need 0 <= lo < hi <= 1");
}

Interval merge_consecutive(const Interval& a, const Interval& b) {
    require(consecutive(a, b), "merge_consecutive: intervals are not consecutive");
    return Interval(a.lo, b.hi);
}

// --- PiecewiseDensity ---------------------------------------------------------

PiecewiseDensity::PiecewiseDensity() : PiecewiseDensity({0.0, 1.0}, {1.0}) {}

PiecewiseDensity::PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> values) {
    require(breakpoints.size() >= 2, "PiecewiseDensity: need at least two breakpoints");
    require(breakpoints.size() == values.size() + 1,
            "PiecewiseDensity: breakpoints.size() must be values.size() + 1");
    require(breakpoints.front() == 0.0 && breakpoints.back() == 1.0,
            "PiecewiseDensity: breakpoints must start at 0 and end at 1");

    breakpoints_.reserve(breakpoints.size());
    values_.reserve(values.size());
    breakpoints_.push_back(breakpoints.front());
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(breakpoints[i + 1] >= breakpoints[i], "PiecewiseDensity: breakpoints not sorted");
        if (breakpoints[i + 1] == breakpoints[i]) continue;  // drop zero-width piece
        require(values[i] >= 0.0, "PiecewiseDensity: negative density value");
        breakpoints_.push_back(breakpoints[i + 1]);
        values_.push_back(values[i]);
    }
    require(breakpoints_.size() >= 2, "PiecewiseDensity: empty after normalization");

    cumulative_.resize(values_.size() + 1);
    cumulative_[0] = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        cumulative_[i + 1] = cumulative_[i] + values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
    require(std::isfinite(cumulative_.back()), "PiecewiseDensity: total mass is not finite");
}

double PiecewiseDensity::value_at(double x) const {
    if (x < 0.0 || x >= 1.0) return 0.0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return values_[piece];
}

double PiecewiseDensity::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return cumulative_.back();
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return cumulative_[piece] + values_[piece] * (x - breakpoints_[piece]);
}

double PiecewiseDensity::mass_on(const Interval& I) const { return cdf(I.hi) - cdf(I.lo); }

double PiecewiseDensity::quantile(double u) const {
    const double target = u * total_mass();
    // last piece whose cumulative start is <= target; zero-mass pieces are
    // skipped by upper_bound since their cumulative entries coincide
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    std::size_t piece = static_cast<std::size_t>(it - cumulative_.begin());
    piece = piece > 0 ? piece - 1 : 0;
    if (piece >= values_.size()) piece = values_.size() - 1;
    const double v = values_[piece];
    double x = v > 0.0 ? breakpoints_[piece] + (target - cumulative_[piece]) / v
                       : breakpoints_[piece];
    if (x >= breakpoints_[piece + 1]) x = std::nextafter(breakpoints_[piece + 1], 0.0);
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    return x;
}

bool PiecewiseDensity::is_full_distribution() const {
    return std::fabs(total_mass() - 1.0) <= kFullDistributionTol;
}

PiecewiseDensity PiecewiseDensity::scaled(double a) const {
    require(a >= 0.0, "PiecewiseDensity::scaled: negative factor");
    std::vector<double> v(values_);
    for (double& x : v) x *= a;
    return PiecewiseDensity(breakpoints_, std::move(v));
}

// --- EmpiricalSample ----------------------------------------------------------

EmpiricalSample::EmpiricalSample(std::vector<double> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    if (!points_.empty())
        require(points_.front() >= 0.0 && points_.back() < 1.0,
                "EmpiricalSample: points must lie in [0,1)");
}

std::size_t EmpiricalSample::count_in(const Interval& I) const {
    const auto lo = std::lower_bound(points_.begin(), points_.end(), I.lo);
    const auto hi = std::lower_bound(points_.begin(), points_.end(), I.hi);
    return static_cast<std::size_t>(hi - lo);
}

double EmpiricalSample::mass_on(const Interval& I) const {
    require(!points_.empty(), "EmpiricalSample::mass_on: empty sample");
    return static_cast<double>(count_in(I)) / static_cast<double>(points_.size());
}

// --- DiscreteDistribution -----------------------------------------------------

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
    require(!weights_.empty(), "DiscreteDistribution: empty weight vector");
    double sum = 0.0;
    for (double w : weights_) {
        require(w >= 0.0, "DiscreteDistribution: negative weight");
        sum += w;
    }
    require(std::fabs(sum - 1.0) <= 1e-12, "DiscreteDistribution: weights must sum to 1");
}

// --- flattening ---------------------------------------------------------------

namespace {

std::vector<Interval> sorted_disjoint(std::span<const Interval> parts) {
    std::vector<Interval> sorted(parts.begin(), parts.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        require(sorted[i].lo >= sorted[i - 1].hi, "flatten: overlapping intervals in partition");
    return sorted;
}

template <typename MassFn>
PiecewiseDensity flatten_impl(std::span<const Interval> parts, MassFn&& mass) {
    const std::vector<Interval> sorted = sorted_disjoint(parts);
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    for (const Interval& I : sorted) {
        if (I.lo > bp.back()) {
            vals.push_back(0.0);
            bp.push_back(I.lo);
        }
        vals.push_back(mass(I) / I.width());
        bp.push_back(I.hi);
    }
    if (bp.back() < 1.0) {
        vals.push_back(0.0);
        bp.push_back(1.0);
    }
    return PiecewiseDensity(std::move(bp), std::move(vals));
}

}  // namespace

PiecewiseDensity flatten(const PiecewiseDensity& r, std::span<const Interval> parts) {
    return flatten_impl(parts, [&](const Interval& I) { return r.mass_on(I); });
}

PiecewiseDensity flatten(const EmpiricalSample& r, std::span<const Interval> parts) {
    return flatten_impl(parts, [&](const Interval& I) { return r.mass_on(I); });
}

// --- merge cost ---------------------------------------------------------------

double alpha_from_masses(double mass_i, double mass_j, double width_i, double width_j) {
    return 2.0 / (width_i + width_j) * std::fabs(mass_i * width_j - mass_j * width_i);
}

namespace {

template <typename R>
double alpha_impl(const R& r, const Interval& I, const Interval& J) {
    if (!consecutive(I, J)) throw contract_error("alpha: intervals are not consecutive");
    return alpha_from_masses(r.mass_on(I), r.mass_on(J), I.width(), J.width());
}

}  // namespace

double alpha(const PiecewiseDensity& r, const Interval& I, const Interval& J) {
    return alpha_impl(r, I, J);
}

double alpha(const EmpiricalSample& r, const Interval& I, const Interval& J) {
    return alpha_impl(r, I, J);
}

// --- distances ----------------------------------------------------------------

namespace {

/// Walks the merged breakpoint refinement of f and g over [x0, x1),
/// accumulating |f - g| piece by piece.
double l1_between(const PiecewiseDensity& f, const PiecewiseDensity& g, double x0, double x1) {
    const auto& fb = f.breakpoints();
    const auto& gb = g.breakpoints();
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(fb.begin(), fb.end(), x0) - fb.begin() - 1);
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(gb.begin(), gb.end(), x0) - gb.begin() - 1);
    double acc = 0.0;
    double x = x0;
    while (x < x1) {
        const double next = std::min({fb[i + 1], gb[j + 1], x1});
        acc += std::fabs(f.values()[i] - g.values()[j]) * (next - x);
        if (next == fb[i + 1] && i + 2 < fb.size()) ++i;
        if (next == gb[j + 1] && j + 2 < gb.size()) ++j;
        x = next;
    }
    return acc;
}

}  // namespace

double l1_distance(const PiecewiseDensity& f, const PiecewiseDensity& g) {
    return l1_between(f, g, 0.0, 1.0);
}

double tv_distance(const PiecewiseDensity& f, const PiecewiseDensity& g) {
    return 0.5 * l1_distance(f, g);
}

double l1_on_interval(const PiecewiseDensity& f, const PiecewiseDensity& g, const Interval& I) {
    return l1_between(f, g, I.lo, I.hi);
}

// --- sampling -----------------------------------------------------------------

double draw_from(const PiecewiseDensity& f, Rng& rng) { return f.quantile(rng.next_double()); }

EmpiricalSample sample(const PiecewiseDensity& f, std::size_t m, Rng& rng) {
    require(m >= 1, "sample: need m >= 1");
    if (!f.is_full_distribution())
        throw contract_error("sample: input is a sub-distribution, not a distribution");
    std::vector<double> pts(m);
    for (double& p : pts) p = draw_from(f, rng);
    return EmpiricalSample(std::move(pts));
}

std::vector<std::uint32_t> sample_indices(const DiscreteDistribution& d, std::size_t m, Rng& rng) {
    require(m >= 1, "sample_indices: need m >= 1");
    const auto& w = d.weights();
    std::vector<double> cum(w.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) cum[i + 1] = cum[i] + w[i];
    std::vector<std::uint32_t> out(m);
    for (auto& idx : out) {
        const double u = rng.next_double() * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cum.begin());
        i = i > 0 ? i - 1 : 0;
        if (i >= w.size()) i = w.size() - 1;
        idx = static_cast<std::uint32_t>(i);
    }
    return out;
}

EmpiricalSample sample(const DiscreteDistribution& d, std::size_t m, Rng& rng) {
    const std::vector<std::uint32_t> idx = sample_indices(d, m, rng);
    std::vector<double> pts(m);
    for (std::size_t i = 0; i < m; ++i) pts[i] = midpoint_embedding(idx[i], d.domain_size());
    return EmpiricalSample(std::move(pts));
}

// --- discretization -----------------------------------------------------------

DiscreteDistribution discretize(const PiecewiseDensity& f, std::size_t M) {
    require(M >= 1, "discretize: need M >= 1");
    std::vector<double> w(M);
    double prev = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double right = i + 1 == M ? 1.0 : static_cast<double>(i + 1) / static_cast<double>(M);
        const double c = f.cdf(right);
        w[i] = c - prev;
        if (w[i] < 0.0) w[i] = 0.0;  // guard against rounding at piece edges
        prev = c;
    }
    return DiscreteDistribution(std::move(w));
}

PiecewiseDensity density_from_discrete(const DiscreteDistribution& d) {
    const std::size_t M = d.domain_size();
    std::vector<double> bp(M + 1);
    std::vector<double> vals(M);
    for (std::size_t i = 0; i <= M; ++i)
        bp[i] = i == M ? 1.0 : static_cast<double>(i) / static_cast<double>(M);
    for (std::size_t i = 0; i < M; ++i) vals[i] = d.weight(i) * static_cast<double>(M);
    return PiecewiseDensity(std::move(bp), std::move(vals));
}

}  // namespace histloom
