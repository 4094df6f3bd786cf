#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "helpers.hpp"
#include "histloom/oracles.hpp"
#include "histloom/rng.hpp"

using namespace histloom;
using histloom::testing::random_distribution;

namespace {

/// Exhaustive optimum over k-flat nonnegative functions with grid-aligned
/// breakpoints: enumerate breakpoint sets, optimal level per segment is the
/// cell-mass median.
double exhaustive_function_opt(const std::vector<double>& w, std::size_t k) {
    const std::size_t M = w.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> cuts;  // interior cut positions, ascending

    auto segment_cost = [&](std::size_t a, std::size_t b) {
        std::vector<double> seg(w.begin() + static_cast<std::ptrdiff_t>(a),
                                w.begin() + static_cast<std::ptrdiff_t>(b));
        std::sort(seg.begin(), seg.end());
        const double med = seg[(seg.size() - 1) / 2];
        double cost = 0.0;
        for (double v : seg) cost += std::fabs(v - med);
        return cost;
    };

    auto evaluate = [&]() {
        double total = 0.0;
        std::size_t prev = 0;
        for (std::size_t c : cuts) {
            total += segment_cost(prev, c);
            prev = c;
        }
        total += segment_cost(prev, M);
        best = std::min(best, total);
    };

    // choose up to k-1 interior cuts out of M-1 positions
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t next, std::size_t left) {
        evaluate();
        if (left == 0) return;
        for (std::size_t c = next; c < M; ++c) {
            cuts.push_back(c);
            rec(c + 1, left - 1);
            cuts.pop_back();
        }
    };
    rec(1, k - 1);
    return best;
}

/// Brute-force A_ell: enumerate all unions of at most ell refinement blocks.
double brute_force_a_ell(const std::vector<double>& deltas, std::size_t ell) {
    const std::size_t n = deltas.size();
    double best = 0.0;
    // enumerate disjoint [s,e) blocks recursively
    std::function<void(std::size_t, std::size_t, double)> rec =
        [&](std::size_t start, std::size_t left, double acc) {
            best = std::max(best, std::fabs(acc));
            if (left == 0) return;
            for (std::size_t s = start; s < n; ++s) {
                double sum = 0.0;
                for (std::size_t e = s + 1; e <= n; ++e) {
                    sum += deltas[e - 1];
                    rec(e + 1, left - 1, acc + sum);  // gap of >= 1 block after e
                }
            }
        };
    rec(0, ell, 0.0);
    return best;
}

std::vector<double> refinement_deltas(const PiecewiseDensity& f, const PiecewiseDensity& g) {
    std::vector<double> bp(f.breakpoints());
    bp.insert(bp.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double mid = 0.5 * (bp[i] + bp[i + 1]);
        out.push_back((f.value_at(mid) - g.value_at(mid)) * (bp[i + 1] - bp[i]));
    }
    return out;
}

}  // namespace

TEST_CASE("weighted median basics") {
    CHECK(weighted_median({{3.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}}) == 2.0);
    CHECK(weighted_median({{1.0, 10.0}, {5.0, 1.0}}) == 1.0);
    CHECK_THROWS_AS(weighted_median({}), std::invalid_argument);
}

TEST_CASE("opt_k on an exactly k-flat grid density is zero") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t M = 16;
        std::vector<double> w(M, 0.0);
        // 3-flat on the grid
        const double levels[] = {0.02, 0.105, 0.03};
        for (std::size_t i = 0; i < M; ++i) w[i] = levels[i < 5 ? 0 : (i < 11 ? 1 : 2)];
        double s = 0.0;
        for (double x : w) s += x;
        for (double& x : w) x /= s;
        const OptKResult res = opt_k_exact(DiscreteDistribution(w), 3);
        CHECK(res.lower == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(res.upper == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(res.argmin.piece_count() <= 3);
    }
}

TEST_CASE("opt_k DP lower bound matches exhaustive search at M <= 16") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t M = 4 + rng.next_below(13);
        const std::size_t k = 1 + rng.next_below(std::min<std::size_t>(M, 4));
        std::vector<double> w(M);
        double total = 0.0;
        for (double& x : w) {
            x = rng.next_double();
            total += x;
        }
        for (double& x : w) x /= total;
        const DiscreteDistribution p(w);
        const OptKResult res = opt_k_exact(p, k);
        const double exhaustive = exhaustive_function_opt(w, k);
        CHECK(res.lower == doctest::Approx(exhaustive).epsilon(1e-9));
        CHECK(res.lower <= res.upper + 1e-12);
        CHECK(res.upper <= 2.0 * res.lower + 1e-9);
        CHECK(res.argmin.is_full_distribution());
        CHECK(l1_distance(density_from_discrete(p), res.argmin) ==
              doctest::Approx(res.upper).epsilon(1e-9));
    }
}

TEST_CASE("opt_k example p = (0.4, 0.1, 0.4, 0.1), k = 2") {
    const DiscreteDistribution p({0.4, 0.1, 0.4, 0.1});
    const OptKResult res = opt_k_exact(p, 2);
    const double exhaustive = exhaustive_function_opt(p.weights(), 2);
    CHECK(res.lower == doctest::Approx(exhaustive).epsilon(1e-9));
    CHECK(res.upper >= res.lower - 1e-12);
    CHECK(res.upper <= 2.0 * res.lower + 1e-9);
}

TEST_CASE("opt_k rejects bad arguments") {
    const DiscreteDistribution p({0.5, 0.5});
    CHECK_THROWS_AS(opt_k_exact(p, 0), std::invalid_argument);
    const PiecewiseDensity off_grid({0.0, 0.3333333, 1.0}, {1.5, 0.75});
    CHECK_THROWS_AS(opt_k_exact(off_grid, 1, 4), std::invalid_argument);
}

TEST_CASE("a_ell distance: zero, two-flat example, monotone in ell") {
    const PiecewiseDensity uniform;
    CHECK(a_ell_distance(uniform, uniform, 1) == 0.0);

    const PiecewiseDensity g({0.0, 0.5, 1.0}, {1.5, 0.5});
    CHECK(a_ell_distance(uniform, g, 1) == doctest::Approx(0.25).epsilon(1e-12));

    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        const PiecewiseDensity f = random_distribution(1 + rng.next_below(10), rng);
        const PiecewiseDensity h = random_distribution(1 + rng.next_below(10), rng);
        const double half_l1 = 0.5 * l1_distance(f, h);
        double prev = 0.0;
        for (std::size_t ell = 1; ell <= 12; ++ell) {
            const double d = a_ell_distance(f, h, ell);
            CHECK(d >= prev - 1e-15);
            CHECK(d <= half_l1 + 1e-12);
            prev = d;
        }
        CHECK(prev == doctest::Approx(half_l1).epsilon(1e-10));  // ell large: equality
        CHECK(a_ell_distance(f, h, 3) == a_ell_distance(h, f, 3));  // symmetry
    }
}

TEST_CASE("a_ell matches brute-force union enumeration at small sizes") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const PiecewiseDensity f = random_distribution(1 + rng.next_below(5), rng);
        const PiecewiseDensity g = random_distribution(1 + rng.next_below(5), rng);
        const std::vector<double> deltas = refinement_deltas(f, g);
        REQUIRE(deltas.size() <= 10);
        for (std::size_t ell = 1; ell <= 3; ++ell) {
            const double fast = a_ell_distance(f, g, ell);
            const double slow = brute_force_a_ell(deltas, ell);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
        }
    }
}

TEST_CASE("max_disjoint_blocks_sum bridges gaps when it pays") {
    // one interval spanning a small dip beats the best single run
    const double seq[] = {5.0, -1.0, 5.0, -9.0};
    CHECK(max_disjoint_blocks_sum(seq, 1) == doctest::Approx(9.0));
    CHECK(max_disjoint_blocks_sum(seq, 2) == doctest::Approx(10.0));
    const double neg[] = {-1.0, -2.0};
    CHECK(max_disjoint_blocks_sum(neg, 2) == 0.0);  // empty selection allowed
}

TEST_CASE("a_ell against an empirical sample matches an explicit construction") {
    // uniform density, sample of 4 distinct points: the best single interval
    // grabs consecutive atoms while paying the gap mass between them
    const PiecewiseDensity uniform;
    const EmpiricalSample s({0.1, 0.2, 0.3, 0.9});
    // atoms of 1/4 each; best 1-interval is the empty gap (0.3, 0.9) with
    // f-mass 0.6, beating the atom run [0.1, 0.3] worth 0.75 - 0.2 = 0.55
    CHECK(a_ell_distance(uniform, s, 1) == doctest::Approx(0.6).epsilon(1e-9));
    // ell = 2: the two atom groups, paying the gaps inside the first run
    CHECK(a_ell_distance(uniform, s, 2) == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("vc probe decays like 1/sqrt(m) for the uniform target") {
    const PiecewiseDensity uniform;
    Rng rng(2024);
    const double m100 = vc_concentration_probe(uniform, 100, 1, 200, rng);
    const double m1000 = vc_concentration_probe(uniform, 1000, 1, 200, rng);
    const double m10000 = vc_concentration_probe(uniform, 10000, 1, 200, rng);
    CHECK(m1000 / m100 >= 0.25);
    CHECK(m1000 / m100 <= 0.45);
    CHECK(m10000 / m1000 >= 0.25);
    CHECK(m10000 / m1000 <= 0.45);
    CHECK(m10000 < m100);  // consistency: large m drives the distance down
}

TEST_CASE("vc probe: doubling the class size grows the mean at most sqrt(2)(1+slack)") {
    const PiecewiseDensity uniform;
    Rng rng(606);
    const double ell1 = vc_concentration_probe(uniform, 1000, 1, 200, rng);
    const double ell2 = vc_concentration_probe(uniform, 1000, 2, 200, rng);
    CHECK(ell2 >= ell1 - 1e-12);
    CHECK(ell2 <= std::sqrt(2.0) * 1.3 * ell1);
}
