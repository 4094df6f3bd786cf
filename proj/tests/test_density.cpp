#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "histloom/density.hpp"
#include "histloom/rng.hpp"

using namespace histloom;
using histloom::testing::l1_quadrature;
using histloom::testing::random_distribution;
using histloom::testing::random_subdensity;

TEST_CASE("interval invariants") {
    CHECK_THROWS_AS(Interval(0.5, 0.5), contract_error);
    CHECK_THROWS_AS(Interval(0.7, 0.2), contract_error);
    CHECK_THROWS_AS(Interval(-0.1, 0.5), contract_error);
    CHECK_THROWS_AS(Interval(0.5, 1.5), contract_error);
    const Interval I(0.25, 0.75);
    CHECK(I.contains(0.25));
    CHECK_FALSE(I.contains(0.75));
}

TEST_CASE("piecewise density construction and normalization") {
    // zero-width pieces are dropped
    const PiecewiseDensity d({0.0, 0.5, 0.5, 1.0}, {2.0, 99.0, 0.0});
    CHECK(d.piece_count() == 2);
    CHECK(d.values()[0] == 2.0);
    CHECK(d.values()[1] == 0.0);
    CHECK(d.total_mass() == doctest::Approx(1.0));
    CHECK(d.is_full_distribution());

    CHECK_THROWS_AS(PiecewiseDensity({0.0, 0.9}, {1.0}), contract_error);
    CHECK_THROWS_AS(PiecewiseDensity({0.0, 0.5, 1.0}, {1.0, -0.5}), contract_error);
    CHECK_THROWS_AS(PiecewiseDensity({0.0, 0.6, 0.4, 1.0}, {1.0, 1.0, 1.0}), contract_error);
}

TEST_CASE("mass_on examples") {
    const PiecewiseDensity uniform;
    CHECK(uniform.mass_on(Interval(0.25, 0.75)) == doctest::Approx(0.5).epsilon(1e-12));

    const PiecewiseDensity half({0.0, 0.5, 1.0}, {2.0, 0.0});
    CHECK(half.mass_on(Interval(0.25, 0.75)) == doctest::Approx(0.5).epsilon(1e-12));

    const EmpiricalSample s({0.2, 0.2, 0.8, 0.9});
    CHECK(s.mass_on(Interval(0.0, 0.5)) == doctest::Approx(0.5));
    CHECK(s.count_in(Interval(0.2, 0.8)) == 2);
}

TEST_CASE("flatten examples") {
    const PiecewiseDensity uniform;
    const Interval halves[] = {Interval(0.0, 0.5), Interval(0.5, 1.0)};
    const PiecewiseDensity flat_uniform = flatten(uniform, halves);
    CHECK(l1_distance(flat_uniform, uniform) == doctest::Approx(0.0).epsilon(1e-15));

    // r = 2 on [0,0.25), 2/3 on [0.25,1); P = {[0,0.5)}
    const PiecewiseDensity r({0.0, 0.25, 1.0}, {2.0, 2.0 / 3.0});
    const Interval single[] = {Interval(0.0, 0.5)};
    const PiecewiseDensity f = flatten(r, single);
    CHECK(f.value_at(0.1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(f.value_at(0.7) == 0.0);
    CHECK(f.total_mass() == doctest::Approx(r.mass_on(Interval(0.0, 0.5))).epsilon(1e-12));

    const EmpiricalSample s({0.1, 0.1, 0.9});
    const PiecewiseDensity fe = flatten(s, halves);
    CHECK(fe.value_at(0.2) == doctest::Approx((2.0 / 3.0) / 0.5));
    CHECK(fe.value_at(0.7) == doctest::Approx((1.0 / 3.0) / 0.5));

    const Interval overlapping[] = {Interval(0.0, 0.6), Interval(0.5, 1.0)};
    CHECK_THROWS_AS(flatten(uniform, overlapping), contract_error);
}

TEST_CASE("flatten conserves mass") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const PiecewiseDensity r = random_subdensity(1 + rng.next_below(8), rng);
        // random partition of [0,1)
        std::vector<Interval> parts;
        double prev = 0.0;
        while (prev < 1.0) {
            double next = prev + 0.05 + 0.4 * rng.next_double();
            if (next >= 1.0 - 1e-3) next = 1.0;
            parts.emplace_back(prev, next);
            prev = next;
        }
        const PiecewiseDensity f = flatten(r, parts);
        CHECK(f.total_mass() == doctest::Approx(r.total_mass()).epsilon(1e-12));
    }
}

TEST_CASE("alpha examples and contract") {
    // equal flattened densities merge losslessly
    const PiecewiseDensity d({0.0, 0.2, 0.6, 1.0}, {1.0, 1.0, 1.0});
    CHECK(alpha(d, Interval(0.0, 0.2), Interval(0.2, 0.6)) == doctest::Approx(0.0));

    // two-piece: r(I)=0.3 on [0,0.5), r(J)=0.7 on [0.5,1)
    const PiecewiseDensity r({0.0, 0.5, 1.0}, {0.6, 1.4});
    CHECK(alpha(r, Interval(0.0, 0.5), Interval(0.5, 1.0)) == doctest::Approx(0.4).epsilon(1e-12));

    // r(I)=0 on [0,0.25), r(J)=1 on [0.25,1)
    const PiecewiseDensity q({0.0, 0.25, 1.0}, {0.0, 4.0 / 3.0});
    CHECK(alpha(q, Interval(0.0, 0.25), Interval(0.25, 1.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(alpha(r, Interval(0.0, 0.4), Interval(0.5, 1.0)), contract_error);
}

TEST_CASE("alpha equals the flattening L1 identity on random cases") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const PiecewiseDensity r = random_subdensity(1 + rng.next_below(10), rng);
        const double a = 0.05 + 0.85 * rng.next_double();
        const double b = a + 0.01 + (0.98 - a) * rng.next_double();
        double c = b + 0.01 + (0.99 - b) * rng.next_double();
        if (c >= 1.0) c = 1.0;
        const Interval I(a, b), J(b, c);
        const Interval both[] = {I, J};
        const Interval merged[] = {Interval(a, c)};
        const double direct = alpha(r, I, J);
        const double via_flatten =
            l1_on_interval(flatten(r, both), flatten(r, merged), Interval(a, c));
        CHECK(std::fabs(direct - via_flatten) <= 1e-10);
    }
}

TEST_CASE("alpha cross-checked by quadrature") {
    Rng rng(13);
    const PiecewiseDensity r = random_subdensity(6, rng);
    const Interval I(0.1, 0.45), J(0.45, 0.8);
    const Interval both[] = {I, J};
    const Interval merged[] = {Interval(0.1, 0.8)};
    const double numeric =
        l1_quadrature(flatten(r, both), flatten(r, merged), 0.1, 0.8, 400000);
    CHECK(alpha(r, I, J) == doctest::Approx(numeric).epsilon(1e-4));
}

TEST_CASE("l1 distance basics") {
    const PiecewiseDensity uniform;
    const PiecewiseDensity g({0.0, 0.5, 1.0}, {1.5, 0.5});
    CHECK(l1_distance(uniform, uniform) == 0.0);
    CHECK(l1_distance(uniform, g) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tv_distance(uniform, g) == doctest::Approx(0.25).epsilon(1e-12));

    const PiecewiseDensity left({0.0, 0.5, 1.0}, {2.0, 0.0});
    const PiecewiseDensity right({0.0, 0.5, 1.0}, {0.0, 2.0});
    CHECK(l1_distance(left, right) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("l1 distance is a metric") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const PiecewiseDensity f = random_distribution(1 + rng.next_below(8), rng);
        const PiecewiseDensity g = random_distribution(1 + rng.next_below(8), rng);
        const PiecewiseDensity h = random_distribution(1 + rng.next_below(8), rng);
        CHECK(l1_distance(f, g) == l1_distance(g, f));  // exact symmetry
        CHECK(l1_distance(f, h) <= l1_distance(f, g) + l1_distance(g, h) + 1e-12);
        CHECK(l1_distance(f, f) == 0.0);
    }
}

TEST_CASE("rescaling inequality: ||p-g|| <= 2 ||p-ag||") {
    Rng rng(19);
    for (int trial = 0; trial < 1000; ++trial) {
        const PiecewiseDensity p = random_distribution(1 + rng.next_below(6), rng);
        const PiecewiseDensity g = random_distribution(1 + rng.next_below(6), rng);
        const double a = 0.05 + 4.0 * rng.next_double();
        CHECK(l1_distance(p, g) <= 2.0 * l1_distance(p, g.scaled(a)) + 1e-12);
    }
}

TEST_CASE("sampling determinism and point mass") {
    const PiecewiseDensity uniform;
    Rng r1(42), r2(42);
    const EmpiricalSample a = sample(uniform, 1000, r1);
    const EmpiricalSample b = sample(uniform, 1000, r2);
    CHECK(a.points() == b.points());

    // single-atom discrete distribution -> identical embedded points
    const DiscreteDistribution atom({0.0, 1.0, 0.0, 0.0});
    Rng r3(7);
    const EmpiricalSample s = sample(atom, 5, r3);
    for (double x : s.points()) CHECK(x == midpoint_embedding(1, 4));

    const PiecewiseDensity sub = uniform.scaled(0.5);
    Rng r4(1);
    CHECK_THROWS_AS(sample(sub, 10, r4), contract_error);
}

TEST_CASE("sampling concentration on the uniform target") {
    const PiecewiseDensity uniform;
    Rng rng(123);
    const EmpiricalSample s = sample(uniform, 100000, rng);
    CHECK(s.mass_on(Interval(0.0, 0.5)) == doctest::Approx(0.5).epsilon(0.02));
    for (double x : s.points()) CHECK((x >= 0.0 && x < 1.0));
}

TEST_CASE("discretize examples") {
    const PiecewiseDensity uniform;
    const DiscreteDistribution u4 = discretize(uniform, 4);
    for (double w : u4.weights()) CHECK(w == doctest::Approx(0.25).epsilon(1e-12));

    const PiecewiseDensity left({0.0, 0.5, 1.0}, {2.0, 0.0});
    const DiscreteDistribution l2 = discretize(left, 2);
    CHECK(l2.weight(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2.weight(1) == doctest::Approx(0.0));

    const PiecewiseDensity two({0.0, 0.5, 1.0}, {1.5, 0.5});
    const DiscreteDistribution t4 = discretize(two, 4);
    CHECK(t4.weight(0) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(t4.weight(1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(t4.weight(2) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(t4.weight(3) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("discretize/flatten commute on grid-aligned partitions") {
    Rng rng(29);
    const std::size_t M = 16;
    for (int trial = 0; trial < 50; ++trial) {
        // grid-aligned density and grid-aligned partition
        std::vector<double> w(M);
        double total = 0.0;
        for (double& x : w) {
            x = rng.next_double();
            total += x;
        }
        for (double& x : w) x /= total;
        const PiecewiseDensity f = density_from_discrete(DiscreteDistribution(w));

        std::vector<Interval> parts;
        std::size_t cell = 0;
        while (cell < M) {
            const std::size_t width = 1 + rng.next_below(4);
            const std::size_t end = std::min(M, cell + width);
            parts.emplace_back(static_cast<double>(cell) / M,
                               end == M ? 1.0 : static_cast<double>(end) / M);
            cell = end;
        }
        const PiecewiseDensity flat = flatten(f, parts);
        const DiscreteDistribution lhs = discretize(flat, M);

        // discrete flattening: average the cell masses within each part
        std::vector<double> rhs(M);
        const DiscreteDistribution disc = discretize(f, M);
        for (const Interval& I : parts) {
            const std::size_t a = static_cast<std::size_t>(std::llround(I.lo * M));
            const std::size_t b = static_cast<std::size_t>(std::llround(I.hi * M));
            double mass = 0.0;
            for (std::size_t i = a; i < b; ++i) mass += disc.weight(i);
            for (std::size_t i = a; i < b; ++i) rhs[i] = mass / static_cast<double>(b - a);
        }
        for (std::size_t i = 0; i < M; ++i)
            CHECK(lhs.weight(i) == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
}

TEST_CASE("quantile inverts cdf") {
    Rng rng(31);
    const PiecewiseDensity f = random_distribution(7, rng);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_double();
        const double x = f.quantile(u);
        CHECK(f.cdf(x) == doctest::Approx(u).epsilon(1e-9));
    }
}
