#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/rng.hpp"

namespace histloom {

/// One member p_{S1,S2,t} of the hard ensemble D_t over the domain
/// {1,...,2N}: a random tN-subset of the first half is made light (1/(4N))
/// and a random tN-subset of the second half heavy (3/(4N)), with the
/// remaining elements adjusted so each half carries mass exactly 1/2.
/// Weights are derived in exact rational arithmetic and verified to sum to 1
/// at construction.
struct HardInstance {
    std::size_t half_domain = 0;              ///< N
    std::int64_t t_num = 0, t_den = 1;        ///< t as a reduced fraction
    std::vector<std::uint32_t> light_first;   ///< S1, sorted, indices in [0, N)
    std::vector<std::uint32_t> heavy_second;  ///< S2, sorted, indices in [N, 2N)
    double weight_s1 = 0.0;    ///< 1/(4N) on S1
    double weight_off1 = 0.0;  ///< (1/(2N)) (1 + t/(2(1-t))) on [N] \ S1
    double weight_s2 = 0.0;    ///< 3/(4N) on S2
    double weight_off2 = 0.0;  ///< (1/(2N)) (1 - t/(2(1-t))) elsewhere

    std::size_t domain() const { return 2 * half_domain; }
    double t() const { return static_cast<double>(t_num) / static_cast<double>(t_den); }

    /// Materialized probability vector over [2N] (desk scale only).
    DiscreteDistribution to_distribution() const;

    /// The explicit 2-flat witness: level weight_off1 on the first half,
    /// weight_off2 on the second.
    DiscreteDistribution witness_two_flat() const;

    /// || U_2N - p ||_1 by the per-stratum closed form; equals t exactly.
    double l1_to_uniform() const;

    /// || p - q_witness ||_1 closed form; equals (t/2)(1 + t/(1-t)).
    double l1_to_witness() const;

    /// Sum of squared weights (the per-pair collision rate under p).
    double collision_rate() const;

    /// One draw, as a 0-based index in [0, 2N).
    std::uint32_t draw(Rng& rng) const;

    /// One draw embedded at the bin midpoint in [0,1).
    double draw_embedded(Rng& rng) const;
};

/// The witness value (t/2)(1 + t/(1-t)) from the ensemble's opt_2 bound.
double hard_instance_witness_value(double t);

/// Draws S1, S2 uniformly over tN-subsets (seeded partial Fisher-Yates).
/// Requires 0 < t < 1/2 with tN integral.
HardInstance sample_hard_instance(std::size_t N, double t, Rng& rng);

enum class DistinguisherKind {
    collision_threshold,  ///< collision count against the midpoint of the two expectations
    learner_based,        ///< agnostic 2-flat learner + distance-to-uniform threshold
};

struct ExperimentConfig {
    std::size_t N = 1 << 10;
    double t = 0.25;
    std::uint64_t m = 100;       ///< draws per trial
    std::size_t trials = 100;    ///< per regime
    DistinguisherKind rule = DistinguisherKind::collision_threshold;
    std::uint64_t seed = 1;
    std::size_t threads = 0;     ///< 0 = thread_cap()
};

struct TrialStat {
    bool under_ensemble = false;
    double statistic = 0.0;  ///< collision count or ||h - U||_1
    bool said_uniform = false;
};

struct ExperimentResult {
    double accept_uniform = 0.0;   ///< P[rule says "uniform"] under U_2N
    double accept_ensemble = 0.0;  ///< same under p ~ D_t
    double threshold = 0.0;        ///< decision threshold the rule used
    std::vector<TrialStat> per_trial;

    double advantage() const {
        const double d = accept_uniform - accept_ensemble;
        return d < 0 ? -d : d;
    }
};

/// Runs the configured distinguisher on fresh instances/draws under both
/// regimes and reports both acceptance rates.
ExperimentResult distinguishing_experiment(const ExperimentConfig& cfg);

/// Number of equal-value pairs in a draw list (the collision statistic).
std::uint64_t collision_count(std::vector<std::uint32_t> draws);

struct FloorDemoConfig {
    std::size_t N = 1 << 20;
    double delta = 0.5;       ///< the (2 - delta) approximation deficit
    std::uint64_t m = 500000; ///< per-run draw budget for the learner
    std::size_t trials = 10;  ///< per regime
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct FloorDemoReport {
    std::size_t N = 0;
    double delta = 0.0;
    double t = 0.0;            ///< delta/(2+delta)
    double t_effective = 0.0;  ///< rounded so tN is integral
    double eps_proof = 0.0;    ///< delta^3 / (12 (2+delta))
    double analytic_gap = 0.0; ///< t - (2-delta)(t/2)(1+t/(1-t)) - eps = 2 eps
    double eps_run = 0.0;      ///< the eps the learner actually ran at
    std::uint64_t m = 0;
    double sqrt_domain = 0.0;  ///< sqrt(2N), the phase-transition scale
    double rate_uniform = 0.0;
    double rate_ensemble = 0.0;
    double advantage = 0.0;     ///< at the proof threshold 3 eps_proof / 2
    double ks_advantage = 0.0;  ///< best threshold over the observed distances
    std::vector<double> distances_uniform;   ///< ||h - U||_1 per trial
    std::vector<double> distances_ensemble;
};

/// Demonstrates the agnostic lower-bound mechanism: the learner's
/// distance-to-uniform distributions under U and under D_t overlap, so the
/// proof's distinguisher gains ~zero advantage, while the analytic 2*eps gap
/// that a (2-delta)-agnostic learner would create is printed alongside.
FloorDemoReport agnostic_floor_demo(const FloorDemoConfig& cfg);

/// Smallest eps (on a coarse grid) whose full agnostic pipeline fits within
/// the given draw budget; throws if even eps = 0.99 does not fit.
double eps_for_budget(std::uint64_t budget, std::size_t k);

}  // namespace histloom
