#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/merge_learner.hpp"
#include "histloom/sample_source.hpp"

namespace histloom {

struct CandidateLabel {
    std::size_t guess_index = 0;  ///< i in the guess ladder (0-based)
    std::size_t repetition = 0;   ///< els in the repeated runs (0-based)
    double guess = 0.0;           ///< g_i handed to the learner
};

/// Pool of hypothesis distributions for tournament selection.  Every
/// hypothesis must be a full distribution; piecewise-constant candidates
/// admit exact evaluation, which plays the role of the evaluation oracle.
struct CandidatePool {
    std::vector<PiecewiseDensity> hypotheses;
    std::vector<CandidateLabel> labels;

    std::size_t size() const { return hypotheses.size(); }
};

/// The region {x : p_i(x) > p_j(x)} as a union of maximal intervals, computed
/// exactly on the merged breakpoint refinement.
std::vector<Interval> scheffe_set(const PiecewiseDensity& p_i, const PiecewiseDensity& p_j);

struct ScheffeConfig {
    double c3 = 4.0;  ///< sample constant: s = ceil(c3 * (1/eps^2) * (log2 N + log2(1/delta)))
};

std::uint64_t scheffe_sample_budget(std::size_t n_candidates, double eps, double delta,
                                    const ScheffeConfig& cfg = {});

/// SCHEFFE* tournament: for each ordered pair (i,j), candidate i beats j when
/// its exact mass on the Scheffe set A_ij is at least as close to the
/// empirical mass as j's; the index with the most wins is returned (ties to
/// the lowest index).  If some candidate is tau-close to the target, the
/// winner is 10*max{tau, eps}-close with probability >= 1 - delta.
std::size_t scheffe_select(const CandidatePool& pool, SampleSource& draws, double eps,
                           double delta, const ScheffeConfig& cfg = {});

/// Produces independent sources for the stage-1 runs; stream ids follow the
/// documented split of (guess index, repetition).
using SourceFactory = std::function<std::unique_ptr<SampleSource>(std::uint64_t stream)>;

struct AgnosticConfig {
    std::size_t k = 1;
    double eps = 0.1;
    std::size_t repetitions = 3;  ///< learner runs per ladder rung
    double delta = 1.0 / 40.0;    ///< selection confidence (fixed by the reduction)
    LearnerConfig learner;        ///< constants forwarded to learn_wb (k/eps overridden)
    ScheffeConfig scheffe;
};

struct AgnosticResult {
    PiecewiseDensity hypothesis;
    CandidatePool pool;
    std::size_t winner = 0;
    std::vector<double> guesses;
    std::uint64_t draws_stage1 = 0;
    std::uint64_t draws_stage2 = 0;

    std::uint64_t draws_total() const { return draws_stage1 + draws_stage2; }
};

/// The geometric guess ladder g_i = (eps/10) * 2^(i-1), i = 1..ceil(log2(20/eps)).
std::vector<double> guess_ladder(double eps);

/// Upper bound on the draws agnostic_learn will use for this configuration.
std::uint64_t agnostic_total_budget(const AgnosticConfig& cfg);

/// The guess-ladder reduction: run learn_wb `repetitions` times per ladder
/// rung on fresh samples, then select with the Scheffe tournament at
/// eps/10, delta.  Guarantee: ||p - h||_1 <= 10(alpha+2) opt_k(p) + eps with
/// probability >= 39/40, where alpha is the learner's constant.
AgnosticResult agnostic_learn(const AgnosticConfig& cfg, SampleSource& draws);

/// Variant drawing stage-1 samples from per-run sources produced by the
/// factory (stream = guess_index * repetitions + repetition); stage 2 draws
/// from `selection_draws`.
AgnosticResult agnostic_learn(const AgnosticConfig& cfg, const SourceFactory& factory,
                              SampleSource& selection_draws);

}  // namespace histloom
