#include "histloom/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace histloom {

std::vector<Interval> scheffe_set(const PiecewiseDensity& p_i, const PiecewiseDensity& p_j) {
    const auto& bi = p_i.breakpoints();
    const auto& bj = p_j.breakpoints();
    std::vector<Interval> out;
    std::size_t a = 0, b = 0;
    double x = 0.0;
    double open_lo = -1.0;  // < 0 when no interval is open
    while (x < 1.0) {
        const double next = std::min(bi[a + 1], bj[b + 1]);
        const bool in_set = p_i.values()[a] > p_j.values()[b];
        if (in_set && open_lo < 0.0) open_lo = x;
        if (!in_set && open_lo >= 0.0) {
            out.emplace_back(open_lo, x);
            open_lo = -1.0;
        }
        if (next == bi[a + 1] && a + 2 < bi.size()) ++a;
        if (next == bj[b + 1] && b + 2 < bj.size()) ++b;
        x = next;
    }
    if (open_lo >= 0.0) out.emplace_back(open_lo, 1.0);
    return out;
}

std::uint64_t scheffe_sample_budget(std::size_t n_candidates, double eps, double delta,
                                    const ScheffeConfig& cfg) {
    const double log_n = std::max(1.0, std::log2(static_cast<double>(n_candidates)));
    const double log_d = std::max(1.0, std::log2(1.0 / delta));
    return static_cast<std::uint64_t>(
        std::ceil(cfg.c3 * (1.0 / (eps * eps)) * (log_n + log_d)));
}

namespace {

double mass_on_union(const PiecewiseDensity& f, const std::vector<Interval>& parts) {
    double acc = 0.0;
    for (const Interval& I : parts) acc += f.mass_on(I);
    return acc;
}

double mass_on_union(const EmpiricalSample& s, const std::vector<Interval>& parts) {
    std::size_t count = 0;
    for (const Interval& I : parts) count += s.count_in(I);
    return static_cast<double>(count) / static_cast<double>(s.size());
}

}  // namespace

std::size_t scheffe_select(const CandidatePool& pool, SampleSource& draws, double eps,
                           double delta, const ScheffeConfig& cfg) {
    const std::size_t n = pool.size();
    if (n == 0) throw std::invalid_argument("scheffe_select: empty candidate pool");
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("scheffe_select: eps and delta must be in (0,1)");
    for (const PiecewiseDensity& h : pool.hypotheses)
        if (!h.is_full_distribution())
            throw std::invalid_argument("scheffe_select: candidate is not a distribution");
    if (n == 1) return 0;

    const std::uint64_t s = scheffe_sample_budget(n, eps, delta, cfg);
    const EmpiricalSample emp(draws.take(s));

    std::vector<std::size_t> wins(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::vector<Interval> set_ij = scheffe_set(pool.hypotheses[i],
                                                             pool.hypotheses[j]);
            const double pi_a = mass_on_union(pool.hypotheses[i], set_ij);
            const double pj_a = mass_on_union(pool.hypotheses[j], set_ij);
            const double emp_a = mass_on_union(emp, set_ij);
            if (std::fabs(pi_a - emp_a) <= std::fabs(pj_a - emp_a)) ++wins[i];
        }
    }
    std::size_t winner = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (wins[i] > wins[winner]) winner = i;
    return winner;
}

std::vector<double> guess_ladder(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("guess_ladder: eps must be in (0,1)");
    const std::size_t rungs =
        static_cast<std::size_t>(std::ceil(std::log2(20.0 / eps)));
    std::vector<double> g(rungs);
    for (std::size_t i = 0; i < rungs; ++i) g[i] = (eps / 10.0) * std::ldexp(1.0, static_cast<int>(i));
    return g;
}

namespace {

/// learn_wb requires eps in (0,1); top ladder rungs can reach past 1 and are
/// clamped (a guess that large concedes nothing: the selection stage rejects
/// the resulting coarse hypotheses when a finer rung fits better).
double clamp_guess(double g) { return std::min(g, 0.99); }

LearnerConfig rung_config(const AgnosticConfig& cfg, double guess) {
    LearnerConfig lc = cfg.learner;
    lc.k = cfg.k;
    lc.eps = clamp_guess(guess);
    lc.m = 0;
    return lc;
}

AgnosticResult agnostic_core(const AgnosticConfig& cfg, SampleSource* shared,
                             const SourceFactory* factory, SampleSource& selection_draws) {
    if (cfg.k < 1) throw std::invalid_argument("agnostic_learn: need k >= 1");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw std::invalid_argument("agnostic_learn: eps must be in (0,1)");
    if (cfg.repetitions < 1)
        throw std::invalid_argument("agnostic_learn: need at least one repetition");

    AgnosticResult result;
    result.guesses = guess_ladder(cfg.eps);

    for (std::size_t i = 0; i < result.guesses.size(); ++i) {
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            const LearnerConfig lc = rung_config(cfg, result.guesses[i]);
            std::unique_ptr<SampleSource> owned;
            SampleSource* src = shared;
            if (factory != nullptr) {
                owned = (*factory)(static_cast<std::uint64_t>(i) * cfg.repetitions + rep);
                src = owned.get();
            }
            LearnerResult run = learn_wb(lc, *src);
            result.draws_stage1 += run.draws_total();
            result.pool.hypotheses.push_back(std::move(run.hypothesis));
            result.pool.labels.push_back(CandidateLabel{i, rep, result.guesses[i]});
        }
    }

    CountingSource counted(selection_draws);
    result.winner =
        scheffe_select(result.pool, counted, cfg.eps / 10.0, cfg.delta, cfg.scheffe);
    result.draws_stage2 = counted.count();
    result.hypothesis = result.pool.hypotheses[result.winner];
    return result;
}

}  // namespace

std::uint64_t agnostic_total_budget(const AgnosticConfig& cfg) {
    const std::vector<double> guesses = guess_ladder(cfg.eps);
    std::uint64_t total = 0;
    for (double g : guesses) {
        const LearnerConfig lc = rung_config(cfg, g);
        total += cfg.repetitions * learner_total_budget(lc);
    }
    total += scheffe_sample_budget(guesses.size() * cfg.repetitions, cfg.eps / 10.0, cfg.delta,
                                   cfg.scheffe);
    return total;
}

AgnosticResult agnostic_learn(const AgnosticConfig& cfg, SampleSource& draws) {
    return agnostic_core(cfg, &draws, nullptr, draws);
}

AgnosticResult agnostic_learn(const AgnosticConfig& cfg, const SourceFactory& factory,
                              SampleSource& selection_draws) {
    return agnostic_core(cfg, nullptr, &factory, selection_draws);
}

}  // namespace histloom
