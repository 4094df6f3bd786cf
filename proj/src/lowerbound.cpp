#include "histloom/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "histloom/parallel.hpp"
#include "histloom/sample_source.hpp"
#include "histloom/selection.hpp"

namespace histloom {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    while (b != 0) {
        const std::int64_t r = a % b;
        a = b;
        b = r;
    }
    return a;
}

std::vector<std::uint32_t> random_subset(std::uint32_t base, std::uint32_t n, std::uint32_t k,
                                         Rng& rng) {
    // partial Fisher-Yates: shuffle the first k positions
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), base);
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint32_t j =
            i + static_cast<std::uint32_t>(rng.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

HardInstance sample_hard_instance(std::size_t N, double t, Rng& rng) {
    if (!(t > 0.0 && t < 0.5))
        throw std::invalid_argument("sample_hard_instance: need 0 < t < 1/2");
    const double tn = t * static_cast<double>(N);
    const std::int64_t k1 = static_cast<std::int64_t>(std::llround(tn));
    if (std::fabs(tn - static_cast<double>(k1)) > 1e-9 || k1 < 1)
        throw std::invalid_argument("sample_hard_instance: tN must be a positive integer");

    HardInstance inst;
    inst.half_domain = N;
    const std::int64_t g = gcd64(k1, static_cast<std::int64_t>(N));
    inst.t_num = k1 / g;
    inst.t_den = static_cast<std::int64_t>(N) / g;

    // Exact rational weights over the common denominator 4N(b-a), t = a/b:
    //   S1: (b-a),  [N]\S1: (2b-a),  S2: 3(b-a),  off-S2: (2b-3a).
    const std::int64_t a = inst.t_num;
    const std::int64_t b = inst.t_den;
    const std::int64_t denom = 4 * static_cast<std::int64_t>(N) * (b - a);
    const std::int64_t num_s1 = b - a;
    const std::int64_t num_off1 = 2 * b - a;
    const std::int64_t num_s2 = 3 * (b - a);
    const std::int64_t num_off2 = 2 * b - 3 * a;
    // total mass = [k1 (b-a) + (N-k1)(2b-a) + 3 k1 (b-a) + (N-k1)(2b-3a)] / denom = 1
    const __int128 total =
        static_cast<__int128>(k1) * (num_s1 + num_s2) +
        static_cast<__int128>(static_cast<std::int64_t>(N) - k1) * (num_off1 + num_off2);
    if (total != static_cast<__int128>(denom))
        throw std::logic_error("sample_hard_instance: rational mass check failed");

    inst.weight_s1 = static_cast<double>(num_s1) / static_cast<double>(denom);
    inst.weight_off1 = static_cast<double>(num_off1) / static_cast<double>(denom);
    inst.weight_s2 = static_cast<double>(num_s2) / static_cast<double>(denom);
    inst.weight_off2 = static_cast<double>(num_off2) / static_cast<double>(denom);

    const auto n32 = static_cast<std::uint32_t>(N);
    const auto k32 = static_cast<std::uint32_t>(k1);
    inst.light_first = random_subset(0, n32, k32, rng);
    inst.heavy_second = random_subset(n32, n32, k32, rng);
    return inst;
}

DiscreteDistribution HardInstance::to_distribution() const {
    const std::size_t N = half_domain;
    std::vector<double> w(2 * N);
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(N), weight_off1);
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(N), w.end(), weight_off2);
    for (std::uint32_t i : light_first) w[i] = weight_s1;
    for (std::uint32_t i : heavy_second) w[i] = weight_s2;
    return DiscreteDistribution(std::move(w));
}

DiscreteDistribution HardInstance::witness_two_flat() const {
    const std::size_t N = half_domain;
    std::vector<double> w(2 * N);
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(N), weight_off1);
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(N), w.end(), weight_off2);
    return DiscreteDistribution(std::move(w));
}

double HardInstance::l1_to_uniform() const {
    const double N = static_cast<double>(half_domain);
    const double k1 = static_cast<double>(half_domain) * t();
    const double u = 1.0 / (2.0 * N);
    return k1 * std::fabs(u - weight_s1) + (N - k1) * std::fabs(u - weight_off1) +
           k1 * std::fabs(u - weight_s2) + (N - k1) * std::fabs(u - weight_off2);
}

double HardInstance::l1_to_witness() const {
    const double k1 = static_cast<double>(half_domain) * t();
    return k1 * std::fabs(weight_s1 - weight_off1) + k1 * std::fabs(weight_s2 - weight_off2);
}

double HardInstance::collision_rate() const {
    const double N = static_cast<double>(half_domain);
    const double k1 = N * t();
    return k1 * weight_s1 * weight_s1 + (N - k1) * weight_off1 * weight_off1 +
           k1 * weight_s2 * weight_s2 + (N - k1) * weight_off2 * weight_off2;
}

double hard_instance_witness_value(double t) { return (t / 2.0) * (1.0 + t / (1.0 - t)); }

std::uint32_t HardInstance::draw(Rng& rng) const {
    const double tt = t();
    const double c1 = tt / 4.0;              // S1 stratum mass
    const double c2 = 0.5;                   // + off-S1 (each half holds 1/2)
    const double c3 = 0.5 + 3.0 * tt / 4.0;  // + S2
    const double u = rng.next_double();
    const auto n32 = static_cast<std::uint32_t>(half_domain);
    if (u < c1) return light_first[rng.next_below(light_first.size())];
    if (u < c2) {
        for (;;) {
            const auto r = static_cast<std::uint32_t>(rng.next_below(n32));
            if (!std::binary_search(light_first.begin(), light_first.end(), r)) return r;
        }
    }
    if (u < c3) return heavy_second[rng.next_below(heavy_second.size())];
    for (;;) {
        const auto r = n32 + static_cast<std::uint32_t>(rng.next_below(n32));
        if (!std::binary_search(heavy_second.begin(), heavy_second.end(), r)) return r;
    }
}

double HardInstance::draw_embedded(Rng& rng) const {
    return midpoint_embedding(draw(rng), domain());
}

std::uint64_t collision_count(std::vector<std::uint32_t> draws) {
    std::sort(draws.begin(), draws.end());
    std::uint64_t pairs = 0;
    std::size_t i = 0;
    while (i < draws.size()) {
        std::size_t j = i;
        while (j < draws.size() && draws[j] == draws[i]) ++j;
        const std::uint64_t c = j - i;
        pairs += c * (c - 1) / 2;
        i = j;
    }
    return pairs;
}

namespace {

struct UniformDiscreteSource final : SampleSource {
    std::size_t domain;
    Rng rng;
    UniformDiscreteSource(std::size_t m, std::uint64_t seed) : domain(m), rng(seed) {}
    double next() override { return midpoint_embedding(rng.next_below(domain), domain); }
};

struct InstanceSource final : SampleSource {
    HardInstance inst;
    Rng rng;
    InstanceSource(HardInstance i, std::uint64_t s) : inst(std::move(i)), rng(s) {}
    double next() override { return inst.draw_embedded(rng); }
};

double learner_distance_to_uniform(std::size_t k, double eps_run, SampleSource& src) {
    AgnosticConfig acfg;
    acfg.k = k;
    acfg.eps = eps_run;
    const AgnosticResult res = agnostic_learn(acfg, src);
    return l1_distance(res.hypothesis, PiecewiseDensity());
}

}  // namespace

double eps_for_budget(std::uint64_t budget, std::size_t k) {
    for (double eps = 0.02; eps < 0.995; eps += 0.01) {
        AgnosticConfig acfg;
        acfg.k = k;
        acfg.eps = eps;
        if (agnostic_total_budget(acfg) <= budget) return eps;
    }
    throw std::invalid_argument("eps_for_budget: draw budget too small for the learner");
}

ExperimentResult distinguishing_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1 || cfg.m < 1)
        throw std::invalid_argument("distinguishing_experiment: need m, trials >= 1");

    ExperimentResult result;
    result.per_trial.assign(2 * cfg.trials, TrialStat{});

    const double rate_u = 1.0 / (2.0 * static_cast<double>(cfg.N));
    double rate_p = rate_u;
    double eps_proof = 0.0, eps_run = 0.0;
    if (cfg.rule == DistinguisherKind::collision_threshold) {
        Rng probe(split_seed(cfg.seed, 0xC0111D));
        rate_p = sample_hard_instance(cfg.N, cfg.t, probe).collision_rate();
        const double pairs =
            0.5 * static_cast<double>(cfg.m) * static_cast<double>(cfg.m - 1);
        result.threshold = pairs * 0.5 * (rate_u + rate_p);
    } else {
        const double delta = 2.0 * cfg.t / (1.0 - cfg.t);
        eps_proof = delta * delta * delta / (12.0 * (2.0 + delta));
        eps_run = eps_for_budget(cfg.m, 2);
        result.threshold = 1.5 * eps_proof;
    }

    auto run_trial = [&](std::size_t idx) {
        const bool ensemble = idx >= cfg.trials;
        Rng rng(split_seed(cfg.seed, idx + 1));
        TrialStat stat;
        stat.under_ensemble = ensemble;
        if (cfg.rule == DistinguisherKind::collision_threshold) {
            std::vector<std::uint32_t> draws(cfg.m);
            if (ensemble) {
                const HardInstance inst = sample_hard_instance(cfg.N, cfg.t, rng);
                for (auto& d : draws) d = inst.draw(rng);
            } else {
                for (auto& d : draws)
                    d = static_cast<std::uint32_t>(rng.next_below(2 * cfg.N));
            }
            stat.statistic = static_cast<double>(collision_count(std::move(draws)));
            stat.said_uniform = stat.statistic <= result.threshold;
        } else {
            std::unique_ptr<SampleSource> src;
            if (ensemble) {
                HardInstance inst = sample_hard_instance(cfg.N, cfg.t, rng);
                src = std::make_unique<InstanceSource>(std::move(inst), rng.next_u64());
            } else {
                src = std::make_unique<UniformDiscreteSource>(2 * cfg.N, rng.next_u64());
            }
            CappedSource capped(*src, cfg.m);
            stat.statistic = learner_distance_to_uniform(2, eps_run, capped);
            stat.said_uniform = stat.statistic < result.threshold;
        }
        result.per_trial[idx] = stat;
    };

    parallel_for(2 * cfg.trials, cfg.threads, run_trial);

    std::size_t uni_yes = 0, ens_yes = 0;
    for (const TrialStat& s : result.per_trial) {
        if (s.under_ensemble)
            ens_yes += s.said_uniform ? 1 : 0;
        else
            uni_yes += s.said_uniform ? 1 : 0;
    }
    result.accept_uniform = static_cast<double>(uni_yes) / static_cast<double>(cfg.trials);
    result.accept_ensemble = static_cast<double>(ens_yes) / static_cast<double>(cfg.trials);
    return result;
}

FloorDemoReport agnostic_floor_demo(const FloorDemoConfig& cfg) {
    FloorDemoReport report;
    report.N = cfg.N;
    report.delta = cfg.delta;
    report.t = cfg.delta / (2.0 + cfg.delta);
    report.eps_proof =
        cfg.delta * cfg.delta * cfg.delta / (12.0 * (2.0 + cfg.delta));
    const double witness = hard_instance_witness_value(report.t);
    report.analytic_gap = report.t - (2.0 - cfg.delta) * witness - report.eps_proof;
    report.m = cfg.m;
    report.sqrt_domain = std::sqrt(2.0 * static_cast<double>(cfg.N));

    const auto k1 = static_cast<std::int64_t>(
        std::llround(report.t * static_cast<double>(cfg.N)));
    if (k1 < 1)
        throw std::invalid_argument("agnostic_floor_demo: tN < 1, instance is degenerate");
    report.t_effective = static_cast<double>(k1) / static_cast<double>(cfg.N);

    report.eps_run = eps_for_budget(cfg.m, 2);

    report.distances_uniform.assign(cfg.trials, 0.0);
    report.distances_ensemble.assign(cfg.trials, 0.0);

    parallel_for(2 * cfg.trials, cfg.threads, [&](std::size_t idx) {
        const bool ensemble = idx >= cfg.trials;
        Rng rng(split_seed(cfg.seed, idx + 1));
        std::unique_ptr<SampleSource> src;
        if (ensemble) {
            HardInstance inst = sample_hard_instance(cfg.N, report.t_effective, rng);
            src = std::make_unique<InstanceSource>(std::move(inst), rng.next_u64());
        } else {
            src = std::make_unique<UniformDiscreteSource>(2 * cfg.N, rng.next_u64());
        }
        CappedSource capped(*src, cfg.m);
        const double d = learner_distance_to_uniform(2, report.eps_run, capped);
        if (ensemble)
            report.distances_ensemble[idx - cfg.trials] = d;
        else
            report.distances_uniform[idx] = d;
    });

    const double threshold = 1.5 * report.eps_proof;
    auto accept_rate = [threshold](const std::vector<double>& v) {
        std::size_t yes = 0;
        for (double d : v) yes += d < threshold ? 1 : 0;
        return static_cast<double>(yes) / static_cast<double>(v.size());
    };
    report.rate_uniform = accept_rate(report.distances_uniform);
    report.rate_ensemble = accept_rate(report.distances_ensemble);
    report.advantage = std::fabs(report.rate_uniform - report.rate_ensemble);

    // best-threshold advantage = KS distance between the two distance samples
    std::vector<double> all;
    all.reserve(2 * cfg.trials);
    all.insert(all.end(), report.distances_uniform.begin(), report.distances_uniform.end());
    all.insert(all.end(), report.distances_ensemble.begin(), report.distances_ensemble.end());
    std::sort(all.begin(), all.end());
    double ks = 0.0;
    std::vector<double> su = report.distances_uniform;
    std::vector<double> se = report.distances_ensemble;
    std::sort(su.begin(), su.end());
    std::sort(se.begin(), se.end());
    for (double x : all) {
        const double fu = static_cast<double>(
                              std::upper_bound(su.begin(), su.end(), x) - su.begin()) /
                          static_cast<double>(su.size());
        const double fe = static_cast<double>(
                              std::upper_bound(se.begin(), se.end(), x) - se.begin()) /
                          static_cast<double>(se.size());
        ks = std::max(ks, std::fabs(fu - fe));
    }
    report.ks_advantage = ks;
    return report;
}

}  // namespace histloom
