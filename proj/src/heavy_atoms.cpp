#include "histloom/heavy_atoms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "histloom/merge_learner.hpp"

namespace histloom {

double HeavySet::total_mass() const {
    double acc = 0.0;
    for (const HeavyAtom& a : atoms) acc += a.mass;
    return acc;
}

std::vector<double> HeavySet::locations() const {
    std::vector<double> out;
    out.reserve(atoms.size());
    for (const HeavyAtom& a : atoms) out.push_back(a.location);
    return out;
}

std::uint64_t heavy_detection_budget(double kappa_star, const HeavyConfig& cfg) {
    const double log_term = std::max(1.0, std::log2(1.0 / kappa_star));
    return static_cast<std::uint64_t>(std::ceil(cfg.c4 * (1.0 / kappa_star) * log_term));
}

HeavySet detect_heavy(SampleSource& draws, double kappa_star, const HeavyConfig& cfg) {
    if (!(kappa_star > 0.0 && kappa_star < 1.0))
        throw std::invalid_argument("detect_heavy: kappa* must be in (0,1)");

    const std::uint64_t n = heavy_detection_budget(kappa_star, cfg);
    std::vector<double> pts = draws.take(n);
    std::sort(pts.begin(), pts.end());

    const double report_count = kappa_star / 2.0 * static_cast<double>(n);
    HeavySet out;
    out.threshold = kappa_star;
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j < pts.size() && pts[j] == pts[i]) ++j;  // bit-exact runs
        const std::size_t mult = j - i;
        if (static_cast<double>(mult) >= report_count)
            out.atoms.push_back(
                HeavyAtom{pts[i], static_cast<double>(mult) / static_cast<double>(n)});
        i = j;
    }
    return out;
}

double MixedDensity::total_mass() const {
    double acc = histogram.total_mass();
    for (const HeavyAtom& a : atoms) acc += a.mass;
    return acc;
}

double MixedDensity::atom_mass_at(double location) const {
    for (const HeavyAtom& a : atoms)
        if (a.location == location) return a.mass;
    return 0.0;
}

LearnWithAtomsResult learn_with_atoms(const LearnWithAtomsConfig& cfg, SampleSource& draws) {
    if (cfg.k < 1) throw std::invalid_argument("learn_with_atoms: need k >= 1");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw std::invalid_argument("learn_with_atoms: eps must be in (0,1)");

    LearnWithAtomsResult result;
    const double kappa_star =
        eps_prime_for(cfg.eps) / (384.0 * static_cast<double>(cfg.k));

    CountingSource counted(draws);
    result.detected = detect_heavy(counted, kappa_star, cfg.heavy);
    result.draws_detection = counted.count();

    const double heavy_mass = result.detected.total_mass();

    RejectionSource conditional(counted, result.detected.locations(),
                                cfg.min_acceptance_rate);
    AgnosticConfig acfg = cfg.agnostic;
    acfg.k = cfg.k;
    acfg.eps = cfg.eps;
    const AgnosticResult learned = agnostic_learn(acfg, conditional);
    result.draws_learner = counted.count() - result.draws_detection;
    result.acceptance_rate = conditional.acceptance_rate();

    result.output.histogram = learned.hypothesis.scaled(1.0 - heavy_mass);
    result.output.atoms = result.detected.atoms;
    return result;
}

double l1_distance(const MixedDensity& a, const MixedDensity& b) {
    double acc = l1_distance(a.histogram, b.histogram);
    std::map<double, double> diff;
    for (const HeavyAtom& atom : a.atoms) diff[atom.location] += atom.mass;
    for (const HeavyAtom& atom : b.atoms) diff[atom.location] -= atom.mass;
    for (const auto& [loc, d] : diff) acc += std::fabs(d);
    return acc;
}

}  // namespace histloom
