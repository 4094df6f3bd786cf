#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/sample_source.hpp"
#include "histloom/selection.hpp"

namespace histloom {

struct HeavyAtom {
    double location = 0.0;
    double mass = 0.0;  ///< estimated probability mass
};

/// Atoms detected above the well-behavedness threshold kappa*.
struct HeavySet {
    std::vector<HeavyAtom> atoms;
    double threshold = 0.0;  ///< the kappa* the detection ran at

    double total_mass() const;
    std::vector<double> locations() const;
};

struct HeavyConfig {
    double c4 = 12.0;  ///< detection sample constant
};

std::uint64_t heavy_detection_budget(double kappa_star, const HeavyConfig& cfg = {});

/// Multiplicity-threshold detector: draws n = ceil(c4 (1/k*) log2(1/k*))
/// points and reports every bit-exact value appearing at least (k*/2) n
/// times, with estimated mass = multiplicity / n.  With probability >= 99/100
/// every atom of mass >= k* is reported and nothing of mass <= k*/4 is.
HeavySet detect_heavy(SampleSource& draws, double kappa_star, const HeavyConfig& cfg = {});

/// Histogram plus explicit point masses; the full-pipeline output type.
struct MixedDensity {
    PiecewiseDensity histogram;  ///< sub-distribution of mass 1 - sum(atoms)
    std::vector<HeavyAtom> atoms;

    double total_mass() const;
    double atom_mass_at(double location) const;
};

struct LearnWithAtomsConfig {
    std::size_t k = 1;
    double eps = 0.1;
    AgnosticConfig agnostic;  ///< k/eps overridden from the fields above
    HeavyConfig heavy;
    double min_acceptance_rate = 1e-3;
};

struct LearnWithAtomsResult {
    MixedDensity output;
    HeavySet detected;
    std::uint64_t draws_detection = 0;
    std::uint64_t draws_learner = 0;  ///< draws from p, including rejected ones
    double acceptance_rate = 1.0;

    std::uint64_t draws_total() const { return draws_detection + draws_learner; }
};

/// Full pipeline: detect heavy atoms at kappa* = (eps/log2(1/eps))/(384 k),
/// run the agnostic learner on the conditional distribution over the
/// remaining domain (rejection filtering), and reattach the atoms:
/// output = (1 - p_hat(S)) * histogram + atoms.
LearnWithAtomsResult learn_with_atoms(const LearnWithAtomsConfig& cfg, SampleSource& draws);

/// L1 distance between two atom-plus-histogram measures: continuous parts
/// integrate exactly; atom parts match by location.
double l1_distance(const MixedDensity& a, const MixedDensity& b);

}  // namespace histloom
