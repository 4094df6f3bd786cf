#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/heavy_atoms.hpp"
#include "histloom/sample_source.hpp"

namespace histloom {

enum class TargetKind {
    uniform,
    kflat,
    kflat_plus_noise,
    monotone,
    unimodal,
    atom_mixture,
    lowerbound,
};

/// Parsed synthetic-target description:
///   "uniform"
///   "kflat:cuts=0.5;levels=1.5,0.5"
///   "kflat-plus-noise:cuts=0.5;levels=1.5,0.5;eta=0.05;bumps=4"
///   "monotone:grid=64" | "unimodal:grid=64"
///   "atom-mixture:atoms=0.5:0.3;base=uniform" (base may be kflat with
///       cuts=/levels= keys)
///   "lowerbound:N=1024;t=0.25"
struct TargetSpec {
    TargetKind kind = TargetKind::uniform;
    std::vector<double> cuts;    ///< interior cuts of the k-flat part
    std::vector<double> levels;  ///< densities per piece (before atom scaling)
    double eta = 0.0;            ///< total L1 noise budget
    std::size_t bumps = 4;       ///< sub-pieces per piece for the noise construction
    std::size_t grid = 64;       ///< grid for monotone/unimodal generators
    std::vector<HeavyAtom> atoms;
    TargetKind base = TargetKind::uniform;  ///< continuous base of an atom mixture
    std::size_t N = 1024;                   ///< lowerbound half-domain
    double t = 0.25;
};

TargetSpec parse_target_spec(const std::string& text);
std::string target_kind_name(TargetKind k);

/// Realized target plus the certification metadata the generators can attest
/// to (exact k-flat decomposition, a certified opt_k upper bound for noise
/// constructions, the atom list).
struct Target {
    PiecewiseDensity continuous;  ///< sub-distribution when atoms are present
    std::vector<HeavyAtom> atoms;
    std::optional<DiscreteDistribution> discrete;  ///< lowerbound targets

    std::optional<PiecewiseDensity> exact_kflat;  ///< closest known k-flat
    std::optional<double> certified_opt_bound;    ///< opt_k <= bound (L1), certified
    std::size_t kflat_pieces = 0;

    bool is_discrete() const { return discrete.has_value(); }
    double atom_mass() const;

    /// i.i.d. draw stream for this target.
    std::unique_ptr<SampleSource> make_source(std::uint64_t seed) const;

    /// The target as an atom-plus-histogram measure (for exact distances).
    MixedDensity as_mixed() const;

    /// Exact L1 distance from a hypothesis to this target.
    double l1_to(const PiecewiseDensity& h) const;
    double l1_to(const MixedDensity& h) const;
};

Target generate_target(const TargetSpec& spec, Rng& rng);

}  // namespace histloom
