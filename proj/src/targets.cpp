#include "histloom/targets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "histloom/lowerbound.hpp"

namespace histloom {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const std::string& tok : split(s, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument("target spec: bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

TargetKind kind_from_name(const std::string& name) {
    if (name == "uniform") return TargetKind::uniform;
    if (name == "kflat") return TargetKind::kflat;
    if (name == "kflat-plus-noise") return TargetKind::kflat_plus_noise;
    if (name == "monotone") return TargetKind::monotone;
    if (name == "unimodal") return TargetKind::unimodal;
    if (name == "atom-mixture") return TargetKind::atom_mixture;
    if (name == "lowerbound") return TargetKind::lowerbound;
    throw std::invalid_argument("target spec: unknown kind '" + name + "'");
}

}  // namespace

std::string target_kind_name(TargetKind k) {
    switch (k) {
        case TargetKind::uniform: return "uniform";
        case TargetKind::kflat: return "kflat";
        case TargetKind::kflat_plus_noise: return "kflat-plus-noise";
        case TargetKind::monotone: return "monotone";
        case TargetKind::unimodal: return "unimodal";
        case TargetKind::atom_mixture: return "atom-mixture";
        case TargetKind::lowerbound: return "lowerbound";
    }
    return "?";
}

TargetSpec parse_target_spec(const std::string& text) {
    TargetSpec spec;
    const std::size_t colon = text.find(':');
    spec.kind = kind_from_name(text.substr(0, colon));
    if (colon == std::string::npos) return spec;

    for (const std::string& kv : split(text.substr(colon + 1), ';')) {
        if (kv.empty()) continue;
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("target spec: expected key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "cuts")
            spec.cuts = parse_doubles(val);
        else if (key == "levels")
            spec.levels = parse_doubles(val);
        else if (key == "eta")
            spec.eta = std::stod(val);
        else if (key == "bumps")
            spec.bumps = static_cast<std::size_t>(std::stoul(val));
        else if (key == "grid")
            spec.grid = static_cast<std::size_t>(std::stoul(val));
        else if (key == "N")
            spec.N = static_cast<std::size_t>(std::stoul(val));
        else if (key == "t")
            spec.t = std::stod(val);
        else if (key == "base")
            spec.base = kind_from_name(val);
        else if (key == "atoms") {
            for (const std::string& pair : split(val, ',')) {
                const std::size_t at = pair.find(':');
                if (at == std::string::npos)
                    throw std::invalid_argument("target spec: atoms expect loc:mass pairs");
                spec.atoms.push_back(
                    HeavyAtom{std::stod(pair.substr(0, at)), std::stod(pair.substr(at + 1))});
            }
        } else {
            throw std::invalid_argument("target spec: unknown key '" + key + "'");
        }
    }
    return spec;
}

namespace {

PiecewiseDensity build_kflat(const std::vector<double>& interior_cuts,
                             const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("kflat target: missing levels");
    if (interior_cuts.size() + 1 != levels.size())
        throw std::invalid_argument("kflat target: need one more level than interior cuts");
    std::vector<double> bp{0.0};
    for (double c : interior_cuts) {
        if (!(c > bp.back() && c < 1.0))
            throw std::invalid_argument("kflat target: cuts must be increasing inside (0,1)");
        bp.push_back(c);
    }
    bp.push_back(1.0);
    PiecewiseDensity d(bp, levels);
    if (!d.is_full_distribution())
        throw std::invalid_argument("kflat target: levels do not integrate to 1");
    return d;
}

/// Splits each piece into `bumps` equal sub-pieces with alternating +-d
/// offsets (mass preserving per piece); the base k-flat certifies
/// opt_k <= eta since the total added L1 is exactly eta.
PiecewiseDensity add_noise(const PiecewiseDensity& base, double eta, std::size_t bumps,
                           Rng& rng) {
    if (eta <= 0.0) return base;
    if (bumps < 2) bumps = 2;
    if (bumps % 2 == 1) ++bumps;  // need an even count to preserve piece mass
    const double d = eta;         // sum over pieces of d * width = d
    for (double v : base.values())
        if (v < d)
            throw std::invalid_argument("kflat-plus-noise: eta exceeds the smallest level");
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    for (std::size_t p = 0; p < base.piece_count(); ++p) {
        const double lo = base.breakpoints()[p];
        const double hi = base.breakpoints()[p + 1];
        const double level = base.values()[p];
        const bool flip = rng.next_u64() & 1;  // randomize bump phase per piece
        for (std::size_t b = 0; b < bumps; ++b) {
            const double x = lo + (hi - lo) * static_cast<double>(b + 1) /
                                      static_cast<double>(bumps);
            const bool up = (b % 2 == 0) != flip;
            vals.push_back(level + (up ? d : -d));
            bp.push_back(b + 1 == bumps ? hi : x);
        }
    }
    return PiecewiseDensity(std::move(bp), std::move(vals));
}

PiecewiseDensity random_monotone(std::size_t grid, Rng& rng, bool unimodal) {
    if (grid < 2) throw std::invalid_argument("shape target: need grid >= 2");
    std::vector<double> levels(grid);
    for (double& v : levels) v = -std::log(1.0 - rng.next_double());  // Exp(1)
    if (unimodal) {
        const std::size_t mode = 1 + rng.next_below(grid - 1);
        std::sort(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(mode));
        std::sort(levels.begin() + static_cast<std::ptrdiff_t>(mode), levels.end(),
                  std::greater<double>());
    } else {
        std::sort(levels.begin(), levels.end(), std::greater<double>());
    }
    double mass = 0.0;
    for (double v : levels) mass += v / static_cast<double>(grid);
    std::vector<double> bp(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i)
        bp[i] = i == grid ? 1.0 : static_cast<double>(i) / static_cast<double>(grid);
    for (double& v : levels) v /= mass;
    return PiecewiseDensity(std::move(bp), std::move(levels));
}

}  // namespace

double Target::atom_mass() const {
    double acc = 0.0;
    for (const HeavyAtom& a : atoms) acc += a.mass;
    return acc;
}

std::unique_ptr<SampleSource> Target::make_source(std::uint64_t seed) const {
    if (discrete.has_value()) return std::make_unique<DiscreteSource>(*discrete, seed);
    if (atoms.empty()) return std::make_unique<DensitySource>(continuous, seed);
    std::vector<MixedSource::Atom> ma;
    ma.reserve(atoms.size());
    for (const HeavyAtom& a : atoms) ma.push_back(MixedSource::Atom{a.location, a.mass});
    return std::make_unique<MixedSource>(continuous, std::move(ma), seed);
}

MixedDensity Target::as_mixed() const {
    if (discrete.has_value())
        return MixedDensity{density_from_discrete(*discrete), {}};
    return MixedDensity{continuous, atoms};
}

double Target::l1_to(const PiecewiseDensity& h) const {
    return l1_distance(as_mixed(), MixedDensity{h, {}});
}

double Target::l1_to(const MixedDensity& h) const { return l1_distance(as_mixed(), h); }

Target generate_target(const TargetSpec& spec, Rng& rng) {
    Target out;
    switch (spec.kind) {
        case TargetKind::uniform: {
            out.continuous = PiecewiseDensity();
            out.exact_kflat = out.continuous;
            out.certified_opt_bound = 0.0;
            out.kflat_pieces = 1;
            break;
        }
        case TargetKind::kflat: {
            out.continuous = build_kflat(spec.cuts, spec.levels);
            out.exact_kflat = out.continuous;
            out.certified_opt_bound = 0.0;
            out.kflat_pieces = out.continuous.piece_count();
            break;
        }
        case TargetKind::kflat_plus_noise: {
            const PiecewiseDensity base = build_kflat(spec.cuts, spec.levels);
            out.continuous = add_noise(base, spec.eta, spec.bumps, rng);
            out.exact_kflat = base;
            out.certified_opt_bound = spec.eta;  // ||p - base||_1 = eta by construction
            out.kflat_pieces = base.piece_count();
            break;
        }
        case TargetKind::monotone:
        case TargetKind::unimodal: {
            out.continuous =
                random_monotone(spec.grid, rng, spec.kind == TargetKind::unimodal);
            break;
        }
        case TargetKind::atom_mixture: {
            double atom_total = 0.0;
            std::map<double, bool> seen;
            for (const HeavyAtom& a : spec.atoms) {
                if (!(a.location >= 0.0 && a.location < 1.0) || a.mass <= 0.0)
                    throw std::invalid_argument("atom-mixture: atoms need loc in [0,1), mass > 0");
                if (seen[a.location])
                    throw std::invalid_argument("atom-mixture: duplicate atom location");
                seen[a.location] = true;
                atom_total += a.mass;
            }
            if (atom_total >= 1.0)
                throw std::invalid_argument("atom-mixture: atom masses must sum below 1");
            PiecewiseDensity base = spec.base == TargetKind::kflat
                                        ? build_kflat(spec.cuts, spec.levels)
                                        : PiecewiseDensity();
            out.continuous = base.scaled(1.0 - atom_total);
            out.atoms = spec.atoms;
            out.exact_kflat = base;
            out.kflat_pieces = base.piece_count();
            break;
        }
        case TargetKind::lowerbound: {
            const HardInstance inst = sample_hard_instance(spec.N, spec.t, rng);
            out.discrete = inst.to_distribution();
            out.certified_opt_bound = hard_instance_witness_value(inst.t());
            out.kflat_pieces = 2;
            break;
        }
    }
    return out;
}

}  // namespace histloom
