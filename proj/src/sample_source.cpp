#include "histloom/sample_source.hpp"

#include <algorithm>

namespace histloom {

DensitySource::DensitySource(PiecewiseDensity f, std::uint64_t seed)
    : density_(std::move(f)), rng_(seed) {
    if (!density_.is_full_distribution())
        throw contract_error("DensitySource: target must be a full distribution");
}

void DensitySource::next_batch(double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = density_.quantile(rng_.next_double());
}

MixedSource::MixedSource(PiecewiseDensity continuous, std::vector<Atom> atoms, std::uint64_t seed)
    : continuous_(std::move(continuous)), atoms_(std::move(atoms)), rng_(seed) {
    atom_cumulative_.resize(atoms_.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (atoms_[i].mass < 0.0) throw contract_error("MixedSource: negative atom mass");
        atom_cumulative_[i + 1] = atom_cumulative_[i] + atoms_[i].mass;
    }
    atom_total_ = atom_cumulative_.back();
    const double total = atom_total_ + continuous_.total_mass();
    if (std::abs(total - 1.0) > 1e-9)
        throw contract_error("MixedSource: atom and continuous masses must sum to 1");
}

double MixedSource::next() {
    const double u = rng_.next_double();
    if (u < atom_total_) {
        const auto it =
            std::upper_bound(atom_cumulative_.begin(), atom_cumulative_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - atom_cumulative_.begin());
        i = i > 0 ? i - 1 : 0;
        if (i >= atoms_.size()) i = atoms_.size() - 1;
        return atoms_[i].location;
    }
    const double cont_mass = continuous_.total_mass();
    const double v = (u - atom_total_) / cont_mass;  // uniform in [0,1)
    return continuous_.quantile(v);
}

DiscreteSource::DiscreteSource(DiscreteDistribution d, std::uint64_t seed)
    : dist_(std::move(d)), rng_(seed) {
    cumulative_.resize(dist_.domain_size() + 1, 0.0);
    for (std::size_t i = 0; i < dist_.domain_size(); ++i)
        cumulative_[i + 1] = cumulative_[i] + dist_.weight(i);
}

double DiscreteSource::next() {
    const double u = rng_.next_double() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
    i = i > 0 ? i - 1 : 0;
    if (i >= dist_.domain_size()) i = dist_.domain_size() - 1;
    return midpoint_embedding(i, dist_.domain_size());
}

RejectionSource::RejectionSource(SampleSource& inner, std::vector<double> excluded,
                                 double min_acceptance_rate)
    : inner_(&inner), excluded_(std::move(excluded)), min_rate_(min_acceptance_rate) {
    std::sort(excluded_.begin(), excluded_.end());
}

double RejectionSource::next() {
    for (;;) {
        const double x = inner_->next();
        ++attempted_;
        if (!std::binary_search(excluded_.begin(), excluded_.end(), x)) {
            ++accepted_;
            return x;
        }
        if (attempted_ >= 10000 && acceptance_rate() < min_rate_)
            throw sample_exhausted(
                "rejection filtering: acceptance rate below threshold; nearly all target "
                "mass is atomic and cannot be modeled by the histogram part");
    }
}

}  // namespace histloom
