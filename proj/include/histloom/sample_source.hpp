#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "histloom/density.hpp"
#include "histloom/errors.hpp"
#include "histloom/rng.hpp"

namespace histloom {

/// Stream of i.i.d. draws from some target distribution on [0,1).
/// Learners consume draws through this interface only; randomness lives in
/// the source, so a learner run is a deterministic function of its source.
class SampleSource {
public:
    virtual ~SampleSource() = default;

    /// Next draw; throws sample_exhausted for finite sources that ran dry.
    virtual double next() = 0;

    /// Bulk draw; overridden by hot sources to avoid per-draw virtual calls.
    virtual void next_batch(double* out, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) out[i] = next();
    }

    std::vector<double> take(std::size_t n) {
        std::vector<double> v(n);
        next_batch(v.data(), n);
        return v;
    }
};

/// Draws from a piecewise-constant distribution by inverse CDF.
class DensitySource final : public SampleSource {
public:
    DensitySource(PiecewiseDensity f, std::uint64_t seed);

    double next() override { return density_.quantile(rng_.next_double()); }
    void next_batch(double* out, std::size_t n) override;

    const PiecewiseDensity& density() const { return density_; }

private:
    PiecewiseDensity density_;
    Rng rng_;
};

/// Mixture of explicit point masses and a continuous sub-density whose masses
/// sum to 1.  Atom draws return the stored location bit-exactly.
class MixedSource final : public SampleSource {
public:
    struct Atom {
        double location;
        double mass;
    };

    MixedSource(PiecewiseDensity continuous, std::vector<Atom> atoms, std::uint64_t seed);

    double next() override;

private:
    PiecewiseDensity continuous_;
    std::vector<Atom> atoms_;
    std::vector<double> atom_cumulative_;
    double atom_total_;
    Rng rng_;
};

/// Draws from a discrete distribution over {1,...,M} embedded at bin
/// midpoints.
class DiscreteSource final : public SampleSource {
public:
    DiscreteSource(DiscreteDistribution d, std::uint64_t seed);

    double next() override;

private:
    DiscreteDistribution dist_;
    std::vector<double> cumulative_;
    Rng rng_;
};

/// Finite source backed by a vector (e.g. a sample file); throws
/// sample_exhausted past the end.
class VectorSource final : public SampleSource {
public:
    explicit VectorSource(std::vector<double> points) : points_(std::move(points)) {}

    double next() override {
        if (pos_ >= points_.size()) throw sample_exhausted("sample source exhausted");
        return points_[pos_++];
    }

    std::size_t remaining() const { return points_.size() - pos_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<double> points_;
    std::size_t pos_ = 0;
};

/// Pass-through wrapper that counts draws (sampling-budget instrumentation).
class CountingSource final : public SampleSource {
public:
    explicit CountingSource(SampleSource& inner) : inner_(&inner) {}

    double next() override {
        ++count_;
        return inner_->next();
    }
    void next_batch(double* out, std::size_t n) override {
        count_ += n;
        inner_->next_batch(out, n);
    }

    std::uint64_t count() const { return count_; }

private:
    SampleSource* inner_;
    std::uint64_t count_ = 0;
};

/// Hard cap on the number of draws; throws sample_exhausted beyond it.
class CappedSource final : public SampleSource {
public:
    CappedSource(SampleSource& inner, std::uint64_t cap) : inner_(&inner), cap_(cap) {}

    double next() override {
        if (used_ >= cap_) throw sample_exhausted("sample budget cap reached");
        ++used_;
        return inner_->next();
    }
    void next_batch(double* out, std::size_t n) override {
        if (used_ + n > cap_) throw sample_exhausted("sample budget cap reached");
        used_ += n;
        inner_->next_batch(out, n);
    }

    std::uint64_t used() const { return used_; }

private:
    SampleSource* inner_;
    std::uint64_t cap_;
    std::uint64_t used_ = 0;
};

/// Conditional distribution over [0,1) \ S: forwards draws from the inner
/// source, discarding points whose values match the excluded set bit-exactly.
/// Tracks the acceptance rate so callers can detect pathological targets.
class RejectionSource final : public SampleSource {
public:
    RejectionSource(SampleSource& inner, std::vector<double> excluded,
                    double min_acceptance_rate = 1e-3);

    double next() override;

    std::uint64_t attempted() const { return attempted_; }
    std::uint64_t accepted() const { return accepted_; }
    double acceptance_rate() const {
        return attempted_ == 0 ? 1.0
                               : static_cast<double>(accepted_) / static_cast<double>(attempted_);
    }

private:
    SampleSource* inner_;
    std::vector<double> excluded_;  // sorted
    double min_rate_;
    std::uint64_t attempted_ = 0;
    std::uint64_t accepted_ = 0;
};

}  // namespace histloom
