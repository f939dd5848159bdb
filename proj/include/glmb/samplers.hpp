#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glmb/association.hpp"

namespace glmb {

enum class SamplerVariant {
  TgsPlus,          // tempered informed-coordinate sampler with importance weights
  RgsPlus,          // random-coordinate Gibbs on the incremental state
  DgsPlusForward,   // deterministic coordinate cycle, forward
  DgsPlusBackward,  // deterministic coordinate cycle, backward
  SgsPlus,          // full sequential sweeps on incrementally rebuilt rows
  RgsGeneric,       // random-coordinate Gibbs, conditionals recomputed from scratch
  SgsGeneric,       // sequential sweeps, conditionals recomputed from scratch
};

const char* variant_name(SamplerVariant v);
std::optional<SamplerVariant> parse_variant(const std::string& name);
std::vector<SamplerVariant> all_variants();

struct SamplerConfig {
  SamplerVariant variant = SamplerVariant::TgsPlus;
  std::int64_t iterations = 5000;  // emitted iterates; sweep samplers emit one per sweep
  double alpha = 0.5;              // coordinate-selection mixing, (0, 1]
  double beta = 0.5;               // proposal tempering exponent, (0, 1]
  std::uint64_t seed = 0;
};

// Receives one iterate per step. importance_log_weight is only meaningful for
// the tempered variant; everything else passes NaN.
class SampleSink {
 public:
  virtual ~SampleSink() = default;
  virtual void accept(std::span<const std::int32_t> gamma, double importance_log_weight) = 0;
};

// Flat iterate storage: T maps of length P back to back.
class SampleBatch final : public SampleSink {
 public:
  SampleBatch() = default;
  SampleBatch(int num_objects, bool with_importance)
      : P_(num_objects), with_importance_(with_importance) {}

  void accept(std::span<const std::int32_t> gamma, double importance_log_weight) override;

  int num_objects() const { return P_; }
  std::size_t size() const {
    return P_ > 0 ? flat_.size() / static_cast<std::size_t>(P_) : 0;
  }
  std::span<const std::int32_t> map_at(std::size_t t) const {
    return {flat_.data() + t * static_cast<std::size_t>(P_), static_cast<std::size_t>(P_)};
  }
  bool has_importance_weights() const { return with_importance_; }
  const std::vector<double>& importance_log_weights() const { return iw_; }

 private:
  int P_ = 0;
  bool with_importance_ = false;
  std::vector<std::int32_t> flat_;
  std::vector<double> iw_;
};

// Discards iterates; used when only wall time or the count matters.
class NullSink final : public SampleSink {
 public:
  void accept(std::span<const std::int32_t>, double) override { ++count_; }
  std::size_t count() const { return count_; }

 private:
  std::size_t count_ = 0;
};

// The individual chains. All run T steps from gamma0 against a fixed cost
// matrix and push every iterate into the sink, repeats included.
void tgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
                  double alpha, double beta, std::uint64_t seed, SampleSink& sink);
void rgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
                  std::uint64_t seed, SampleSink& sink);
void dgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
                  double alpha, double beta, bool forward, std::uint64_t seed, SampleSink& sink);
void sgs_plus_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t sweeps,
                  std::uint64_t seed, SampleSink& sink);
void rgs_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t iterations,
             std::uint64_t seed, SampleSink& sink);
void sgs_run(const AssociationMap& gamma0, const CostMatrix& eta, std::int64_t sweeps,
             std::uint64_t seed, SampleSink& sink);

// Dispatch on cfg.variant; the batch overload starts from the all-undetected map
// unless gamma0 is given.
void run_sampler(const AssociationMap& gamma0, const CostMatrix& eta, const SamplerConfig& cfg,
                 SampleSink& sink);
SampleBatch run_sampler(const CostMatrix& eta, const SamplerConfig& cfg);
SampleBatch run_sampler(const AssociationMap& gamma0, const CostMatrix& eta,
                        const SamplerConfig& cfg);

// Unique iterates in first-occurrence order, paired with their joint log
// weights. Sort-based: O(T log T) comparisons on the entry vectors.
std::vector<WeightedAssignment> dedup(const SampleBatch& batch, const CostMatrix& eta);

}  // namespace glmb
