#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rfi/prng.hpp"

namespace rfi {

using Eigen::VectorXd;

// How batch index sets are drawn. Every draw is independent of the state and
// of all previous draws; each chain owns its own stream.
struct SamplingSpec {
  std::uint32_t total_terms_M = 1;
  std::uint32_t batch_size_m = 1;
  std::uint64_t seed = 0;
  bool with_replacement = false;  // ablation only; default m-subsets

  void validate() const;
};

// Uniform batch of size m from {0,...,M-1}, ascending (the reduction order
// downstream is ascending-index, so ordering here keeps runs reproducible).
std::vector<std::uint32_t> draw_batch(const SamplingSpec& spec, Philox& rng);

// The update map: x -> T_I(x) for the drawn index set I. The signature is the
// whole interface on purpose: the operator can read nothing but (x, I).
using BatchApply =
    std::function<VectorXd(std::span<const std::uint32_t>, const VectorXd&)>;

enum class ChainStatus { Running, Finished, NumericAbort };

struct ChainSnapshot {
  std::uint64_t outer_iteration_k = 0;
  VectorXd x;
  double wall_clock_s = 0.0;
};

struct ChainResult {
  std::vector<ChainSnapshot> snapshots;   // k = 0, each cadence point, final k
  std::vector<double> step_norms;         // ||X_k - X_{k-1}|| for k = 1..n_outer
  ChainStatus status = ChainStatus::Finished;
  std::uint64_t abort_iteration = 0;
  std::string abort_message;
};

// One chain of X_{k+1} = T_{xi_k}(X_k). Snapshot cadence 0 records only
// k = 0 and the final iterate.
ChainResult run_chain(const VectorXd& x0, const BatchApply& apply, const SamplingSpec& spec,
                      std::uint64_t n_outer, std::uint64_t snapshot_every,
                      std::uint64_t chain_id = 0, unsigned n_threads = 1);

struct EnsembleSnapshot {
  std::uint64_t outer_iteration_k = 0;
  std::vector<VectorXd> points;     // one per chain, chain order
  std::vector<double> step_norms;   // per chain; NaN at k = 0
  double wall_clock_s = 0.0;
};

struct EnsembleResult {
  std::vector<EnsembleSnapshot> snapshots;
  std::vector<std::vector<double>> step_norms;  // [chain][k-1]
  std::vector<ChainStatus> status;
  std::vector<std::string> abort_messages;
};

using InitSampler = std::function<VectorXd(Philox&)>;

// n_chains independent chains with disjoint streams derived from spec.seed;
// chain c draws X_0 from mu0_sampler on stream (seed, Init, c) and batches on
// (seed, Chain, c). A numeric abort stops that chain only; its last finite
// iterate is carried into later snapshots.
EnsembleResult run_ensemble(const InitSampler& mu0_sampler, std::uint32_t n_chains,
                            const BatchApply& apply, const SamplingSpec& spec,
                            std::uint64_t n_outer, std::uint64_t snapshot_every,
                            unsigned n_threads = 0);

}  // namespace rfi
