#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfi/certificates.hpp"
#include "rfi/prng.hpp"

namespace rfi {

using Eigen::VectorXd;

// One smooth summand g_j: a deterministic gradient map plus, when known,
// the Lipschitz and hypomonotonicity bounds of the gradient. Absent bounds
// mean "no proven certificate available".
struct SmoothTerm {
  std::function<VectorXd(const VectorXd&)> gradient;
  std::function<double(const VectorXd&)> value;  // optional; diagnostics only
  std::optional<double> lipschitz_L;
  std::optional<double> hypomono_tau;
  // True when the bounds came from estimate_smooth_constants; certificates
  // derived from them are labelled empirical, never proven.
  bool bounds_empirical = false;
};

// One prox-friendly summand: single-valued resolvent selection x -> J(x, t)
// and its submonotonicity constant (0 for convex, e.g. box projectors).
struct ProxTerm {
  std::function<VectorXd(const VectorXd&, double)> resolvent;
  double submono_tau = 0.0;
};

// Immutable after construction; shared read-only across workers.
struct TermRegistry {
  std::vector<SmoothTerm> smooth;
  std::vector<ProxTerm> prox;
};

enum class CertLabel { Proven, Empirical, Uncertified };

const char* to_string(CertLabel label);

// The per-batch mapping  T = ((prod_prox J) o ((1/m) sum_smooth (Id - t grad g))^q)^r.
// Resolvents are applied in ascending index order (they need not commute, so
// the order is part of the contract).
struct BatchOperator {
  std::vector<std::uint32_t> smooth_indices;  // ascending, into TermRegistry::smooth
  std::vector<std::uint32_t> prox_indices;    // ascending, into TermRegistry::prox
  std::vector<double> smooth_steps;           // parallel to smooth_indices
  std::vector<double> prox_steps;             // parallel to prox_indices
  int inner_power_q = 1;
  int outer_power_r = 1;
  std::optional<AafneCertificate> certificate;
  CertLabel label = CertLabel::Uncertified;
};

struct BatchOperatorOptions {
  double alpha = 0.5;              // shared block constant; overridable per term
  std::vector<double> alpha_per_term;  // optional, parallel to smooth_indices
  // When false (default), construction throws CertificationError if any step
  // lies outside its admissible interval or a bound is missing. When true,
  // such batches are built with label Uncertified instead.
  bool allow_uncertified = false;
};

// Builds the operator and runs the certificate calculus:
// per-term gd certificates -> average -> power q -> forward-backward with the
// prox constants and power r.
BatchOperator make_batch_operator(const TermRegistry& reg,
                                  std::span<const std::uint32_t> smooth_indices,
                                  std::span<const std::uint32_t> prox_indices,
                                  double step_t, int q, int r,
                                  const BatchOperatorOptions& opt = {});

// Applies T to x. Gradient terms may be evaluated by several workers, but the
// averaged sum is reduced in ascending index order, so the result is
// bit-identical for any worker count. Throws NumericError (with the offending
// term index) on a non-finite gradient.
VectorXd apply_batch_operator(const BatchOperator& op, const VectorXd& x,
                              const TermRegistry& reg, unsigned n_threads = 1);

struct AafneCheckReport {
  long violations_found = 0;
  double worst_margin = 0.0;  // min over pairs of RHS - LHS; negative = violated
  long n_pairs = 0;
};

// Samples point pairs and checks the certified inequality
//   ||Fx - Fx0||^2 <= (1+eps)||x-x0||^2 - (1-alpha)/alpha * psi
// counting failures beyond 1e-12 relative tolerance.
AafneCheckReport verify_aafne_empirically(
    const std::function<VectorXd(const VectorXd&)>& F, const AafneCertificate& cert,
    const std::function<std::pair<VectorXd, VectorXd>()>& pair_sampler, long n_pairs);

struct SmoothConstantEstimate {
  double lipschitz_L = 0.0;
  double hypomono_tau = 0.0;
  long n_pairs = 0;
};

// Sampling estimator for unknown (L, tau) over an axis-aligned box:
// max ||grad(x)-grad(y)|| / ||x-y||  and  max -<grad(x)-grad(y), x-y>/||x-y||^2.
// Certificates built from these are marked empirical, never proven.
SmoothConstantEstimate estimate_smooth_constants(
    const std::function<VectorXd(const VectorXd&)>& gradient, const VectorXd& box_lo,
    const VectorXd& box_hi, long n_pairs, Philox& rng);

}  // namespace rfi
