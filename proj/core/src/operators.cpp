#include "rfi/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rfi/errors.hpp"
#include "rfi/parallel.hpp"

namespace rfi {

const char* to_string(CertLabel label) {
  switch (label) {
    case CertLabel::Proven: return "proven";
    case CertLabel::Empirical: return "empirical";
    case CertLabel::Uncertified: return "uncertified";
  }
  return "uncertified";
}

BatchOperator make_batch_operator(const TermRegistry& reg,
                                  std::span<const std::uint32_t> smooth_indices,
                                  std::span<const std::uint32_t> prox_indices,
                                  double step_t, int q, int r,
                                  const BatchOperatorOptions& opt) {
  if (q < 1 || r < 1) throw std::domain_error("make_batch_operator: q, r must be >= 1");
  if (!(step_t > 0.0)) throw std::domain_error("make_batch_operator: step must be positive");
  if (!opt.alpha_per_term.empty() && opt.alpha_per_term.size() != smooth_indices.size())
    throw std::domain_error("make_batch_operator: alpha_per_term size mismatch");

  BatchOperator op;
  op.smooth_indices.assign(smooth_indices.begin(), smooth_indices.end());
  op.prox_indices.assign(prox_indices.begin(), prox_indices.end());
  std::sort(op.smooth_indices.begin(), op.smooth_indices.end());
  std::sort(op.prox_indices.begin(), op.prox_indices.end());
  op.smooth_steps.assign(op.smooth_indices.size(), step_t);
  op.prox_steps.assign(op.prox_indices.size(), step_t);
  op.inner_power_q = q;
  op.outer_power_r = r;

  for (auto j : op.smooth_indices)
    if (j >= reg.smooth.size()) throw std::domain_error("smooth index out of range");
  for (auto j : op.prox_indices)
    if (j >= reg.prox.size()) throw std::domain_error("prox index out of range");

  // Certificate chain. Missing bounds or an inadmissible step leave the
  // operator uncertified (or fail construction unless opted out). An empty
  // smooth part acts as the identity, certified (1/2, 0).
  bool certifiable = true;
  std::vector<GdBlock> blocks;
  blocks.reserve(op.smooth_indices.size());
  for (std::size_t i = 0; i < op.smooth_indices.size(); ++i) {
    const auto& term = reg.smooth[op.smooth_indices[i]];
    if (!term.lipschitz_L || !term.hypomono_tau) {
      if (!opt.allow_uncertified) {
        std::ostringstream os;
        os << "smooth term " << op.smooth_indices[i]
           << " has no (L, tau) bounds; pass allow_uncertified to build anyway";
        throw CertificationError(os.str(), 0.0, 0.0);
      }
      certifiable = false;
      break;
    }
    const double alpha = opt.alpha_per_term.empty() ? opt.alpha : opt.alpha_per_term[i];
    try {
      GdBlock b = gd_certificate(*term.lipschitz_L, *term.hypomono_tau, alpha, step_t);
      b.cert.empirical = term.bounds_empirical;
      blocks.push_back(b);
    } catch (const CertificationError&) {
      if (!opt.allow_uncertified) throw;
      certifiable = false;
      break;
    }
  }

  if (certifiable) {
    AafneCertificate powered;  // defaults to (1/2, 0) for an empty smooth part
    if (!blocks.empty()) {
      AafneCertificate avg = average_certificates(std::span<const GdBlock>(blocks));
      powered = power_certificate(avg, q);
    }
    std::vector<double> taus;
    taus.reserve(op.prox_indices.size());
    for (auto j : op.prox_indices) taus.push_back(reg.prox[j].submono_tau);
    AafneCertificate full = forward_backward_certificate(
        taus, powered, static_cast<int>(taus.size()), r);
    op.certificate = full;
    op.label = full.empirical ? CertLabel::Empirical : CertLabel::Proven;
  } else {
    op.certificate.reset();
    op.label = CertLabel::Uncertified;
  }
  return op;
}

VectorXd apply_batch_operator(const BatchOperator& op, const VectorXd& x,
                              const TermRegistry& reg, unsigned n_threads) {
  const std::size_t m = op.smooth_indices.size();
  VectorXd cur = x;
  std::vector<VectorXd> grads(m);
  for (int outer = 0; outer < op.outer_power_r; ++outer) {
    for (int inner = 0; inner < op.inner_power_q; ++inner) {
      if (m > 0) {
        parallel_for(m, n_threads, [&](std::size_t i) {
          grads[i] = reg.smooth[op.smooth_indices[i]].gradient(cur);
        });
        // Fixed ascending-index reduction: bit-reproducible at any worker count.
        VectorXd acc = VectorXd::Zero(x.size());
        for (std::size_t i = 0; i < m; ++i) {
          if (!grads[i].allFinite()) {
            std::ostringstream os;
            os << "non-finite gradient from smooth term " << op.smooth_indices[i];
            throw NumericError(os.str());
          }
          acc += op.smooth_steps[i] * grads[i];
        }
        cur -= acc / static_cast<double>(m);
      }
    }
    for (std::size_t i = 0; i < op.prox_indices.size(); ++i) {
      cur = reg.prox[op.prox_indices[i]].resolvent(cur, op.prox_steps[i]);
      if (!cur.allFinite()) {
        std::ostringstream os;
        os << "non-finite point from prox term " << op.prox_indices[i];
        throw NumericError(os.str());
      }
    }
  }
  return cur;
}

AafneCheckReport verify_aafne_empirically(
    const std::function<VectorXd(const VectorXd&)>& F, const AafneCertificate& cert,
    const std::function<std::pair<VectorXd, VectorXd>()>& pair_sampler, long n_pairs) {
  AafneCheckReport report;
  report.n_pairs = n_pairs;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const double ratio = (1.0 - cert.alpha) / cert.alpha;
  for (long p = 0; p < n_pairs; ++p) {
    const auto [x, x0] = pair_sampler();
    const VectorXd Fx = F(x);
    const VectorXd Fx0 = F(x0);
    const double lhs = (Fx - Fx0).squaredNorm();
    const double d2 = (x - x0).squaredNorm();
    const double psi = transport_discrepancy(x, x0, Fx, Fx0);
    const double rhs = (1.0 + cert.epsilon) * d2 - ratio * psi;
    const double margin = rhs - lhs;
    report.worst_margin = std::min(report.worst_margin, margin);
    // All quantities are O(1) products; a relative floor of 1 keeps the check
    // meaningful near zero.
    const double scale = std::max({1.0, lhs, std::abs(rhs)});
    if (margin < -1e-12 * scale) ++report.violations_found;
  }
  if (n_pairs == 0) report.worst_margin = 0.0;
  return report;
}

SmoothConstantEstimate estimate_smooth_constants(
    const std::function<VectorXd(const VectorXd&)>& gradient, const VectorXd& box_lo,
    const VectorXd& box_hi, long n_pairs, Philox& rng) {
  if (box_lo.size() != box_hi.size() || box_lo.size() == 0)
    throw std::domain_error("estimate_smooth_constants: malformed box");
  for (Eigen::Index i = 0; i < box_lo.size(); ++i)
    if (!(box_lo[i] <= box_hi[i])) throw std::domain_error("estimate_smooth_constants: lo > hi");

  const auto draw = [&]() {
    VectorXd v(box_lo.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * rng.next_double();
    return v;
  };

  SmoothConstantEstimate est;
  est.n_pairs = n_pairs;
  for (long p = 0; p < n_pairs; ++p) {
    const VectorXd x = draw();
    const VectorXd y = draw();
    const VectorXd dx = x - y;
    const double d2 = dx.squaredNorm();
    if (d2 <= 0.0) continue;
    const VectorXd dg = gradient(x) - gradient(y);
    est.lipschitz_L = std::max(est.lipschitz_L, std::sqrt(dg.squaredNorm() / d2));
    est.hypomono_tau = std::max(est.hypomono_tau, -dg.dot(dx) / d2);
  }
  return est;
}

}  // namespace rfi
