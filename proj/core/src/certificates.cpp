#include "rfi/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rfi/errors.hpp"

namespace rfi {

namespace {

constexpr double kAlphaClamp = 1.0 - 1e-6;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite, got " << v;
    throw std::domain_error(os.str());
  }
}

void require_alpha(double alpha) {
  require_finite(alpha, "alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
}

}  // namespace

double gd_step_max(double L, double tau, double alpha) {
  require_finite(L, "L");
  require_finite(tau, "tau");
  require_alpha(alpha);
  if (!(L > 0.0)) throw std::domain_error("L must be positive");
  if (!(tau >= 0.0)) throw std::domain_error("tau must be nonnegative");
  return (alpha * std::sqrt(tau * tau + L * L) - alpha * tau) / (L * L);
}

GdBlock gd_certificate(double L, double tau, double alpha, double t) {
  const double t_max = gd_step_max(L, tau, alpha);
  require_finite(t, "t");
  if (!(t > 0.0 && t < t_max)) {
    std::ostringstream os;
    os << "step t=" << t << " outside the admissible interval (0, " << t_max << ")";
    throw CertificationError(os.str(), 0.0, t_max);
  }
  GdBlock b;
  b.cert.alpha = alpha;
  b.cert.epsilon = 2.0 * t * tau + t * t * L * L / alpha;
  b.lipschitz_L = L;
  b.hypomono_tau = tau;
  b.step_t = t;
  return b;
}

AafneCertificate average_certificates(std::span<const GdBlock> blocks) {
  if (blocks.empty()) throw std::domain_error("average_certificates: empty list");
  double alpha_bar = 0.0;
  bool empirical = false;
  for (const auto& b : blocks) {
    alpha_bar = std::max(alpha_bar, b.cert.alpha);
    empirical = empirical || b.cert.empirical;
  }
  double eps_sum = 0.0;
  for (const auto& b : blocks) {
    eps_sum += 2.0 * b.step_t * b.hypomono_tau +
               b.step_t * b.step_t * b.lipschitz_L * b.lipschitz_L / alpha_bar;
  }
  AafneCertificate out;
  out.alpha = alpha_bar;
  out.epsilon = eps_sum / static_cast<double>(blocks.size());
  out.empirical = empirical;
  return out;
}

AafneCertificate average_certificates(std::span<const AafneCertificate> certs) {
  if (certs.empty()) throw std::domain_error("average_certificates: empty list");
  AafneCertificate out;
  out.alpha = 0.0;
  double eps_sum = 0.0;
  for (const auto& c : certs) {
    out.alpha = std::max(out.alpha, c.alpha);
    eps_sum += c.epsilon;
    out.empirical = out.empirical || c.empirical;
  }
  out.epsilon = eps_sum / static_cast<double>(certs.size());
  return out;
}

AafneCertificate power_certificate(const AafneCertificate& cert, int q) {
  if (q < 1) throw std::domain_error("power_certificate: q must be >= 1");
  AafneCertificate out = cert;
  out.epsilon = std::pow(1.0 + cert.epsilon, q) - 1.0;
  out.alpha = static_cast<double>(q) / (static_cast<double>(q) - 1.0 + 1.0 / cert.alpha);
  return out;
}

AafneCertificate forward_backward_certificate(std::span<const double> prox_taus,
                                              const AafneCertificate& gd_cert_q,
                                              int n_prox, int r) {
  if (r < 1) throw std::domain_error("forward_backward_certificate: r must be >= 1");
  if (n_prox < 0 || static_cast<std::size_t>(n_prox) != prox_taus.size())
    throw std::domain_error("forward_backward_certificate: n_prox does not match prox_taus");

  if (prox_taus.empty() && r == 1) return gd_cert_q;

  double prod = 1.0;
  for (double tau : prox_taus) {
    if (!(tau >= 0.0)) throw std::domain_error("prox tau must be nonnegative");
    prod *= 1.0 + tau;
  }
  AafneCertificate out;
  out.empirical = gd_cert_q.empirical;
  out.epsilon = std::pow(prod * (1.0 + gd_cert_q.epsilon), r) - 1.0;

  const double n = static_cast<double>(n_prox);
  double alpha_tilde = (n + 1.0) / (n + std::max(0.5, gd_cert_q.alpha));
  if (alpha_tilde >= 1.0) {
    out.alpha_raw_unclamped = alpha_tilde;
    alpha_tilde = kAlphaClamp;
  }
  out.alpha = static_cast<double>(r) / (static_cast<double>(r) - 1.0 + 1.0 / alpha_tilde);
  return out;
}

std::pair<double, double> linear_rate_window(const AafneCertificate& cert) {
  const double tau = (1.0 - cert.alpha) / cert.alpha;
  const double lo = std::sqrt(tau / (1.0 + cert.epsilon));
  const double hi = cert.epsilon > 0.0 ? std::sqrt(tau / cert.epsilon)
                                       : std::numeric_limits<double>::infinity();
  return {lo, hi};
}

double linear_rate(const AafneCertificate& cert, double r_gauge) {
  require_alpha(cert.alpha);
  if (!(cert.epsilon >= 0.0)) throw std::domain_error("epsilon must be nonnegative");
  const auto [lo, hi] = linear_rate_window(cert);
  if (!(r_gauge >= lo && r_gauge < hi)) {
    std::ostringstream os;
    os << "r_gauge=" << r_gauge << " outside the admissible window [" << lo << ", " << hi << ")";
    throw std::domain_error(os.str());
  }
  const double c2 = 1.0 + cert.epsilon - (1.0 - cert.alpha) / (r_gauge * r_gauge * cert.alpha);
  return std::sqrt(std::max(0.0, c2));
}

double transport_discrepancy(const Eigen::VectorXd& x, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& Fx, const Eigen::VectorXd& Fx0) {
  return ((x - Fx) - (x0 - Fx0)).squaredNorm();
}

double transport_discrepancy_expanded(const Eigen::VectorXd& x, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& Fx, const Eigen::VectorXd& Fx0) {
  return (Fx - x).squaredNorm() + (Fx0 - x0).squaredNorm() + (Fx - Fx0).squaredNorm() +
         (x - x0).squaredNorm() - (Fx - x0).squaredNorm() - (x - Fx0).squaredNorm();
}

}  // namespace rfi
