#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <utility>

namespace rfi {

// An (alpha, epsilon) pair certifying that an operator F satisfies
//
//   ||Fx - Fx0||^2 <= (1+epsilon)||x - x0||^2
//                     - (1-alpha)/alpha * ||(x-Fx) - (x0-Fx0)||^2
//
// on the region of interest. epsilon < 1 is required for any convergence
// guarantee; certificates with epsilon >= 1 are carried through the calculus
// flagged rather than rejected, so uncertified experiments can still run.
struct AafneCertificate {
  double alpha = 0.5;
  double epsilon = 0.0;
  // True when the backing (L, tau) bounds were estimated by sampling rather
  // than supplied as proven constants.
  bool empirical = false;
  // Set when the composition formula produced alpha outside (0,1) and the
  // value was clamped; holds the raw pre-clamp value.
  std::optional<double> alpha_raw_unclamped;

  bool admissible() const { return epsilon < 1.0 && alpha > 0.0 && alpha < 1.0; }
};

// Gradient-descent block certificate together with its generating triple.
// The triple is retained because averaging re-evaluates each violation at the
// ensemble constant max_j alpha_j.
struct GdBlock {
  AafneCertificate cert;
  double lipschitz_L = 0.0;
  double hypomono_tau = 0.0;
  double step_t = 0.0;
};

// Upper endpoint of the admissible step interval (0, t_max) for the gradient
// step Id - t grad(g) with grad Lipschitz-L and tau-hypomonotone:
//   t_max = (alpha*sqrt(tau^2 + L^2) - alpha*tau) / L^2.
double gd_step_max(double L, double tau, double alpha);

// Certificate for Id - t grad(g): violation 2*t*tau + t^2 L^2 / alpha,
// constant alpha. Throws CertificationError when t is outside (0, t_max).
GdBlock gd_certificate(double L, double tau, double alpha, double t);

// Certificate of the equally weighted average (1/m) sum_j (Id - t_j grad g_j):
// constant max_j alpha_j, violation = mean of the per-block violations
// re-evaluated at that constant.
AafneCertificate average_certificates(std::span<const GdBlock> blocks);

// Triple-free variant: uses each block's stored violation unchanged. Exact
// when all alpha_j agree; otherwise a valid upper bound (the violation is
// decreasing in alpha).
AafneCertificate average_certificates(std::span<const AafneCertificate> certs);

// Certificate of the q-fold composition F^q:
//   epsilon_q = (1+epsilon)^q - 1,  alpha_q = q / (q - 1 + 1/alpha).
AafneCertificate power_certificate(const AafneCertificate& cert, int q);

// Certificate of ((prod_j J_j) o F_gd^q)^r, where each resolvent J_j carries
// submonotonicity constant tau_j (alpha = 1/2, violation tau_j):
//   epsilon = (prod_j (1+tau_j) * (1+epsilon_q))^r - 1
//   alpha   = r / (r - 1 + 1/alpha~),
//   alpha~  = (n_prox + 1) / (n_prox + max(1/2, alpha_q)).
// alpha~ can formally reach/exceed 1; it is clamped to 1 - 1e-6 with the raw
// value recorded in alpha_raw_unclamped.
AafneCertificate forward_backward_certificate(std::span<const double> prox_taus,
                                              const AafneCertificate& gd_cert_q,
                                              int n_prox, int r);

// Admissible gauge-slope window [lo, hi) for linear_rate; hi is +inf when
// epsilon == 0.
std::pair<double, double> linear_rate_window(const AafneCertificate& cert);

// R-linear contraction factor c = sqrt(1 + eps - (1-alpha)/(r_gauge^2 alpha))
// for a linear metric-subregularity gauge with slope r_gauge inside the
// admissible window. Throws std::domain_error (with the window in the
// message) otherwise.
double linear_rate(const AafneCertificate& cert, double r_gauge);

// Transport discrepancy psi(x, x0, Fx, Fx0) in Euclidean space,
// ||(x-Fx) - (x0-Fx0)||^2, and its six-term expanded form. Both are kept so
// the identity between them can be asserted independently.
double transport_discrepancy(const Eigen::VectorXd& x, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& Fx, const Eigen::VectorXd& Fx0);
double transport_discrepancy_expanded(const Eigen::VectorXd& x, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& Fx, const Eigen::VectorXd& Fx0);

}  // namespace rfi
