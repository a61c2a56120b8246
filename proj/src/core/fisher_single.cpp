#include "core/fisher_single.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "core/errors.hpp"
#include "core/numeric_oracle.hpp"

namespace superres {

namespace {

std::complex<double> inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& w) {
  if (w.size() == 0) return a.dot(b);  // Eigen's dot conjugates the left operand
  return (a.conjugate().array() * w.array().cast<std::complex<double>>() * b.array()).sum();
}

void check_range(double s, double sigma) {
  overlap(s, sigma);
}

}  // namespace

FiRecord f_tot_coherence(double s, double sigma, double gamma) {
  check_range(s, sigma);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("degree of coherence must lie in [0, 1]");
  const double d = overlap(s, sigma).d;
  const double var = sigma * sigma;
  const double var2 = var * var;

  FiRecord r;
  r.s = s;
  r.sigma = sigma;
  r.gamma = gamma;
  r.theta = std::acos(gamma);
  r.concurrence = std::sqrt(std::max(0.0, 1.0 - gamma * gamma)) * max_concurrence(s, sigma);
  r.f_tot = 1.0 / (4.0 * var) - gamma * d * (4.0 * var - s * s) / (16.0 * var2) -
            gamma * gamma * d * d * s * s / (8.0 * var2 * (1.0 + gamma * gamma + 2.0 * d * gamma));
  return r;
}

FiRecord f_tot_concurrence(double s, double sigma, double concurrence) {
  check_range(s, sigma);
  if (s == 0.0) throw DegenerateError("f_tot_concurrence requires s > 0; use f_tot_coherence for the s -> 0 limit");
  const double theta = theta_from_concurrence(s, sigma, concurrence);  // range checks
  const double d = overlap(s, sigma).d;
  const double var = sigma * sigma;
  const double var2 = var * var;
  const double one_minus_d2 = -std::expm1(-s * s / (4.0 * var));
  const double q = std::sqrt(one_minus_d2);
  // C within rounding of C_max is C_max (theta_from_concurrence snaps the
  // same way); the square root below would amplify that residue to ~1e-8.
  const double slack = theta == std::numbers::pi / 2 ? 0.0 : std::max(0.0, one_minus_d2 - concurrence * concurrence);
  const double r = std::sqrt(slack);

  FiRecord out;
  out.s = s;
  out.sigma = sigma;
  out.theta = theta;
  out.gamma = std::cos(theta);
  out.concurrence = concurrence;
  out.f_tot = 1.0 / (4.0 * var) - d * (4.0 * var - s * s) * r / (16.0 * q * var2) -
              d * d * s * s * slack /
                  (8.0 * var2 * (2.0 - 2.0 * d * d - concurrence * concurrence + 2.0 * d * q * r));
  return out;
}

double pure_state_fi(const PureStateFamily& family, double s) {
  const Eigen::VectorXcd psi = family.state(s);
  const Eigen::VectorXcd dpsi = family.derivative(s);
  const double n2 = inner(psi, psi, family.weights).real();
  if (std::abs(n2 - 1.0) > 1e-8) throw ContractError("pure_state_fi needs a normalized state family");
  // d rho = |dpsi><psi| + |psi><dpsi|;
  // Tr[(d rho)^2] = 2 <dpsi|dpsi><psi|psi> + 2 Re(<psi|dpsi>^2).
  const double dd = inner(dpsi, dpsi, family.weights).real();
  const std::complex<double> pd = inner(psi, dpsi, family.weights);
  const double trace_sq = 2.0 * dd * n2 + 2.0 * (pd * pd).real();
  return 2.0 * trace_sq;
}

double pure_state_fi_overlap_form(const PureStateFamily& family, double s) {
  const Eigen::VectorXcd psi = family.state(s);
  const Eigen::VectorXcd dpsi = family.derivative(s);
  const double dd = inner(dpsi, dpsi, family.weights).real();
  const double pd = std::abs(inner(psi, dpsi, family.weights));
  return 4.0 * (dd - pd * pd);
}

namespace {

struct Branch {
  Eigen::VectorXd amplitude;   // non-normalized Phi_i
  Eigen::VectorXd derivative;  // d Phi_i / ds
};

Branch make_branch(const oracle::HgCoefficients& c, const oracle::HgCoefficients& dc, double cos_t, double sin_t,
                   int which) {
  const double r2 = 1.0 / std::sqrt(2.0);
  if (which == 1) return {r2 * (c.plus + cos_t * c.minus), r2 * (dc.plus + cos_t * dc.minus)};
  return {r2 * sin_t * c.minus, r2 * sin_t * dc.minus};
}

// Normalized branch as a PureStateFamily with exact derivative.
PureStateFamily normalized_branch_family(const ModelParams& p, int which, int n_max) {
  const double cos_t = std::cos(p.theta);
  const double sin_t = std::sin(p.theta);
  auto branch_at = [=](double s) {
    return make_branch(oracle::hg_coefficients(s, p.sigma, n_max), oracle::hg_coefficient_derivatives(s, p.sigma, n_max),
                       cos_t, sin_t, which);
  };
  PureStateFamily fam;
  fam.state = [=](double s) -> Eigen::VectorXcd {
    const Branch b = branch_at(s);
    return (b.amplitude / b.amplitude.norm()).cast<std::complex<double>>();
  };
  fam.derivative = [=](double s) -> Eigen::VectorXcd {
    const Branch b = branch_at(s);
    const double n = b.amplitude.norm();
    const double proj = b.amplitude.dot(b.derivative);
    const Eigen::VectorXd dn = b.derivative / n - b.amplitude * (proj / (n * n * n));
    return dn.cast<std::complex<double>>();
  };
  return fam;
}

}  // namespace

double weighted_fi_reconstruct(const ModelParams& p, WeightedFiVariant variant) {
  validate_closed_form(p);
  const int n_max = oracle::hg_required_n_max(p.s, p.sigma);
  const auto c = oracle::hg_coefficients(p.s, p.sigma, n_max);
  const auto dc = oracle::hg_coefficient_derivatives(p.s, p.sigma, n_max);
  const double cos_t = std::cos(p.theta);
  const double sin_t = std::sin(p.theta);

  double weight[2];
  double dweight[2];
  double quantum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Branch b = make_branch(c, dc, cos_t, sin_t, i + 1);
    weight[i] = b.amplitude.squaredNorm();
    dweight[i] = 2.0 * b.amplitude.dot(b.derivative);
    // An empty branch (theta = 0) carries no information.
    if (weight[i] == 0.0) continue;
    quantum += weight[i] * pure_state_fi(normalized_branch_family(p, i + 1, n_max), p.s);
  }
  if (variant == WeightedFiVariant::QuantumOnly) return quantum;

  const double total = weight[0] + weight[1];
  const double dtotal = dweight[0] + dweight[1];
  double classical = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (weight[i] == 0.0) continue;
    const double w = weight[i] / total;
    const double dw = (dweight[i] * total - weight[i] * dtotal) / (total * total);
    classical += dw * dw / w;
  }
  return quantum + classical;
}

}  // namespace superres
