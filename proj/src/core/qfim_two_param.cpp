#include "core/qfim_two_param.hpp"

#include <cmath>
#include <numbers>
#include <limits>

#include "core/errors.hpp"

namespace superres {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scalars shared by the matrix builders. lambda1 and the trigonometric
// factors use the half-angle forms so small theta stays accurate.
struct Pieces {
  double d, b;                      // overlap and dd/ds
  double c, sin_t, one_minus_c;     // cos(theta), sin(theta), 1 - cos(theta)
  double one_minus_d, one_minus_d2; // 1 - d, 1 - d^2
  double denom;                     // D = 1 + d cos(theta)
  SpectralData spec;
  double ds_lambda1;  // d lambda1 / ds (= -d lambda2 / ds)
  double dt_lambda1;  // d lambda1 / d theta (= -d lambda2 / d theta)
};

Pieces pieces(const ModelParams& p) {
  validate_closed_form(p);
  if (p.s == 0.0) throw DegenerateError("two-parameter quantities are undefined at s = 0");
  Pieces q{};
  const OverlapTriple o = overlap(p.s, p.sigma);
  q.d = o.d;
  q.b = o.d1;
  q.c = std::cos(p.theta);
  q.sin_t = std::sin(p.theta);
  q.one_minus_c = 2.0 * std::pow(std::sin(p.theta / 2.0), 2);
  const double u = p.s * p.s / (8.0 * p.sigma * p.sigma);
  q.one_minus_d = -std::expm1(-u);
  q.one_minus_d2 = -std::expm1(-2.0 * u);
  q.denom = 1.0 + q.d * q.c;
  q.spec = spectral(p);
  const double sin2 = q.sin_t * q.sin_t;
  q.ds_lambda1 = -q.b * sin2 / (2.0 * q.denom * q.denom);
  q.dt_lambda1 = q.one_minus_d2 * q.sin_t / (2.0 * q.denom * q.denom);
  return q;
}

}  // namespace

const char* to_string(Nuisance n) {
  switch (n) {
    case Nuisance::Theta: return "theta";
    case Nuisance::Concurrence: return "concurrence";
    case Nuisance::Coherence: return "coherence";
  }
  return "?";
}

Rho4 rho4(const ModelParams& p) {
  const Pieces q = pieces(p);
  Rho4 r;
  r.matrix(0, 0) = q.spec.lambda1;
  r.matrix(1, 1) = q.spec.lambda2;
  r.s = p.s;
  r.sigma = p.sigma;
  r.theta = p.theta;
  return r;
}

Eigen::Matrix4d drho_ds(const ModelParams& p) {
  const Pieces q = pieces(p);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = q.ds_lambda1;
  m(1, 1) = -q.ds_lambda1;
  m(0, 2) = m(2, 0) = q.spec.lambda1 * q.spec.a3;
  m(1, 3) = m(3, 1) = q.spec.lambda2 * q.spec.a4;
  return m;
}

Eigen::Matrix4d drho_dtheta(const ModelParams& p) {
  const Pieces q = pieces(p);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = q.dt_lambda1;
  m(1, 1) = -q.dt_lambda1;
  return m;
}

SldPair sld_pair(const ModelParams& p) {
  const Pieces q = pieces(p);
  SldPair l;
  // L_kl = 2 <k|d rho|l> / (lambda_k + lambda_l) on the support.
  if (q.spec.lambda1 > 0.0) {
    l.l_s(0, 0) = q.ds_lambda1 / q.spec.lambda1;
    l.l_theta(0, 0) = q.dt_lambda1 / q.spec.lambda1;
    l.l_s(0, 2) = l.l_s(2, 0) = 2.0 * q.spec.a3;
  }
  l.l_s(1, 1) = -q.ds_lambda1 / q.spec.lambda2;
  l.l_theta(1, 1) = -q.dt_lambda1 / q.spec.lambda2;
  l.l_s(1, 3) = l.l_s(3, 1) = 2.0 * q.spec.a4;
  return l;
}

double sld_residual(const Eigen::Matrix4d& drho, const Eigen::Matrix4d& sld, const Eigen::Matrix4d& rho) {
  return (drho - 0.5 * (sld * rho + rho * sld)).cwiseAbs().maxCoeff();
}

Qfim2 qfim(const ModelParams& p) {
  const Pieces q = pieces(p);
  const double d3 = 2.0 * q.denom * q.denom * q.denom;
  const double one_plus_c = 1.0 + q.c;
  const double one_plus_d = 1.0 + q.d;
  const double b2 = q.b * q.b;

  // (d_s lambda_k)^2 / lambda_k
  const double ss1 = b2 * q.one_minus_c * one_plus_c * one_plus_c / (d3 * q.one_minus_d);
  const double ss2 = b2 * q.one_minus_c * q.one_minus_c * one_plus_c / (d3 * one_plus_d);
  // (d_theta lambda_k)^2 / lambda_k
  const double tt1 = q.one_minus_d2 * one_plus_d * one_plus_c / d3;
  const double tt2 = q.one_minus_d2 * q.one_minus_d * q.one_minus_c / d3;
  // d_s lambda_k d_theta lambda_k / lambda_k
  const double st1 = -q.b * one_plus_d * one_plus_c * q.sin_t / d3;
  const double st2 = -q.b * q.one_minus_d * q.one_minus_c * q.sin_t / d3;

  const double a3 = q.spec.a3;
  const double a4 = q.spec.a4;
  Qfim2 f;
  f.f_ss = ss1 + ss2 + 4.0 * q.spec.lambda1 * a3 * a3 + 4.0 * q.spec.lambda2 * a4 * a4;
  f.f_tt = tt1 + tt2;
  f.f_st = st1 + st2;
  f.tag = Nuisance::Theta;
  return f;
}

Qfim2 qfim_from_sld(const SldPair& sld, const Rho4& rho) {
  auto element = [&](const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
    return 0.5 * ((a * b + b * a) * rho.matrix).trace();
  };
  Qfim2 f;
  f.f_ss = element(sld.l_s, sld.l_s);
  f.f_tt = element(sld.l_theta, sld.l_theta);
  f.f_st = element(sld.l_s, sld.l_theta);
  f.tag = Nuisance::Theta;
  return f;
}

PrecisionPair precision_of(const Qfim2& f) {
  PrecisionPair h;
  if (f.f_tt < 1e-14 && std::abs(f.f_st) < 1e-14) {
    h.h_s = f.f_ss;
  } else {
    h.h_s = f.f_ss - f.f_st * f.f_st / f.f_tt;
  }
  h.h_nuisance = f.f_ss > 0.0 ? f.f_tt - f.f_st * f.f_st / f.f_ss : f.f_tt;
  return h;
}

PrecisionPair precision(const ModelParams& p) {
  return precision_of(qfim(p));
}

Qfim2 qfim_gamma(double s, double sigma, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("degree of coherence must lie in [0, 1]");
  const ModelParams p{s, sigma, std::acos(gamma), 0.0};
  const Qfim2 f = qfim(p);
  Qfim2 g;
  g.tag = Nuisance::Coherence;
  g.f_ss = f.f_ss;
  const double sin_t = std::sin(p.theta);
  if (sin_t == 0.0) {
    // gamma = 1: F_st ~ theta, so F_st / sin(theta) has a finite limit while
    // F_tt / sin^2(theta) diverges.
    const OverlapTriple o = overlap(s, sigma);
    g.f_st = o.d1 / ((1.0 + o.d) * (1.0 + o.d));
    g.f_tt = kInf;
    return g;
  }
  const double jac = -1.0 / sin_t;  // d theta / d gamma
  g.f_st = f.f_st * jac;
  g.f_tt = f.f_tt * jac * jac;
  return g;
}

PrecisionPair precision_gamma(double s, double sigma, double gamma) {
  return precision_of(qfim_gamma(s, sigma, gamma));
}

Qfim2 qfim_concurrence(double s, double sigma, double concurrence) {
  if (s == 0.0) throw DegenerateError("two-parameter quantities are undefined at s = 0");
  const double theta = theta_from_concurrence(s, sigma, concurrence);
  const ModelParams p{s, sigma, theta, 0.0};
  const Qfim2 f = qfim(p);
  const OverlapTriple o = overlap(s, sigma);
  const double one_minus_d2 = -std::expm1(-s * s / (4.0 * sigma * sigma));
  const double cos_t = std::cos(theta);

  Qfim2 g;
  g.tag = Nuisance::Concurrence;
  if (theta == std::numbers::pi / 2) {
    g.f_ss = kInf;
    g.f_st = kInf;
    g.f_tt = kInf;
    return g;
  }
  // theta(s, C): d theta/ds at fixed C and d theta/dC.
  const double dtheta_ds = std::tan(theta) * o.d * o.d1 / one_minus_d2;
  const double dtheta_dc = 1.0 / (std::sqrt(one_minus_d2) * cos_t);
  g.f_ss = f.f_ss + 2.0 * dtheta_ds * f.f_st + dtheta_ds * dtheta_ds * f.f_tt;
  g.f_st = dtheta_dc * (f.f_st + dtheta_ds * f.f_tt);
  g.f_tt = dtheta_dc * dtheta_dc * f.f_tt;
  return g;
}

PrecisionPair precision_concurrence(double s, double sigma, double concurrence) {
  const Qfim2 g = qfim_concurrence(s, sigma, concurrence);
  if (std::isfinite(g.f_ss)) return precision_of(g);
  // C = C_max: H_s is parametrization invariant, H_C diverges.
  const double theta = theta_from_concurrence(s, sigma, concurrence);
  PrecisionPair h = precision(ModelParams{s, sigma, theta, 0.0});
  h.h_nuisance = kInf;
  return h;
}

double commutator_expectation(const ModelParams& p) {
  const Rho4 r = rho4(p);
  const SldPair l = sld_pair(p);
  const Eigen::Matrix4d comm = l.l_s * l.l_theta - l.l_theta * l.l_s;
  return (r.matrix * comm).trace();
}

}  // namespace superres
