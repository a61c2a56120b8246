#pragma once

#include <Eigen/Dense>

#include "core/state_model.hpp"

namespace superres {

/// Which parameter plays the nuisance role next to the separation s.
enum class Nuisance { Theta, Concurrence, Coherence };

const char* to_string(Nuisance n);

/// Normalized reduced spatial state in the ordered basis {e1, e2, e3, e4},
/// with e3, e4 the normalized s-derivatives of e1, e2.
struct Rho4 {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();
  double s = 0.0;
  double sigma = 1.0;
  double theta = 0.0;
};

/// Symmetric logarithmic derivatives for s and theta in the same basis.
struct SldPair {
  Eigen::Matrix4d l_s = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d l_theta = Eigen::Matrix4d::Zero();
};

/// 2x2 QFIM for (s, nuisance). f_tt and f_st are expressed in the units of
/// the tagged nuisance parametrization.
struct Qfim2 {
  double f_ss = 0.0;
  double f_tt = 0.0;
  double f_st = 0.0;
  Nuisance tag = Nuisance::Theta;
};

/// Nuisance-corrected precisions H_s = F_ss - F_st^2/F_tt and
/// H_n = F_tt - F_st^2/F_ss.
struct PrecisionPair {
  double h_s = 0.0;
  double h_nuisance = 0.0;
};

// All operations below require s > 0 (DegenerateError otherwise), phi = 0 and
// theta in [0, pi/2].

Rho4 rho4(const ModelParams& p);
Eigen::Matrix4d drho_ds(const ModelParams& p);
Eigen::Matrix4d drho_dtheta(const ModelParams& p);

/// SLD matrices from their element formulas. At theta = 0 the e1 row of
/// each SLD is undetermined (lambda1 = 0) and is set to zero.
SldPair sld_pair(const ModelParams& p);

/// max |d rho - (L rho + rho L)/2| over all entries.
double sld_residual(const Eigen::Matrix4d& drho, const Eigen::Matrix4d& sld, const Eigen::Matrix4d& rho);

/// QFIM in (s, theta) from the closed-form element expressions, written with
/// the eigenvalue ratios (d lambda)^2/lambda cancelled analytically so that
/// theta -> 0 needs no special case.
Qfim2 qfim(const ModelParams& p);

/// F_ij = Tr[(L_i L_j + L_j L_i) rho] / 2 evaluated on assembled matrices.
Qfim2 qfim_from_sld(const SldPair& sld, const Rho4& rho);

/// H_s and H_n for any tagged QFIM. With no nuisance information
/// (f_tt and |f_st| below 1e-14) H_s falls back to f_ss.
PrecisionPair precision_of(const Qfim2& f);

PrecisionPair precision(const ModelParams& p);

/// QFIM for (s, |gamma|) by the chain rule from the theta version with
/// d theta / d gamma = -1 / sin(theta). At gamma = 1 the gamma-gamma element
/// diverges and is reported as +infinity.
Qfim2 qfim_gamma(double s, double sigma, double gamma);
PrecisionPair precision_gamma(double s, double sigma, double gamma);

/// QFIM for (s, C) where theta(s, C) = asin(C / sqrt(1 - d^2)); the
/// s-derivative is taken at fixed C. At C = C_max the Jacobian diverges and
/// the C-dependent elements are reported as +infinity.
Qfim2 qfim_concurrence(double s, double sigma, double concurrence);
PrecisionPair precision_concurrence(double s, double sigma, double concurrence);

/// Tr(rho [L_s, L_theta]); zero when a single measurement is jointly optimal.
double commutator_expectation(const ModelParams& p);

}  // namespace superres
