#pragma once

// Brute-force verification layer. Everything here works from sampled
// amplitudes (position grid or Hermite-Gauss coefficients) and finite
// differences; none of it calls the closed-form expressions in
// state_model / fisher_single / qfim_two_param.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "core/qfim_two_param.hpp"
#include "core/state_model.hpp"

namespace superres::oracle {

/// Uniform position grid on [-halfwidth, halfwidth].
struct Grid {
  double halfwidth = 0.0;
  int n_points = 0;

  double spacing() const { return 2.0 * halfwidth / (n_points - 1); }
  double x(int i) const { return -halfwidth + i * spacing(); }
  /// Trapezoid-rule quadrature weights.
  Eigen::VectorXd weights() const;
};

/// Throws ConfigError unless n_points is a power of two >= 1024 and
/// halfwidth > 0.
Grid make_grid(int n_points, double halfwidth);

/// Default oracle grid for separation s: 4096 points, halfwidth 8 sigma + s.
Grid default_grid(double s, double sigma);

/// Sampled real amplitude on a grid.
struct GridField {
  Grid grid;
  Eigen::VectorXd amplitudes;

  double norm2() const;
  double inner(const GridField& other) const;
};

struct SourcePair {
  GridField plus;   // h(x + s/2)
  GridField minus;  // h(x - s/2)
};

/// Samples the two displaced Gaussian PSF amplitudes. Throws ConfigError when
/// the grid halfwidth is below 8 sigma + s.
SourcePair make_sources(double s, double sigma, const Grid& grid);

struct OracleSettings {
  int n_points = 4096;
  /// 0 selects 8 sigma + s.
  double halfwidth = 0.0;
  /// Finite-difference step in length units; 0 selects 1e-5 sigma.
  double fd_step = 0.0;
  double rank_cutoff = 1e-12;
};

struct NumericQfimReport {
  Qfim2 qfim;        // (s, theta) ordering
  double f_ts = 0.0; // the (theta, s) element, evaluated separately
  int rank = 0;      // dimension of the projected representation
  std::vector<std::string> diagnostics;
};

/// QFIM of (s, theta) from central finite differences of the reduced spatial
/// state, using the spectral formula
///   F_ij = sum_{k,l: lambda_k + lambda_l > cutoff} 2 Re[<k|d_i rho|l><l|d_j rho|k>] / (lambda_k + lambda_l).
/// Works for any phi.
NumericQfimReport numeric_qfim(const ModelParams& p, const OracleSettings& settings = {});

/// Family s -> psi(s) of sampled states with a diagonal metric.
struct SampledFamily {
  std::function<Eigen::VectorXcd(double)> state;
  Eigen::VectorXd weights;  // empty = Euclidean
};

/// 2 Tr[(d rho/ds)^2] of the pure state, with d psi/ds from a central
/// difference of the sampled family.
double numeric_pure_qfi(const SampledFamily& family, double s, double fd_step);

/// 4 (<dpsi|dpsi> - |<psi|dpsi>|^2) from the same finite difference.
double numeric_pure_qfi_overlap_form(const SampledFamily& family, double s, double fd_step);

/// h(x - s/2) on a fixed grid.
SampledFamily displaced_gaussian_family(double sigma, const Grid& grid);

/// Normalized (h+ + h-) on a fixed grid.
SampledFamily symmetric_superposition_family(double sigma, const Grid& grid);

/// Normalized branch amplitude Phi_1 (branch = 1) or Phi_2 (branch = 2) at
/// phi = 0, on a fixed grid.
SampledFamily branch_family_grid(double theta, double sigma, const Grid& grid, int branch);

/// Same branch amplitudes in the Hermite-Gauss coefficient representation.
SampledFamily branch_family_hg(double theta, double sigma, int n_max, int branch);

/// Concurrence of the normalized two-source state computed from the purity of
/// the reduced state: C = sqrt(2 (1 - Tr rho_r^2)).
double numeric_concurrence(const ModelParams& p, const OracleSettings& settings = {});

/// Overlap <h+|h-> by trapezoid quadrature.
double numeric_overlap(double s, double sigma, const OracleSettings& settings = {});

struct EigvecDerivativeNorms {
  double a3 = 0.0;  // |d e1/ds|
  double a4 = 0.0;  // |d e2/ds|
};

/// Norms of the s-derivatives of e1 = (h- - h+)/|.| and e2 = (h- + h+)/|.|,
/// by central differences on the grid.
EigvecDerivativeNorms numeric_eigvec_derivative_norms(double s, double sigma, const OracleSettings& settings = {});

/// Hermite-Gauss coefficients of h(x + s/2) (plus) and h(x - s/2) (minus):
/// c_n = exp(-a^2/2) (-/+ a)^n / sqrt(n!), a = s / (4 sigma).
struct HgCoefficients {
  Eigen::VectorXd plus;
  Eigen::VectorXd minus;
};

/// Throws ConfigError when n_max < 20 or the truncation residual
/// 1 - sum c_n^2 exceeds 1e-12.
HgCoefficients hg_coefficients(double s, double sigma, int n_max);

/// d/ds of hg_coefficients.
HgCoefficients hg_coefficient_derivatives(double s, double sigma, int n_max);

/// Smallest n_max >= 20 that keeps the truncation residual below 1e-14.
int hg_required_n_max(double s, double sigma);

}  // namespace superres::oracle

namespace superres::oracle {

/// Weighted FI sum_i N_i F_i rebuilt on the grid: N_i by quadrature and F_i
/// by numeric_pure_qfi of the normalized branch amplitudes. Requires phi = 0.
double numeric_weighted_fi(const ModelParams& p, const OracleSettings& settings = {});

}  // namespace superres::oracle
