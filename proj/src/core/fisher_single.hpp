#pragma once

#include <Eigen/Dense>
#include <functional>

#include "core/state_model.hpp"

namespace superres {

/// One evaluation of the weighted Fisher information for the separation.
struct FiRecord {
  double s = 0.0;
  double sigma = 1.0;
  double theta = 0.0;
  double gamma = 0.0;        // degree of coherence |gamma|
  double concurrence = 0.0;  // C = sin(theta) sqrt(1 - d^2)
  double f_tot = 0.0;
};

/// Weighted FI as a function of the degree of coherence. Requires
/// gamma in [0, 1]; valid for every s >= 0 including s = 0.
FiRecord f_tot_coherence(double s, double sigma, double gamma);

/// Weighted FI as a function of the concurrence. Requires s > 0 and
/// 0 <= C <= sqrt(1 - d^2).
FiRecord f_tot_concurrence(double s, double sigma, double concurrence);

/// A pure-state family s -> |psi(s)> together with its s-derivative, both
/// represented in a finite basis with a diagonal metric.
struct PureStateFamily {
  std::function<Eigen::VectorXcd(double)> state;
  std::function<Eigen::VectorXcd(double)> derivative;
  /// Quadrature weights of the inner product; empty means Euclidean.
  Eigen::VectorXd weights;
};

/// Quantum Fisher information 2 Tr[(d rho/ds)^2] of rho = |psi><psi|.
/// Throws ContractError when |psi(s)| deviates from 1 by more than 1e-8.
double pure_state_fi(const PureStateFamily& family, double s);

/// 4 (<dpsi|dpsi> - |<psi|dpsi>|^2); equal to pure_state_fi for
/// normalized families.
double pure_state_fi_overlap_form(const PureStateFamily& family, double s);

enum class WeightedFiVariant {
  /// sum_i N_i F_i with N_i = <Phi_i|Phi_i> and F_i the QFI of the
  /// normalized branch state.
  QuantumOnly,
  /// QuantumOnly plus the classical information sum_i (dw_i/ds)^2 / w_i
  /// carried by the trace-renormalized branch weights w_i.
  QuantumPlusWeight,
};

/// The variant that reproduces f_tot_coherence exactly. Pinned by the
/// calibration test in tests/unit/test_fisher_single.cpp.
inline constexpr WeightedFiVariant kCalibratedWeightedFiVariant = WeightedFiVariant::QuantumOnly;

/// Rebuilds the weighted FI from the two branch amplitudes
/// Phi_1 = (h+ + cos(theta) h-)/sqrt(2) and Phi_2 = sin(theta) h-/sqrt(2),
/// represented exactly in the Hermite-Gauss basis. Requires phi = 0.
double weighted_fi_reconstruct(const ModelParams& p, WeightedFiVariant variant);

}  // namespace superres
