#pragma once

#include <numbers>

namespace superres {

/// Physical configuration of the two-source field.
///
/// `s` is the source separation and `sigma` the PSF width (same length unit).
/// `theta` fixes the auxiliary-state overlap, |gamma| = cos(theta), and `phi`
/// is the relative phase between the two auxiliary states.
struct ModelParams {
  double s = 0.0;
  double sigma = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Throws DomainError unless sigma > 0, s >= 0, theta in [0, pi/2] and
/// phi in (-pi, pi].
void validate(const ModelParams& p);

/// validate() plus phi == 0, which every closed-form path requires.
void validate_closed_form(const ModelParams& p);

/// Gaussian overlap d = <h+|h-> and its first two derivatives in s.
struct OverlapTriple {
  double d = 1.0;
  double d1 = 0.0;  // dd/ds
  double d2 = 0.0;  // d^2 d / ds^2
};

/// Eigenvalues of the normalized reduced spatial state together with the
/// norms a3 = |d e1/ds|, a4 = |d e2/ds| of the eigenvector derivatives.
struct SpectralData {
  double lambda1 = 0.0;
  double lambda2 = 1.0;
  double a3 = 0.0;
  double a4 = 0.0;
};

OverlapTriple overlap(double s, double sigma);

/// |gamma| = cos(theta).
double coherence_of(double theta);

/// C = sin(theta) * sqrt(1 - d^2), the concurrence convention used by the
/// closed-form Fisher information. It ignores the normalization 1 + d cos(theta) cos(phi)
/// of the two-source state.
double concurrence_paper(const ModelParams& p);

/// Concurrence of the two-source state after normalizing it to unit norm.
double concurrence_normalized(const ModelParams& p);

/// Largest reachable concurrence sqrt(1 - d^2) at separation s.
double max_concurrence(double s, double sigma);

/// Inverse of concurrence_paper on theta in [0, pi/2]. Throws
/// OutOfReachError when C > max_concurrence(s, sigma).
double theta_from_concurrence(double s, double sigma, double concurrence);

/// Throws DegenerateError at s = 0, where e1 is undefined.
SpectralData spectral(const ModelParams& p);

}  // namespace superres
