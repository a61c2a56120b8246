#include "core/state_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "core/errors.hpp"

namespace superres {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << value;
  return os.str();
}

// sinh(u) - u without cancellation for small u.
double sinh_minus_identity(double u) {
  if (u < 0.1) {
    const double u2 = u * u;
    // u^3/3! + u^5/5! + ... + u^11/11!
    double term = u * u2 / 6.0;
    double sum = term;
    for (int k = 5; k <= 11; k += 2) {
      term *= u2 / static_cast<double>((k - 1) * k);
      sum += term;
    }
    return sum;
  }
  return std::sinh(u) - u;
}

}  // namespace

OutOfReachError::OutOfReachError(double requested, double c_max)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "concurrence " << requested << " is out of reach; C_max = " << c_max;
        return os.str();
      }()),
      requested_(requested),
      c_max_(c_max) {}

void validate(const ModelParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw DomainError(describe("sigma must be > 0, got sigma", p.sigma));
  if (!(p.s >= 0.0) || !std::isfinite(p.s)) throw DomainError(describe("s must be >= 0, got s", p.s));
  if (!(p.theta >= 0.0 && p.theta <= kPi / 2)) {
    throw DomainError(describe("theta must lie in [0, pi/2], got theta", p.theta));
  }
  if (!(p.phi > -kPi && p.phi <= kPi)) throw DomainError(describe("phi must lie in (-pi, pi], got phi", p.phi));
}

void validate_closed_form(const ModelParams& p) {
  validate(p);
  if (p.phi != 0.0) throw DomainError(describe("closed-form expressions require phi = 0, got phi", p.phi));
}

OverlapTriple overlap(double s, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError(describe("sigma must be > 0, got sigma", sigma));
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError(describe("s must be >= 0, got s", s));
  const double var4 = 4.0 * sigma * sigma;
  OverlapTriple t;
  t.d = std::exp(-s * s / (2.0 * var4));
  t.d1 = -(s / var4) * t.d;
  t.d2 = (t.d / var4) * (s * s / var4 - 1.0);
  return t;
}

double coherence_of(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2)) throw DomainError(describe("theta must lie in [0, pi/2], got theta", theta));
  return std::cos(theta);
}

double max_concurrence(double s, double sigma) {
  overlap(s, sigma);  // validation
  // 1 - d^2 = -expm1(-s^2 / 4 sigma^2)
  return std::sqrt(-std::expm1(-s * s / (4.0 * sigma * sigma)));
}

double concurrence_paper(const ModelParams& p) {
  validate(p);
  return std::sin(p.theta) * max_concurrence(p.s, p.sigma);
}

double concurrence_normalized(const ModelParams& p) {
  validate(p);
  const double d = overlap(p.s, p.sigma).d;
  const double norm2 = 1.0 + d * std::cos(p.theta) * std::cos(p.phi);
  return concurrence_paper(p) / norm2;
}

double theta_from_concurrence(double s, double sigma, double concurrence) {
  const double c_max = max_concurrence(s, sigma);
  if (!(concurrence >= 0.0)) throw DomainError(describe("concurrence must be >= 0, got C", concurrence));
  if (concurrence == 0.0) return 0.0;
  // One part in 1e12 of slack absorbs round-off when callers pass C_max itself.
  if (concurrence > c_max * (1.0 + 1e-12)) throw OutOfReachError(concurrence, c_max);
  const double ratio = std::min(1.0, concurrence / c_max);
  // asin is ill-conditioned at 1: a C that differs from C_max only by
  // rounding would otherwise land ~1e-8 short of pi/2.
  if (1.0 - ratio * ratio <= 8.0 * std::numeric_limits<double>::epsilon()) return std::numbers::pi / 2;
  return std::asin(ratio);
}

SpectralData spectral(const ModelParams& p) {
  validate(p);
  if (p.s == 0.0) throw DegenerateError("spectral data undefined at s = 0 (e1 has zero norm)");
  const double d = overlap(p.s, p.sigma).d;
  const double c = std::cos(p.theta);
  const double u = p.s * p.s / (8.0 * p.sigma * p.sigma);
  const double one_minus_d = -std::expm1(-u);
  const double one_minus_c = 2.0 * std::pow(std::sin(p.theta / 2.0), 2);
  const double denom = 2.0 * (1.0 + d * c);

  SpectralData out;
  out.lambda1 = one_minus_d * one_minus_c / denom;
  out.lambda2 = (1.0 + d) * (1.0 + c) / denom;

  // Closed forms of |d e1/ds|^2 and |d e2/ds|^2 after cancelling the
  // normalization-derivative terms analytically.
  const double var16 = 16.0 * p.sigma * p.sigma;
  const double one_minus_d2 = -std::expm1(-2.0 * u);
  out.a3 = std::sqrt(2.0 * d * sinh_minus_identity(u) / (var16 * one_minus_d * one_minus_d));
  out.a4 = std::sqrt((one_minus_d2 + 2.0 * u * d) / (var16 * (1.0 + d) * (1.0 + d)));
  return out;
}

}  // namespace superres
