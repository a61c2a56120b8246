#include "core/numeric_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"

namespace superres::oracle {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// PSF amplitude h(x), h^2 a unit-area Gaussian of width sigma.
double psf(double x, double sigma) {
  const double norm = std::pow(2.0 * kPi * sigma * sigma, -0.25);
  return norm * std::exp(-x * x / (4.0 * sigma * sigma));
}

Eigen::VectorXd sample_psf(const Grid& g, double center, double sigma) {
  Eigen::VectorXd v(g.n_points);
  for (int i = 0; i < g.n_points; ++i) v[i] = psf(g.x(i) - center, sigma);
  return v;
}

cd weighted_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& w) {
  if (w.size() == 0) return a.dot(b);
  return (a.conjugate().array() * w.array().cast<cd>() * b.array()).sum();
}

double resolve_step(double fd_step, double sigma) {
  const double step = fd_step > 0.0 ? fd_step : 1e-5 * sigma;
  if (step < 1e-6 * sigma * (1.0 - 1e-12) || step > 1e-4 * sigma * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "finite-difference step " << step << " outside [1e-6, 1e-4] sigma";
    throw ConfigError(os.str());
  }
  return step;
}

Grid settings_grid(const ModelParams& p, const OracleSettings& st) {
  const double hw = st.halfwidth > 0.0 ? st.halfwidth : 8.0 * p.sigma + p.s;
  return make_grid(st.n_points, hw);
}

// Grid (x) auxiliary two-level state of the two-source field, normalized.
// Column 0 multiplies |phi_1>, column 1 multiplies |phi_1_perp>. No domain
// checks: finite-difference stencils step slightly outside theta in [0, pi/2].
Eigen::MatrixXcd bipartite_state(double s, double theta, double phi, double sigma, const Grid& g,
                                 const Eigen::VectorXd& w) {
  const Eigen::VectorXd hp = sample_psf(g, -s / 2.0, sigma);
  const Eigen::VectorXd hm = sample_psf(g, s / 2.0, sigma);
  const cd phase = std::polar(1.0, phi);
  const double r2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd psi(g.n_points, 2);
  psi.col(0) = r2 * (hp.cast<cd>() + phase * std::cos(theta) * hm.cast<cd>());
  psi.col(1) = r2 * phase * std::sin(theta) * hm.cast<cd>();
  double n2 = 0.0;
  for (int j = 0; j < 2; ++j) n2 += weighted_inner(psi.col(j), psi.col(j), w).real();
  return psi / std::sqrt(n2);
}

// Weighted modified Gram-Schmidt (two passes). Candidates whose residual
// falls below `drop` times their original norm are discarded.
Eigen::MatrixXcd orthonormal_span(const std::vector<Eigen::VectorXcd>& candidates, const Eigen::VectorXd& w,
                                  double drop) {
  std::vector<Eigen::VectorXcd> basis;
  for (Eigen::VectorXcd v : candidates) {
    const double n0 = std::sqrt(weighted_inner(v, v, w).real());
    if (n0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= weighted_inner(q, v, w) * q;
    }
    const double n1 = std::sqrt(weighted_inner(v, v, w).real());
    if (n1 > drop * n0) basis.push_back(v / n1);
  }
  Eigen::MatrixXcd q(w.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = basis[k];
  return q;
}

// rho = sum_j |psi_j><psi_j| expressed in the orthonormal basis q.
Eigen::MatrixXcd project_rho(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& psi, const Eigen::VectorXd& w) {
  const Eigen::MatrixXcd coeff = q.adjoint() * (w.cast<cd>().asDiagonal() * psi);
  return coeff * coeff.adjoint();
}

}  // namespace

Eigen::VectorXd Grid::weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_points, spacing());
  w[0] *= 0.5;
  w[n_points - 1] *= 0.5;
  return w;
}

Grid make_grid(int n_points, double halfwidth) {
  if (!is_power_of_two(n_points) || n_points < 1024) {
    throw ConfigError("grid point count must be a power of two >= 1024, got " + std::to_string(n_points));
  }
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) throw ConfigError("grid halfwidth must be positive");
  return Grid{halfwidth, n_points};
}

Grid default_grid(double s, double sigma) { return make_grid(4096, 8.0 * sigma + s); }

double GridField::norm2() const { return inner(*this); }

double GridField::inner(const GridField& other) const {
  return (amplitudes.array() * grid.weights().array() * other.amplitudes.array()).sum();
}

SourcePair make_sources(double s, double sigma, const Grid& grid) {
  if (!(sigma > 0.0) || !(s >= 0.0)) throw DomainError("make_sources needs sigma > 0 and s >= 0");
  if (grid.halfwidth < 8.0 * sigma + s) {
    std::ostringstream os;
    os << "grid halfwidth " << grid.halfwidth << " is below 8 sigma + s = " << 8.0 * sigma + s;
    throw ConfigError(os.str());
  }
  return SourcePair{GridField{grid, sample_psf(grid, -s / 2.0, sigma)},
                    GridField{grid, sample_psf(grid, s / 2.0, sigma)}};
}

double numeric_overlap(double s, double sigma, const OracleSettings& st) {
  const Grid g = settings_grid(ModelParams{s, sigma, 0.0, 0.0}, st);
  const SourcePair src = make_sources(s, sigma, g);
  return src.plus.inner(src.minus);
}

NumericQfimReport numeric_qfim(const ModelParams& p, const OracleSettings& st) {
  validate(p);
  if (p.s == 0.0) throw DegenerateError("numeric_qfim requires s > 0");
  const double h = resolve_step(st.fd_step, p.sigma);
  const double ht = h / p.sigma;  // theta step, dimensionless
  const Grid g = settings_grid(p, st);
  make_sources(p.s, p.sigma, g);  // width check
  const Eigen::VectorXd w = g.weights();

  auto state = [&](double s, double theta) { return bipartite_state(s, theta, p.phi, p.sigma, g, w); };
  const Eigen::MatrixXcd psi = state(p.s, p.theta);
  const Eigen::MatrixXcd s_plus = state(p.s + h, p.theta);
  const Eigen::MatrixXcd s_minus = state(p.s - h, p.theta);
  const Eigen::MatrixXcd t_plus = state(p.s, p.theta + ht);
  const Eigen::MatrixXcd t_minus = state(p.s, p.theta - ht);

  // Everything lives (to O(h^2)) in span{psi_j, d_s psi_j, d_theta psi_j}.
  std::vector<Eigen::VectorXcd> cand;
  for (int j = 0; j < 2; ++j) cand.push_back(psi.col(j));
  for (int j = 0; j < 2; ++j) cand.push_back(s_plus.col(j) - s_minus.col(j));
  for (int j = 0; j < 2; ++j) cand.push_back(t_plus.col(j) - t_minus.col(j));
  const Eigen::MatrixXcd q = orthonormal_span(cand, w, 1e-8);

  const Eigen::MatrixXcd rho = project_rho(q, psi, w);
  const Eigen::MatrixXcd d_s = (project_rho(q, s_plus, w) - project_rho(q, s_minus, w)) / (2.0 * h);
  const Eigen::MatrixXcd d_t = (project_rho(q, t_plus, w) - project_rho(q, t_minus, w)) / (2.0 * ht);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  const Eigen::VectorXd lam = eig.eigenvalues();
  const Eigen::MatrixXcd u = eig.eigenvectors();
  const Eigen::MatrixXcd a_s = u.adjoint() * d_s * u;
  const Eigen::MatrixXcd a_t = u.adjoint() * d_t * u;

  NumericQfimReport rep;
  rep.rank = static_cast<int>(q.cols());
  bool amplified = false;
  auto element = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    // Pairs (k, l) and (l, k) are added together so that swapping a and b
    // reproduces the result bit for bit.
    double f = 0.0;
    const Eigen::Index n = lam.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = k; l < n; ++l) {
        const double den = lam[k] + lam[l];
        if (!(den > st.rank_cutoff)) continue;
        if (den < 1e-10) amplified = true;
        const double t_kl = (a(k, l) * b(l, k)).real();
        const double t_lk = (a(l, k) * b(k, l)).real();
        f += (k == l ? 2.0 * t_kl : 2.0 * (t_kl + t_lk)) / den;
      }
    }
    return f;
  };
  rep.qfim.f_ss = element(a_s, a_s);
  rep.qfim.f_tt = element(a_t, a_t);
  rep.qfim.f_st = element(a_s, a_t);
  rep.f_ts = element(a_t, a_s);
  rep.qfim.tag = Nuisance::Theta;
  if (amplified) {
    std::ostringstream os;
    os << "rank cutoff " << st.rank_cutoff
       << " admits eigenvalue pairs below 1e-10; round-off in d rho is amplified";
    rep.diagnostics.push_back(os.str());
  }
  return rep;
}

double numeric_pure_qfi(const SampledFamily& fam, double s, double fd_step) {
  const Eigen::VectorXcd psi = fam.state(s);
  const Eigen::VectorXcd dpsi = (fam.state(s + fd_step) - fam.state(s - fd_step)) / (2.0 * fd_step);
  // d rho = |dpsi><psi| + |psi><dpsi|, a rank-2 operator:
  // Tr[(d rho)^2] = 2 |dpsi|^2 |psi|^2 + 2 Re(<psi|dpsi>^2).
  const double n2 = weighted_inner(psi, psi, fam.weights).real();
  const double dd = weighted_inner(dpsi, dpsi, fam.weights).real();
  const cd pd = weighted_inner(psi, dpsi, fam.weights);
  return 2.0 * (2.0 * dd * n2 + 2.0 * (pd * pd).real());
}

double numeric_pure_qfi_overlap_form(const SampledFamily& fam, double s, double fd_step) {
  const Eigen::VectorXcd psi = fam.state(s);
  const Eigen::VectorXcd dpsi = (fam.state(s + fd_step) - fam.state(s - fd_step)) / (2.0 * fd_step);
  const double dd = weighted_inner(dpsi, dpsi, fam.weights).real();
  const double pd = std::abs(weighted_inner(psi, dpsi, fam.weights));
  return 4.0 * (dd - pd * pd);
}

SampledFamily displaced_gaussian_family(double sigma, const Grid& grid) {
  return SampledFamily{[=](double s) -> Eigen::VectorXcd { return sample_psf(grid, s / 2.0, sigma).cast<cd>(); },
                       grid.weights()};
}

SampledFamily symmetric_superposition_family(double sigma, const Grid& grid) {
  const Eigen::VectorXd w = grid.weights();
  return SampledFamily{[=](double s) -> Eigen::VectorXcd {
                         const Eigen::VectorXd v = sample_psf(grid, -s / 2.0, sigma) + sample_psf(grid, s / 2.0, sigma);
                         const double n = std::sqrt((v.array() * w.array() * v.array()).sum());
                         return (v / n).cast<cd>();
                       },
                       w};
}

SampledFamily branch_family_grid(double theta, double sigma, const Grid& grid, int branch) {
  const Eigen::VectorXd w = grid.weights();
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return SampledFamily{[=](double s) -> Eigen::VectorXcd {
                         const Eigen::VectorXd hp = sample_psf(grid, -s / 2.0, sigma);
                         const Eigen::VectorXd hm = sample_psf(grid, s / 2.0, sigma);
                         const Eigen::VectorXd v = branch == 1 ? Eigen::VectorXd(hp + c * hm) : Eigen::VectorXd(sn * hm);
                         const double n = std::sqrt((v.array() * w.array() * v.array()).sum());
                         return (v / n).cast<cd>();
                       },
                       w};
}

SampledFamily branch_family_hg(double theta, double sigma, int n_max, int branch) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return SampledFamily{[=](double s) -> Eigen::VectorXcd {
                         const HgCoefficients k = hg_coefficients(s, sigma, n_max);
                         const Eigen::VectorXd v =
                             branch == 1 ? Eigen::VectorXd(k.plus + c * k.minus) : Eigen::VectorXd(sn * k.minus);
                         return (v / v.norm()).cast<cd>();
                       },
                       Eigen::VectorXd()};
}

double numeric_concurrence(const ModelParams& p, const OracleSettings& st) {
  validate(p);
  const Grid g = settings_grid(p, st);
  make_sources(p.s, p.sigma, g);
  const Eigen::VectorXd w = g.weights();
  const Eigen::MatrixXcd psi = bipartite_state(p.s, p.theta, p.phi, p.sigma, g, w);
  // Auxiliary reduced state rho_r = Psi^dagger W Psi (2x2, unit trace).
  const Eigen::Matrix2cd rr = psi.adjoint() * w.cast<cd>().asDiagonal() * psi;
  // 1 - Tr rho_r^2 = 2 det rho_r for a 2x2 unit-trace state. The Gram form
  // |u|^2|v|^2 - |<u,v>|^2 has a round-off floor of a few ulps of |u|^2|v|^2.
  const double uu = rr(0, 0).real();
  const double vv = rr(1, 1).real();
  double det = uu * vv - std::norm(rr(0, 1));
  if (det < 8.0 * std::numeric_limits<double>::epsilon() * uu * vv) det = 0.0;
  const double linear_entropy = 2.0 * det;
  return std::sqrt(2.0 * linear_entropy);
}

EigvecDerivativeNorms numeric_eigvec_derivative_norms(double s, double sigma, const OracleSettings& st) {
  if (!(s > 0.0)) throw DegenerateError("eigenvector derivatives need s > 0");
  const double h = resolve_step(st.fd_step, sigma);
  const Grid g = settings_grid(ModelParams{s, sigma, 0.0, 0.0}, st);
  make_sources(s, sigma, g);
  const Eigen::VectorXd w = g.weights();
  auto eigvec = [&](double sep, double sign) {
    const Eigen::VectorXd v = sample_psf(g, sep / 2.0, sigma) + sign * sample_psf(g, -sep / 2.0, sigma);
    return Eigen::VectorXd(v / std::sqrt((v.array() * w.array() * v.array()).sum()));
  };
  auto deriv_norm = [&](double sign) {
    const Eigen::VectorXd dv = (eigvec(s + h, sign) - eigvec(s - h, sign)) / (2.0 * h);
    return std::sqrt((dv.array() * w.array() * dv.array()).sum());
  };
  return EigvecDerivativeNorms{deriv_norm(-1.0), deriv_norm(+1.0)};
}

namespace {

// c_n(a) = exp(-a^2/2) a^n / sqrt(n!) for n = 0..n_max.
Eigen::VectorXd coherent_coefficients(double a, int n_max) {
  Eigen::VectorXd c(n_max + 1);
  c[0] = std::exp(-a * a / 2.0);
  for (int n = 1; n <= n_max; ++n) c[n] = c[n - 1] * a / std::sqrt(static_cast<double>(n));
  return c;
}

Eigen::VectorXd alternate_signs(Eigen::VectorXd v) {
  for (Eigen::Index n = 1; n < v.size(); n += 2) v[n] = -v[n];
  return v;
}

}  // namespace

HgCoefficients hg_coefficients(double s, double sigma, int n_max) {
  if (n_max < 20) throw ConfigError("Hermite-Gauss expansion needs n_max >= 20");
  if (!(sigma > 0.0) || !(s >= 0.0)) throw DomainError("hg_coefficients needs sigma > 0 and s >= 0");
  const double a = s / (4.0 * sigma);
  const Eigen::VectorXd c = coherent_coefficients(a, n_max);
  const double residual = 1.0 - c.squaredNorm();
  if (residual > 1e-12) {
    std::ostringstream os;
    os << "n_max = " << n_max << " too small: truncation residual " << residual;
    throw ConfigError(os.str());
  }
  return HgCoefficients{alternate_signs(c), c};
}

HgCoefficients hg_coefficient_derivatives(double s, double sigma, int n_max) {
  if (n_max < 20) throw ConfigError("Hermite-Gauss expansion needs n_max >= 20");
  const double a = s / (4.0 * sigma);
  const Eigen::VectorXd c = coherent_coefficients(a, n_max);
  // dc_n/da = sqrt(n) c_{n-1} - a c_n
  Eigen::VectorXd dc(n_max + 1);
  dc[0] = -a * c[0];
  for (int n = 1; n <= n_max; ++n) dc[n] = std::sqrt(static_cast<double>(n)) * c[n - 1] - a * c[n];
  dc /= 4.0 * sigma;
  // c_n(-a) = (-1)^n c_n(a), so d/ds c_n(-a) = (-1)^n dc_n/da * da/ds.
  return HgCoefficients{alternate_signs(dc), dc};
}

int hg_required_n_max(double s, double sigma) {
  const double a = s / (4.0 * sigma);
  double c = std::exp(-a * a / 2.0);
  double sum = c * c;
  int n = 0;
  while (n < 20 || (1.0 - sum > 1e-14 && n < 4096)) {
    ++n;
    c *= a / std::sqrt(static_cast<double>(n));
    sum += c * c;
    if (n > a * a && c * c < 1e-20 && n >= 20) break;
  }
  return std::max(20, n + 5);
}

}  // namespace superres::oracle

namespace superres::oracle {

double numeric_weighted_fi(const ModelParams& p, const OracleSettings& st) {
  validate(p);
  if (p.phi != 0.0) throw DomainError("numeric_weighted_fi requires phi = 0");
  const double h = resolve_step(st.fd_step, p.sigma);
  const Grid g = settings_grid(p, st);
  const SourcePair src = make_sources(p.s, p.sigma, g);
  const Eigen::VectorXd w = g.weights();
  const double c = std::cos(p.theta);
  const double sn = std::sin(p.theta);
  const Eigen::VectorXd phi1 = (src.plus.amplitudes + c * src.minus.amplitudes) / std::sqrt(2.0);
  const Eigen::VectorXd phi2 = sn * src.minus.amplitudes / std::sqrt(2.0);
  const double n1 = (phi1.array() * w.array() * phi1.array()).sum();
  const double n2 = (phi2.array() * w.array() * phi2.array()).sum();
  double f = n1 * numeric_pure_qfi(branch_family_grid(p.theta, p.sigma, g, 1), p.s, h);
  if (n2 > 0.0) f += n2 * numeric_pure_qfi(branch_family_grid(p.theta, p.sigma, g, 2), p.s, h);
  return f;
}

}  // namespace superres::oracle
