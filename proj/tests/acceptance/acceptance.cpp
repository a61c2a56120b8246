// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Uses only the public C interface; criterion 12 drives the
// command-line tool given as argv[1] and writes into argv[2].
#include <superres/superres.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failing check.
struct Check {
  Outcome out;
  void require(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
  void ok(sr_status st, const char* call) {
    require(st == SR_OK, std::string(call) + ": " + sr_last_error_message());
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double linspace(double lo, double hi, int n, int i) { return n == 1 ? lo : (i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1)); }

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double f_gamma(Check& c, double s, double gamma) {
  sr_fi_record r{};
  c.ok(sr_f_tot_coherence(s, 1.0, gamma, &r), "sr_f_tot_coherence");
  return r.f_tot;
}

double f_conc(Check& c, double s, double conc) {
  sr_fi_record r{};
  c.ok(sr_f_tot_concurrence(s, 1.0, conc, &r), "sr_f_tot_concurrence");
  return r.f_tot;
}

double h_theta(Check& c, double s, double theta) {
  const sr_params p{s, 1.0, theta, 0.0};
  sr_precision_pair h{};
  c.ok(sr_precision(&p, &h), "sr_precision");
  return h.h_s;
}

Outcome incoherent_anchor() {
  Check c;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, std::abs(f_gamma(c, linspace(1e-3, 5.0, 100, i), 0.0) - 0.25));
  c.require(worst < 1e-12, fmt("max |f_tot - 0.25| = %.3e", worst));
  if (c.out.pass) c.out.detail = fmt("max |error| = %.1e", worst);
  return c.out;
}

Outcome rayleigh_resurgence() {
  Check c;
  const double tiny = f_gamma(c, 1e-3, 1.0);
  const double at03 = f_gamma(c, 0.3, 1.0);
  c.require(tiny < 1e-5, fmt("f_tot(1e-3, 1) = %.3e", tiny));
  c.require(std::abs(at03 - 0.0055934) <= 1e-7, fmt("f_tot(0.3, 1) = %.9f", at03));
  // Oracle confirmation of the pinned value.
  const sr_params p{0.3, 1.0, 0.0, 0.0};
  double oracle = 0.0;
  c.ok(sr_numeric_weighted_fi(&p, nullptr, &oracle), "sr_numeric_weighted_fi");
  c.require(std::abs(oracle - at03) < 1e-8, fmt("oracle %.9f vs analytic %.9f", oracle, at03));
  if (c.out.pass) c.out.detail = fmt("f(1e-3)=%.2e f(0.3)=%.7f", tiny, at03);
  return c.out;
}

Outcome concurrence_coherence_equivalence() {
  Check c;
  double worst = 0.0, at_s = 0.0, at_theta = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = linspace(1e-3, 5.0, 100, i);
    // sqrt(1 - d^2), evaluated without the cancellation in 1 - d*d.
    double cmax = 0.0;
    c.ok(sr_max_concurrence(s, 1.0, &cmax), "sr_max_concurrence");
    for (int j = 0; j < 100; ++j) {
      const double th = linspace(0.0, kPi / 2, 100, j);
      const double g = std::cos(th);
      const double conc = std::sin(th) * cmax;  // C^2 = (1 - gamma^2)(1 - d^2)
      const double diff = std::abs(f_conc(c, s, conc) - f_gamma(c, s, g));
      if (diff > worst) {
        worst = diff;
        at_s = s;
        at_theta = th;
      }
    }
  }
  c.require(worst < 1e-12, fmt("max |F_C - F_gamma| = %.3e at s=%.4g theta=%.4g", worst, at_s, at_theta));
  if (c.out.pass) c.out.detail = fmt("max |F_C - F_gamma| = %.1e", worst);
  return c.out;
}

Outcome monotonicity() {
  Check c;
  int violations = 0;
  for (double s : {0.3, 0.5, 1.0}) {
    double cmax = 0.0;
    c.ok(sr_max_concurrence(s, 1.0, &cmax), "sr_max_concurrence");
    double prev_c = -INFINITY, prev_g = INFINITY;
    for (int k = 0; k < 100; ++k) {
      const double fc = f_conc(c, s, linspace(0.0, cmax, 100, k));
      const double fg = f_gamma(c, s, linspace(0.0, 1.0, 100, k));
      if (fc < prev_c) ++violations;
      if (fg > prev_g) ++violations;
      prev_c = fc;
      prev_g = fg;
    }
  }
  c.require(violations == 0, fmt("%.0f violations", violations));
  if (c.out.pass) c.out.detail = "no violations";
  return c.out;
}

Outcome qfim_anchor() {
  Check c;
  const double s = 2.0, sg = 1.0;
  sr_overlap_triple t{};
  c.ok(sr_overlap(s, sg, &t), "sr_overlap");
  const double d = t.d;
  const double want_ss = 1 / (4 * sg * sg), want_tt = 1 - d * d, want_st = d * s / (4 * sg * sg);
  const double want_h = want_ss - d * d * s * s / (16 * std::pow(sg, 4) * (1 - d * d));
  const sr_params p{s, sg, kPi / 2, 0.0};
  sr_qfim2 q{};
  sr_precision_pair h{};
  c.ok(sr_qfim(&p, &q), "sr_qfim");
  c.ok(sr_precision(&p, &h), "sr_precision");
  c.require(std::abs(q.f_ss - want_ss) <= 1e-9, fmt("f_ss %.10f vs %.10f", q.f_ss, want_ss));
  c.require(std::abs(q.f_tt - want_tt) <= 1e-9, fmt("f_tt %.10f vs %.10f", q.f_tt, want_tt));
  c.require(std::abs(q.f_st - want_st) <= 1e-9, fmt("f_st %.10f vs %.10f", q.f_st, want_st));
  c.require(std::abs(h.h_s - want_h) <= 1e-9, fmt("h_s %.10f vs %.10f", h.h_s, want_h));
  if (c.out.pass) c.out.detail = fmt("(%.7f, %.7f, %.7f, ", q.f_ss, q.f_tt, q.f_st) + fmt("%.7f)", h.h_s);
  return c.out;
}

Outcome oracle_equivalence() {
  Check c;
  double worst = 0.0;
  sr_oracle_settings o;
  sr_oracle_settings_default(&o);
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    for (double th : {kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}) {
      const sr_params p{s, 1.0, th, 0.0};
      sr_qfim2 a{};
      sr_numeric_qfim_report n{};
      c.ok(sr_qfim(&p, &a), "sr_qfim");
      c.ok(sr_numeric_qfim(&p, &o, &n), "sr_numeric_qfim");
      worst = std::max({worst, rel(a.f_ss, n.qfim.f_ss), rel(a.f_tt, n.qfim.f_tt), rel(a.f_st, n.qfim.f_st)});
    }
  }
  c.require(worst < 1e-6, fmt("max relative error %.3e", worst));
  if (c.out.pass) c.out.detail = fmt("max relative error %.1e", worst);
  return c.out;
}

Outcome optimality() {
  Check c;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> us(1e-3, 5.0), ut(0.0, kPi / 2), usg(0.5, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double sigma = usg(rng);
    const sr_params p{us(rng) * sigma, sigma, ut(rng), 0.0};
    double v = 0.0;
    c.ok(sr_commutator_expectation(&p, &v), "sr_commutator_expectation");
    worst = std::max(worst, std::abs(v));
  }
  c.require(worst < 1e-10, fmt("max |Tr(rho[L_s, L_theta])| = %.3e", worst));
  if (c.out.pass) c.out.detail = fmt("max |value| = %.1e", worst);
  return c.out;
}

Outcome nuisance_invariance() {
  Check c;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double s = linspace(0.05, 5.0, 50, i);
    for (int j = 0; j < 10; ++j) {
      const double th = linspace(0.0, kPi / 2, 10, j);
      const sr_params p{s, 1.0, th, 0.0};
      double conc = 0.0;
      c.ok(sr_concurrence_paper(&p, &conc), "sr_concurrence_paper");
      sr_precision_pair ht{}, hg{}, hc{};
      c.ok(sr_precision(&p, &ht), "sr_precision");
      c.ok(sr_precision_gamma(s, 1.0, std::cos(th), &hg), "sr_precision_gamma");
      c.ok(sr_precision_concurrence(s, 1.0, conc, &hc), "sr_precision_concurrence");
      worst = std::max({worst, std::abs(ht.h_s - hg.h_s), std::abs(ht.h_s - hc.h_s), std::abs(hg.h_s - hc.h_s)});
    }
  }
  c.require(worst < 1e-9, fmt("max pairwise |dh_s| = %.3e", worst));
  if (c.out.pass) c.out.detail = fmt("max pairwise difference %.1e", worst);
  return c.out;
}

Outcome precision_claims() {
  Check c;
  double min_h = INFINITY;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      min_h = std::min(min_h, h_theta(c, linspace(0.05, 5.0, 100, i), linspace(0.05, kPi / 2, 100, j)));
    }
  }
  c.require(min_h > 0.0, fmt("min h_s = %.3e", min_h));
  double max_small = 0.0;
  for (int j = 0; j < 100; ++j) {
    max_small = std::max(max_small, h_theta(c, 1e-3, linspace(0.0, kPi / 2, 100, j)));
    sr_precision_pair h{};
    c.ok(sr_precision_gamma(1e-3, 1.0, linspace(0.0, 1.0, 100, j), &h), "sr_precision_gamma");
    max_small = std::max(max_small, h.h_s);
  }
  c.require(max_small < 1e-5, fmt("max h_s at s=1e-3 = %.3e", max_small));
  if (c.out.pass) c.out.detail = fmt("min h_s = %.2e, max h_s(1e-3) = %.2e", min_h, max_small);
  return c.out;
}

Outcome spectral_correction() {
  Check c;
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    const sr_params p{s, 1.0, kPi / 4, 0.0};
    sr_spectral_data sp{};
    double a3 = 0.0, a4 = 0.0;
    c.ok(sr_spectral(&p, &sp), "sr_spectral");
    c.ok(sr_numeric_eigvec_derivative_norms(s, 1.0, nullptr, &a3, &a4), "sr_numeric_eigvec_derivative_norms");
    worst = std::max({worst, rel(sp.a3, a3), rel(sp.a4, a4)});
  }
  c.require(worst < 1e-6, fmt("max relative error %.3e", worst));
  if (c.out.pass) c.out.detail = fmt("max relative error %.1e", worst);
  return c.out;
}

Outcome weighted_fi_calibration() {
  Check c;
  double worst[2] = {0.0, 0.0};
  const sr_weighted_fi_variant variants[2] = {SR_WEIGHTED_FI_QUANTUM_ONLY, SR_WEIGHTED_FI_QUANTUM_PLUS_WEIGHT};
  for (int i = 0; i < 20; ++i) {
    const double s = linspace(0.05, 5.0, 20, i);
    for (int j = 0; j < 20; ++j) {
      const double th = linspace(0.0, kPi / 2, 20, j);
      const double target = f_gamma(c, s, std::cos(th));
      const sr_params p{s, 1.0, th, 0.0};
      for (int v = 0; v < 2; ++v) {
        double w = 0.0;
        c.ok(sr_weighted_fi_reconstruct(&p, variants[v], &w), "sr_weighted_fi_reconstruct");
        worst[v] = std::max(worst[v], std::abs(w - target));
      }
    }
  }
  const bool q = worst[0] < 1e-9, qw = worst[1] < 1e-9;
  c.require(q != qw, fmt("quantum-only %.2e, quantum-plus-weight %.2e", worst[0], worst[1]));
  const sr_weighted_fi_variant matched = q ? variants[0] : variants[1];
  c.require(sr_calibrated_weighted_fi_variant() == matched, "documented variant differs from the matching one");
  if (c.out.pass) {
    c.out.detail = std::string(q ? "quantum-only" : "quantum-plus-weight") +
                   fmt(" matches (%.1e); other deviates by %.1e", q ? worst[0] : worst[1], q ? worst[1] : worst[0]);
  }
  return c.out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli, const std::string& workdir) {
  Check c;
  if (cli.empty()) {
    c.require(false, "no command-line tool path given");
    return c.out;
  }
  const std::string a = workdir + "/acceptance_fig1c_a.csv", b = workdir + "/acceptance_fig1c_b.csv";
  for (const auto& path : {a, b}) {
    std::remove(path.c_str());
    const std::string cmd = "\"" + cli + "\" figure fig1c --out \"" + path + "\"";
    const int rc = std::system(cmd.c_str());
    c.require(rc == 0, "command failed: " + cmd);
  }
  const std::string x = slurp(a), y = slurp(b);
  c.require(!x.empty(), "empty output");
  c.require(x == y, "outputs differ");
  if (c.out.pass) c.out.detail = std::to_string(x.size()) + " identical bytes";
  return c.out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string workdir = argc > 2 ? argv[2] : ".";

  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"incoherent anchor", 1, incoherent_anchor},
      {"Rayleigh-curse resurgence", 1, rayleigh_resurgence},
      {"concurrence/coherence form equivalence", 5, concurrence_coherence_equivalence},
      {"monotonicity in C and gamma", 2, monotonicity},
      {"QFIM anchor at orthogonal auxiliary states", 1, qfim_anchor},
      {"analytic vs oracle QFIM", 30, oracle_equivalence},
      {"single-measurement optimality", 2, optimality},
      {"nuisance reparametrization invariance", 5, nuisance_invariance},
      {"precision positivity and small-s vanishing", 5, precision_claims},
      {"eigenvector-derivative coefficients", 10, spectral_correction},
      {"weighted-FI calibration", 10, weighted_fi_calibration},
      {"figure determinism", 5, [&] { return determinism(cli, workdir); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = criteria[i].run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && secs > criteria[i].budget_s) {
      o.pass = false;
      o.detail += fmt(" (over the %.0f s budget)", criteria[i].budget_s);
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-46s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
