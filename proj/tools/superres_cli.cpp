// superres command-line front end. Links only against the C API.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "superres/superres.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

struct Options {
  std::optional<double> sigma;
  std::optional<double> phi;
  std::string nuisance = "theta";
  std::optional<double> s_min, s_max, n_min, n_max;
  std::optional<int> s_steps, n_steps;
  std::string format = "csv";
  std::string out;
  bool oracle = false;
  std::optional<int> grid_points;
  std::optional<double> grid_halfwidth;
  std::optional<double> fd_step;
  std::string preset;
};

int exit_code_for(sr_status st) {
  if (st == SR_OK) return kExitOk;
  if (st == SR_ERR_IO) return kExitIo;
  return kExitUsage;
}

int report(sr_status st) {
  std::cerr << "superres: " << sr_status_name(st) << ": " << sr_last_error_message() << "\n";
  return exit_code_for(st);
}

// Owning wrappers for the opaque handles.
struct SpecHandle {
  sr_sweep_spec* ptr = nullptr;
  ~SpecHandle() { sr_sweep_spec_destroy(ptr); }
};
struct ResultHandle {
  sr_sweep_result* ptr = nullptr;
  ~ResultHandle() { sr_sweep_result_destroy(ptr); }
};

void add_common(CLI::App* sub, Options& o, bool ranges) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "Output file (default: stdout)");
  sub->add_flag("--oracle", o.oracle, "Cross-check every point against the numeric oracle");
  sub->add_option("--grid-points", o.grid_points, "Oracle grid points (power of two >= 1024)");
  sub->add_option("--grid-halfwidth", o.grid_halfwidth, "Oracle grid halfwidth (default 8 sigma + s)");
  sub->add_option("--fd-step", o.fd_step, "Oracle finite-difference step (default 1e-5 sigma)");
  sub->add_option("--s-steps", o.s_steps, "Points along s");
  sub->add_option("--n-steps", o.n_steps, "Points along the nuisance axis");
  if (!ranges) return;
  sub->add_option("--sigma", o.sigma, "PSF width");
  sub->add_option("--phi", o.phi, "Relative phase (closed-form modes require 0)");
  sub->add_option("--nuisance", o.nuisance, "Nuisance axis")
      ->check(CLI::IsMember({"theta", "concurrence", "coherence"}));
  sub->add_option("--s-min", o.s_min, "Smallest separation");
  sub->add_option("--s-max", o.s_max, "Largest separation");
  sub->add_option("--n-min", o.n_min, "Nuisance axis start");
  sub->add_option("--n-max", o.n_max, "Nuisance axis end");
}

sr_nuisance parse_nuisance(const std::string& n) {
  if (n == "concurrence") return SR_NUISANCE_CONCURRENCE;
  if (n == "coherence") return SR_NUISANCE_COHERENCE;
  return SR_NUISANCE_THETA;
}

int run(sr_sweep_mode mode, const Options& o, bool figure) {
  SpecHandle spec;
  sr_status st = figure ? sr_sweep_spec_from_preset(o.preset.c_str(), &spec.ptr)
                        : sr_sweep_spec_create(mode, parse_nuisance(o.nuisance), &spec.ptr);
  if (st != SR_OK) return report(st);

  const double keep = std::numeric_limits<double>::quiet_NaN();
  if (figure) {
    sr_sweep_spec_set_resolution(spec.ptr, o.s_steps.value_or(0), o.n_steps.value_or(0));
  } else {
    if (o.sigma) sr_sweep_spec_set_sigma(spec.ptr, *o.sigma);
    if (o.phi) sr_sweep_spec_set_phi(spec.ptr, *o.phi);
    sr_sweep_spec_set_s_range(spec.ptr, o.s_min.value_or(keep), o.s_max.value_or(keep), o.s_steps.value_or(0));
    sr_sweep_spec_set_nuisance_range(spec.ptr, o.n_min.value_or(keep), o.n_max.value_or(keep), o.n_steps.value_or(0));
  }
  sr_oracle_settings settings;
  sr_oracle_settings_default(&settings);
  if (o.grid_points) settings.n_points = *o.grid_points;
  if (o.grid_halfwidth) settings.halfwidth = *o.grid_halfwidth;
  if (o.fd_step) settings.fd_step = *o.fd_step;
  sr_sweep_spec_set_oracle(spec.ptr, o.oracle ? 1 : 0, &settings);

  ResultHandle result;
  st = sr_sweep_run(spec.ptr, &result.ptr);
  if (st != SR_OK) return report(st);

  const sr_format format = o.format == "json" ? SR_FORMAT_JSON : SR_FORMAT_CSV;
  if (o.out.empty()) {
    char* text = nullptr;
    size_t length = 0;
    st = sr_sweep_result_render(result.ptr, format, &text, &length);
    if (st != SR_OK) return report(st);
    std::fwrite(text, 1, length, stdout);
    sr_string_free(text);
    if (std::fflush(stdout) != 0) {
      std::cerr << "superres: I/O error: failed writing stdout\n";
      return kExitIo;
    }
  } else {
    st = sr_sweep_result_emit(result.ptr, format, o.out.c_str());
    if (st != SR_OK) return report(st);
  }

  double delta = 0.0;
  int has_delta = 0;
  sr_sweep_result_max_oracle_delta(result.ptr, &delta, &has_delta);
  if (has_delta) {
    std::fprintf(stderr, "max relative oracle delta: %.3e (tolerance 1e-6)\n", delta);
    if (sr_sweep_result_verification_failed(result.ptr)) {
      std::cerr << "superres: verification failed\n";
      return kExitVerification;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher information and QFIM sweeps for two-point-source superresolution"};
  app.require_subcommand(1);

  Options single_o, qfim_o, verify_o, figure_o;
  auto* single = app.add_subcommand("single", "Weighted Fisher information for the separation");
  add_common(single, single_o, true);
  auto* qfim = app.add_subcommand("qfim", "Two-parameter QFIM and nuisance-corrected precisions");
  add_common(qfim, qfim_o, true);
  auto* verify = app.add_subcommand("verify", "Compare the analytic QFIM with the numeric oracle");
  add_common(verify, verify_o, true);
  auto* figure = app.add_subcommand("figure", "Generate a figure data preset");
  figure->add_option("preset", figure_o.preset, "fig1a | fig1b | fig1c | fig2a | fig2b")->required();
  add_common(figure, figure_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*single) return run(SR_MODE_SINGLE, single_o, false);
  if (*qfim) return run(SR_MODE_QFIM, qfim_o, false);
  if (*verify) return run(SR_MODE_VERIFY, verify_o, false);
  return run(SR_MODE_SINGLE, figure_o, true);
}
