#include "superres/superres.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "core/errors.hpp"
#include "core/fisher_single.hpp"
#include "core/numeric_oracle.hpp"
#include "core/qfim_two_param.hpp"
#include "core/state_model.hpp"
#include "core/sweep.hpp"

struct sr_sweep_spec {
  std::vector<superres::SweepSpec> panels;
  unsigned threads = 0;
};

struct sr_sweep_result {
  superres::SweepResult result;
};

namespace {

using namespace superres;

thread_local std::string g_last_error;
thread_local double g_last_c_max = std::numeric_limits<double>::quiet_NaN();

sr_status fail(sr_status code, const char* message) {
  g_last_error = message;
  return code;
}

// Runs `body`, translating core exceptions into status codes.
template <class F>
sr_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SR_OK;
  } catch (const OutOfReachError& e) {
    g_last_c_max = e.c_max();
    return fail(SR_ERR_OUT_OF_REACH, e.what());
  } catch (const DomainError& e) {
    return fail(SR_ERR_DOMAIN, e.what());
  } catch (const DegenerateError& e) {
    return fail(SR_ERR_DEGENERATE, e.what());
  } catch (const ContractError& e) {
    return fail(SR_ERR_CONTRACT, e.what());
  } catch (const ConfigError& e) {
    return fail(SR_ERR_CONFIG, e.what());
  } catch (const UsageError& e) {
    return fail(SR_ERR_USAGE, e.what());
  } catch (const IoError& e) {
    return fail(SR_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SR_ERR_INTERNAL, "unknown error");
  }
}

#define SR_REQUIRE(ptr) \
  if ((ptr) == nullptr) return fail(SR_ERR_NULL_ARGUMENT, "null argument: " #ptr)

ModelParams to_core(const sr_params& p) { return ModelParams{p.s, p.sigma, p.theta, p.phi}; }

Nuisance to_core(sr_nuisance n) {
  switch (n) {
    case SR_NUISANCE_THETA: return Nuisance::Theta;
    case SR_NUISANCE_CONCURRENCE: return Nuisance::Concurrence;
    case SR_NUISANCE_COHERENCE: return Nuisance::Coherence;
  }
  throw UsageError("unknown nuisance parametrization");
}

sr_nuisance to_c(Nuisance n) {
  switch (n) {
    case Nuisance::Theta: return SR_NUISANCE_THETA;
    case Nuisance::Concurrence: return SR_NUISANCE_CONCURRENCE;
    case Nuisance::Coherence: return SR_NUISANCE_COHERENCE;
  }
  return SR_NUISANCE_THETA;
}

oracle::OracleSettings to_core(const sr_oracle_settings* s) {
  oracle::OracleSettings o;
  if (s == nullptr) return o;
  o.n_points = s->n_points;
  o.halfwidth = s->halfwidth;
  o.fd_step = s->fd_step;
  o.rank_cutoff = s->rank_cutoff;
  return o;
}

sr_qfim2 to_c(const Qfim2& f) { return sr_qfim2{f.f_ss, f.f_tt, f.f_st, to_c(f.tag)}; }
sr_precision_pair to_c(const PrecisionPair& h) { return sr_precision_pair{h.h_s, h.h_nuisance}; }

void write_matrix(const Eigen::Matrix4d& m, double out[16]) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[4 * i + j] = m(i, j);
  }
}

double value_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

extern "C" {

const char* sr_version(void) { return "1.0.0"; }

const char* sr_status_name(sr_status status) {
  switch (status) {
    case SR_OK: return "ok";
    case SR_ERR_DOMAIN: return "domain error";
    case SR_ERR_DEGENERATE: return "degenerate geometry";
    case SR_ERR_OUT_OF_REACH: return "out of reach";
    case SR_ERR_CONTRACT: return "contract violation";
    case SR_ERR_CONFIG: return "configuration error";
    case SR_ERR_USAGE: return "usage error";
    case SR_ERR_IO: return "I/O error";
    case SR_ERR_NULL_ARGUMENT: return "null argument";
    case SR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sr_last_error_message(void) { return g_last_error.c_str(); }
double sr_last_error_c_max(void) { return g_last_c_max; }

sr_status sr_overlap(double s, double sigma, sr_overlap_triple* out) {
  SR_REQUIRE(out);
  return guarded([&] {
    const OverlapTriple t = overlap(s, sigma);
    *out = sr_overlap_triple{t.d, t.d1, t.d2};
  });
}

sr_status sr_coherence_of(double theta, double* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = coherence_of(theta); });
}

sr_status sr_concurrence_paper(const sr_params* p, double* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = concurrence_paper(to_core(*p)); });
}

sr_status sr_concurrence_normalized(const sr_params* p, double* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = concurrence_normalized(to_core(*p)); });
}

sr_status sr_max_concurrence(double s, double sigma, double* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = max_concurrence(s, sigma); });
}

sr_status sr_theta_from_concurrence(double s, double sigma, double concurrence, double* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = theta_from_concurrence(s, sigma, concurrence); });
}

sr_status sr_spectral(const sr_params* p, sr_spectral_data* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] {
    const SpectralData d = spectral(to_core(*p));
    *out = sr_spectral_data{d.lambda1, d.lambda2, d.a3, d.a4};
  });
}

sr_status sr_f_tot_coherence(double s, double sigma, double gamma, sr_fi_record* out) {
  SR_REQUIRE(out);
  return guarded([&] {
    const FiRecord r = f_tot_coherence(s, sigma, gamma);
    *out = sr_fi_record{r.s, r.sigma, r.theta, r.gamma, r.concurrence, r.f_tot};
  });
}

sr_status sr_f_tot_concurrence(double s, double sigma, double concurrence, sr_fi_record* out) {
  SR_REQUIRE(out);
  return guarded([&] {
    const FiRecord r = f_tot_concurrence(s, sigma, concurrence);
    *out = sr_fi_record{r.s, r.sigma, r.theta, r.gamma, r.concurrence, r.f_tot};
  });
}

sr_status sr_weighted_fi_reconstruct(const sr_params* p, sr_weighted_fi_variant variant, double* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] {
    const auto v = variant == SR_WEIGHTED_FI_QUANTUM_PLUS_WEIGHT ? WeightedFiVariant::QuantumPlusWeight
                                                                 : WeightedFiVariant::QuantumOnly;
    *out = weighted_fi_reconstruct(to_core(*p), v);
  });
}

sr_weighted_fi_variant sr_calibrated_weighted_fi_variant(void) {
  return kCalibratedWeightedFiVariant == WeightedFiVariant::QuantumOnly ? SR_WEIGHTED_FI_QUANTUM_ONLY
                                                                        : SR_WEIGHTED_FI_QUANTUM_PLUS_WEIGHT;
}

sr_status sr_rho4(const sr_params* p, double out[16]) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { write_matrix(rho4(to_core(*p)).matrix, out); });
}

sr_status sr_drho_ds(const sr_params* p, double out[16]) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { write_matrix(drho_ds(to_core(*p)), out); });
}

sr_status sr_drho_dtheta(const sr_params* p, double out[16]) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { write_matrix(drho_dtheta(to_core(*p)), out); });
}

sr_status sr_sld_pair(const sr_params* p, double l_s[16], double l_theta[16]) {
  SR_REQUIRE(p);
  SR_REQUIRE(l_s);
  SR_REQUIRE(l_theta);
  return guarded([&] {
    const SldPair l = sld_pair(to_core(*p));
    write_matrix(l.l_s, l_s);
    write_matrix(l.l_theta, l_theta);
  });
}

sr_status sr_qfim(const sr_params* p, sr_qfim2* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = to_c(qfim(to_core(*p))); });
}

sr_status sr_precision(const sr_params* p, sr_precision_pair* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = to_c(precision(to_core(*p))); });
}

sr_status sr_qfim_gamma(double s, double sigma, double gamma, sr_qfim2* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = to_c(qfim_gamma(s, sigma, gamma)); });
}

sr_status sr_precision_gamma(double s, double sigma, double gamma, sr_precision_pair* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = to_c(precision_gamma(s, sigma, gamma)); });
}

sr_status sr_qfim_concurrence(double s, double sigma, double concurrence, sr_qfim2* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = to_c(qfim_concurrence(s, sigma, concurrence)); });
}

sr_status sr_precision_concurrence(double s, double sigma, double concurrence, sr_precision_pair* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = to_c(precision_concurrence(s, sigma, concurrence)); });
}

sr_status sr_commutator_expectation(const sr_params* p, double* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = commutator_expectation(to_core(*p)); });
}

void sr_oracle_settings_default(sr_oracle_settings* out) {
  if (out == nullptr) return;
  const oracle::OracleSettings o;
  *out = sr_oracle_settings{o.n_points, o.halfwidth, o.fd_step, o.rank_cutoff};
}

sr_status sr_numeric_qfim(const sr_params* p, const sr_oracle_settings* settings, sr_numeric_qfim_report* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] {
    const oracle::NumericQfimReport r = oracle::numeric_qfim(to_core(*p), to_core(settings));
    *out = sr_numeric_qfim_report{to_c(r.qfim), r.f_ts, r.rank, static_cast<int>(r.diagnostics.size())};
    if (!r.diagnostics.empty()) g_last_error = r.diagnostics.front();
  });
}

sr_status sr_numeric_concurrence(const sr_params* p, const sr_oracle_settings* settings, double* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = oracle::numeric_concurrence(to_core(*p), to_core(settings)); });
}

sr_status sr_numeric_overlap(double s, double sigma, const sr_oracle_settings* settings, double* out) {
  SR_REQUIRE(out);
  return guarded([&] { *out = oracle::numeric_overlap(s, sigma, to_core(settings)); });
}

sr_status sr_numeric_eigvec_derivative_norms(double s, double sigma, const sr_oracle_settings* settings, double* a3,
                                             double* a4) {
  SR_REQUIRE(a3);
  SR_REQUIRE(a4);
  return guarded([&] {
    const auto n = oracle::numeric_eigvec_derivative_norms(s, sigma, to_core(settings));
    *a3 = n.a3;
    *a4 = n.a4;
  });
}

sr_status sr_numeric_weighted_fi(const sr_params* p, const sr_oracle_settings* settings, double* out) {
  SR_REQUIRE(p);
  SR_REQUIRE(out);
  return guarded([&] { *out = oracle::numeric_weighted_fi(to_core(*p), to_core(settings)); });
}

sr_status sr_sweep_spec_create(sr_sweep_mode mode, sr_nuisance nuisance, sr_sweep_spec** out) {
  SR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    SweepMode m = SweepMode::Single;
    switch (mode) {
      case SR_MODE_SINGLE: m = SweepMode::Single; break;
      case SR_MODE_QFIM: m = SweepMode::Qfim; break;
      case SR_MODE_VERIFY: m = SweepMode::Verify; break;
      default: throw UsageError("unknown sweep mode");
    }
    auto spec = std::make_unique<sr_sweep_spec>();
    spec->panels.push_back(default_spec(m, to_core(nuisance)));
    *out = spec.release();
  });
}

sr_status sr_sweep_spec_from_preset(const char* name, sr_sweep_spec** out) {
  SR_REQUIRE(name);
  SR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto spec = std::make_unique<sr_sweep_spec>();
    spec->panels = figure_preset(name).panels;
    *out = spec.release();
  });
}

void sr_sweep_spec_destroy(sr_sweep_spec* spec) { delete spec; }

sr_status sr_sweep_spec_set_sigma(sr_sweep_spec* spec, double sigma) {
  SR_REQUIRE(spec);
  for (auto& p : spec->panels) p.sigma = sigma;
  return SR_OK;
}

sr_status sr_sweep_spec_set_phi(sr_sweep_spec* spec, double phi) {
  SR_REQUIRE(spec);
  for (auto& p : spec->panels) p.phi = phi;
  return SR_OK;
}

namespace {

void update_range(Range& r, double min, double max, int steps) {
  if (!std::isnan(min)) r.min = min;
  if (!std::isnan(max)) r.max = max;
  if (steps > 0) r.steps = steps;
}

}  // namespace

sr_status sr_sweep_spec_set_s_range(sr_sweep_spec* spec, double min, double max, int steps) {
  SR_REQUIRE(spec);
  for (auto& p : spec->panels) update_range(p.s_range, min, max, steps);
  return SR_OK;
}

sr_status sr_sweep_spec_set_nuisance_range(sr_sweep_spec* spec, double min, double max, int steps) {
  SR_REQUIRE(spec);
  for (auto& p : spec->panels) update_range(p.nuisance_range, min, max, steps);
  return SR_OK;
}

sr_status sr_sweep_spec_set_resolution(sr_sweep_spec* spec, int s_steps, int nuisance_steps) {
  SR_REQUIRE(spec);
  for (auto& p : spec->panels) {
    if (s_steps > 0 && p.s_range.steps > 1) p.s_range.steps = s_steps;
    if (nuisance_steps > 0 && p.nuisance_range.steps > 1) p.nuisance_range.steps = nuisance_steps;
  }
  return SR_OK;
}

sr_status sr_sweep_spec_set_oracle(sr_sweep_spec* spec, int enabled, const sr_oracle_settings* settings) {
  SR_REQUIRE(spec);
  for (auto& p : spec->panels) {
    p.oracle = enabled != 0;
    if (settings != nullptr) p.oracle_settings = to_core(settings);
  }
  return SR_OK;
}

sr_status sr_sweep_spec_set_threads(sr_sweep_spec* spec, unsigned threads) {
  SR_REQUIRE(spec);
  spec->threads = threads;
  return SR_OK;
}

sr_status sr_sweep_run(const sr_sweep_spec* spec, sr_sweep_result** out) {
  SR_REQUIRE(spec);
  SR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto res = std::make_unique<sr_sweep_result>();
    res->result = run_preset(FigurePreset{"", spec->panels}, spec->threads);
    *out = res.release();
  });
}

void sr_sweep_result_destroy(sr_sweep_result* result) { delete result; }

size_t sr_sweep_result_size(const sr_sweep_result* result) {
  return result == nullptr ? 0 : result->result.records.size();
}

sr_status sr_sweep_result_record(const sr_sweep_result* result, size_t index, sr_record* out) {
  SR_REQUIRE(result);
  SR_REQUIRE(out);
  if (index >= result->result.records.size()) return fail(SR_ERR_DOMAIN, "record index out of range");
  const SweepRecord& r = result->result.records[index];
  *out = sr_record{r.s,
                   r.sigma,
                   value_or_nan(r.theta),
                   value_or_nan(r.gamma),
                   value_or_nan(r.concurrence),
                   value_or_nan(r.d),
                   value_or_nan(r.f_tot),
                   value_or_nan(r.f_ss),
                   value_or_nan(r.f_tt),
                   value_or_nan(r.f_st),
                   value_or_nan(r.h_s),
                   value_or_nan(r.h_nuisance),
                   value_or_nan(r.oracle_delta),
                   r.status.c_str()};
  return SR_OK;
}

sr_status sr_sweep_result_max_oracle_delta(const sr_sweep_result* result, double* out, int* has_value) {
  SR_REQUIRE(result);
  SR_REQUIRE(out);
  SR_REQUIRE(has_value);
  *has_value = result->result.max_oracle_delta.has_value() ? 1 : 0;
  *out = value_or_nan(result->result.max_oracle_delta);
  return SR_OK;
}

int sr_sweep_result_verification_failed(const sr_sweep_result* result) {
  return result != nullptr && result->result.verification_failed() ? 1 : 0;
}

sr_status sr_sweep_result_render(const sr_sweep_result* result, sr_format format, char** out, size_t* length) {
  SR_REQUIRE(result);
  SR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const std::string text =
        render(result->result.records, format == SR_FORMAT_JSON ? OutputFormat::Json : OutputFormat::Csv);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    if (length != nullptr) *length = text.size();
  });
}

sr_status sr_sweep_result_emit(const sr_sweep_result* result, sr_format format, const char* path) {
  SR_REQUIRE(result);
  SR_REQUIRE(path);
  return guarded([&] {
    emit(result->result.records, format == SR_FORMAT_JSON ? OutputFormat::Json : OutputFormat::Csv, path);
  });
}

void sr_string_free(char* text) { std::free(text); }

}  // extern "C"
