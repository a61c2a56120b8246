#include "core/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "core/fisher_single.hpp"

namespace superres {

namespace {

constexpr double kPi = std::numbers::pi;

std::optional<double> finite_or_empty(double v) {
  if (std::isfinite(v)) return v;
  return std::nullopt;
}

// Deviation of an analytic element from its oracle value, relative to the
// element itself or, for elements that vanish, to sqrt(f_ii f_jj). At
// theta = 0 the state is pure and the QFIM jumps: the analytic f_tt is the
// theta -> 0+ limit while the oracle sees the rank-1 state, so f_tt is
// skipped there.
double qfim_delta(const Qfim2& a, const Qfim2& n, bool rank_one) {
  auto rel = [](double x, double y, double scale) {
    const double den = std::max(std::abs(x), 1e-9 * scale);
    return den > 0.0 ? std::abs(x - y) / den : std::abs(x - y);
  };
  const double cross = std::sqrt(std::abs(a.f_ss * a.f_tt));
  double delta = std::max(rel(a.f_ss, n.f_ss, a.f_ss), rel(a.f_st, n.f_st, cross));
  if (!rank_one) delta = std::max(delta, rel(a.f_tt, n.f_tt, a.f_tt));
  return delta;
}

// Theta for a nuisance value; nullopt when a concurrence is out of reach.
std::optional<double> theta_for(const SweepSpec& spec, double s, double value) {
  switch (spec.nuisance) {
    case Nuisance::Theta: return value;
    case Nuisance::Coherence: return std::acos(value);
    case Nuisance::Concurrence:
      if (value > max_concurrence(s, spec.sigma) * (1.0 + 1e-12)) return std::nullopt;
      return theta_from_concurrence(s, spec.sigma, value);
  }
  return std::nullopt;
}

SweepRecord evaluate_point(const SweepSpec& spec, double s, double value) {
  SweepRecord r;
  r.s = s;
  r.sigma = spec.sigma;
  r.d = overlap(s, spec.sigma).d;
  const std::optional<double> theta = theta_for(spec, s, value);
  if (!theta) {
    r.concurrence = value;
    r.status = kStatusOutOfReach;
    return r;
  }
  const ModelParams p{s, spec.sigma, *theta, spec.phi};
  r.theta = *theta;
  r.gamma = spec.nuisance == Nuisance::Coherence ? value : std::cos(*theta);
  r.concurrence = spec.nuisance == Nuisance::Concurrence ? value : concurrence_paper(p);

  if (spec.mode == SweepMode::Single) {
    // s = 0 is reachable only at C = 0 (theta = 0), the coherent limit.
    r.f_tot = spec.nuisance == Nuisance::Concurrence && s > 0.0
                  ? f_tot_concurrence(s, spec.sigma, value).f_tot
                  : f_tot_coherence(s, spec.sigma, *r.gamma).f_tot;
    if (spec.oracle) {
      const double scale = 1.0 / (4.0 * spec.sigma * spec.sigma);
      r.oracle_delta = std::abs(*r.f_tot - oracle::numeric_weighted_fi(p, spec.oracle_settings)) / scale;
    }
  } else {
    Qfim2 g;
    PrecisionPair h;
    switch (spec.nuisance) {
      case Nuisance::Theta:
        g = qfim(p);
        h = precision_of(g);
        break;
      case Nuisance::Coherence:
        g = qfim_gamma(s, spec.sigma, value);
        h = precision_gamma(s, spec.sigma, value);
        break;
      case Nuisance::Concurrence:
        g = qfim_concurrence(s, spec.sigma, value);
        h = precision_concurrence(s, spec.sigma, value);
        break;
    }
    r.f_ss = finite_or_empty(g.f_ss);
    r.f_tt = finite_or_empty(g.f_tt);
    r.f_st = finite_or_empty(g.f_st);
    r.h_s = finite_or_empty(h.h_s);
    r.h_nuisance = finite_or_empty(h.h_nuisance);
    if (!std::isfinite(g.f_ss) || !std::isfinite(g.f_tt) || !std::isfinite(g.f_st) || !std::isfinite(h.h_nuisance)) {
      r.status = kStatusDivergent;
    }
    if (spec.oracle || spec.mode == SweepMode::Verify) {
      const oracle::NumericQfimReport num = oracle::numeric_qfim(p, spec.oracle_settings);
      r.oracle_delta = qfim_delta(qfim(p), num.qfim, *theta == 0.0);
    }
  }
  if (r.oracle_delta && *r.oracle_delta > kOracleTolerance) r.status = kStatusOracleMismatch;
  return r;
}

void append_number(std::string& out, const std::optional<double>& v) {
  if (!v) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", *v);
  out += buf;
}

}  // namespace

const char* to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Single: return "single";
    case SweepMode::Qfim: return "qfim";
    case SweepMode::Verify: return "verify";
  }
  return "?";
}

double Range::at(int i) const {
  if (steps <= 1) return min;
  if (i == steps - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepSpec default_spec(SweepMode mode, Nuisance nuisance) {
  SweepSpec spec;
  spec.mode = mode;
  spec.nuisance = nuisance;
  spec.s_range = Range{1e-3, 5.0, 200};
  switch (nuisance) {
    case Nuisance::Theta: spec.nuisance_range = Range{0.0, kPi / 2, 200}; break;
    case Nuisance::Coherence: spec.nuisance_range = Range{0.0, 1.0, 200}; break;
    case Nuisance::Concurrence: spec.nuisance_range = Range{0.0, 1.0, 200}; break;
  }
  if (mode == SweepMode::Verify) {
    spec.s_range = Range{0.5, 3.0, 6};
    switch (nuisance) {
      case Nuisance::Theta: spec.nuisance_range = Range{kPi / 8, kPi / 2, 4}; break;
      case Nuisance::Coherence: spec.nuisance_range = Range{0.0, std::cos(kPi / 8), 4}; break;
      case Nuisance::Concurrence: spec.nuisance_range = Range{0.05, 0.2, 4}; break;
    }
  }
  return spec;
}

void validate(const SweepSpec& spec) {
  auto fail = [](const std::string& why) { throw UsageError(why); };
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) fail("sigma must be > 0");
  if (spec.phi != 0.0) fail("phi must be 0: every sweep mode evaluates closed-form expressions");
  for (const auto* r : {&spec.s_range, &spec.nuisance_range}) {
    if (r->steps < 1) fail("steps must be >= 1");
    if (!std::isfinite(r->min) || !std::isfinite(r->max)) fail("range bounds must be finite");
    if (r->max < r->min) fail("range max must be >= min");
  }
  if (spec.s_range.min < 0.0) fail("s-min must be >= 0");
  if (spec.mode != SweepMode::Single && spec.s_range.min <= 0.0) {
    fail(std::string(to_string(spec.mode)) + " mode requires s-min > 0 (QFIM is singular at s = 0)");
  }
  const Range& n = spec.nuisance_range;
  switch (spec.nuisance) {
    case Nuisance::Theta:
      if (n.min < 0.0 || n.max > kPi / 2) fail("theta range must lie in [0, pi/2]");
      break;
    case Nuisance::Coherence:
      if (n.min < 0.0 || n.max > 1.0) fail("coherence range must lie in [0, 1]");
      break;
    case Nuisance::Concurrence:
      if (n.min < 0.0 || n.max > 1.0) fail("concurrence range must lie in [0, 1]");
      break;
  }
  if (spec.oracle || spec.mode == SweepMode::Verify) {
    const auto& o = spec.oracle_settings;
    if (o.n_points < 1024 || (o.n_points & (o.n_points - 1)) != 0) fail("grid-points must be a power of two >= 1024");
    if (o.halfwidth != 0.0 && o.halfwidth < 8.0 * spec.sigma + spec.s_range.max) {
      fail("grid-halfwidth must be >= 8 sigma + s-max");
    }
    if (o.fd_step != 0.0 && (o.fd_step < 1e-6 * spec.sigma || o.fd_step > 1e-4 * spec.sigma)) {
      fail("fd-step must lie in [1e-6, 1e-4] sigma");
    }
  }
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  validate(spec);
  const int ns = spec.s_range.steps;
  const int nn = spec.nuisance_range.steps;
  const std::size_t total = static_cast<std::size_t>(ns) * static_cast<std::size_t>(nn);
  SweepResult result;
  result.records.resize(total);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const int i = static_cast<int>(k / nn);
      const int j = static_cast<int>(k % nn);
      result.records[k] = evaluate_point(spec, spec.s_range.at(i), spec.nuisance_range.at(j));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, total)));
  if (threads <= 1) {
    work(0, total);
  } else {
    // Errors are rethrown on the calling thread; the first one wins.
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(total, b + chunk);
      pool.emplace_back([&, t, b, e] {
        try {
          work(b, e);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& r : result.records) {
    if (r.oracle_delta) result.max_oracle_delta = std::max(result.max_oracle_delta.value_or(0.0), *r.oracle_delta);
  }
  return result;
}

FigurePreset figure_preset(std::string_view name) {
  FigurePreset fp;
  fp.name = std::string(name);
  const Range s_axis{1e-3, 5.0, 200};
  auto panel = [&](SweepMode mode, Nuisance nuisance, Range s, Range n) {
    SweepSpec spec = default_spec(mode, nuisance);
    spec.sigma = 1.0;
    spec.phi = 0.0;
    spec.s_range = s;
    spec.nuisance_range = n;
    return spec;
  };
  if (name == "fig1a") {
    // FI over separation and concurrence (the entanglement panel).
    fp.panels.push_back(panel(SweepMode::Single, Nuisance::Concurrence, s_axis, Range{0.0, 1.0, 200}));
  } else if (name == "fig1b") {
    fp.panels.push_back(panel(SweepMode::Single, Nuisance::Coherence, s_axis, Range{0.0, 1.0, 200}));
  } else if (name == "fig1c") {
    // s = 0.3 sigma: coherence curve first, then concurrence up to C_max.
    const Range line{0.3, 0.3, 1};
    fp.panels.push_back(panel(SweepMode::Single, Nuisance::Coherence, line, Range{0.0, 1.0, 200}));
    fp.panels.push_back(
        panel(SweepMode::Single, Nuisance::Concurrence, line, Range{0.0, max_concurrence(0.3, 1.0), 200}));
  } else if (name == "fig2a") {
    fp.panels.push_back(panel(SweepMode::Qfim, Nuisance::Concurrence, s_axis, Range{0.0, 1.0, 200}));
  } else if (name == "fig2b") {
    fp.panels.push_back(panel(SweepMode::Qfim, Nuisance::Coherence, s_axis, Range{0.0, 1.0, 200}));
  } else {
    throw UsageError("unknown figure preset '" + std::string(name) + "'; expected one of fig1a, fig1b, fig1c, fig2a, fig2b");
  }
  return fp;
}

SweepResult run_preset(const FigurePreset& preset, unsigned threads) {
  SweepResult all;
  for (const SweepSpec& spec : preset.panels) {
    SweepResult part = run_sweep(spec, threads);
    all.records.insert(all.records.end(), part.records.begin(), part.records.end());
    if (part.max_oracle_delta) {
      all.max_oracle_delta = std::max(all.max_oracle_delta.value_or(0.0), *part.max_oracle_delta);
    }
  }
  return all;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    append_number(out, r.s);
    out += ',';
    append_number(out, r.sigma);
    for (const auto* v : {&r.theta, &r.gamma, &r.concurrence, &r.d, &r.f_tot, &r.f_ss, &r.f_tt, &r.f_st, &r.h_s,
                          &r.h_nuisance}) {
      out += ',';
      append_number(out, *v);
    }
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

namespace {

// Column name -> record member, in header order.
struct Column {
  const char* key;
  std::optional<double> SweepRecord::*field;
};

constexpr Column kOptionalColumns[] = {
    {"theta", &SweepRecord::theta}, {"gamma", &SweepRecord::gamma}, {"C", &SweepRecord::concurrence},
    {"d", &SweepRecord::d},         {"f_tot", &SweepRecord::f_tot}, {"f_ss", &SweepRecord::f_ss},
    {"f_tt", &SweepRecord::f_tt},   {"f_st", &SweepRecord::f_st},   {"h_s", &SweepRecord::h_s},
    {"h_nuisance", &SweepRecord::h_nuisance},
};

}  // namespace

std::string to_json(const std::vector<SweepRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["s"] = r.s;
    o["sigma"] = r.sigma;
    for (const auto& col : kOptionalColumns) {
      if (const auto& v = r.*(col.field)) o[col.key] = *v;
    }
    o["status"] = r.status;
    arr.push_back(std::move(o));
  }
  return arr.dump(1) + "\n";
}

std::vector<SweepRecord> records_from_json(std::string_view text) {
  std::vector<SweepRecord> out;
  try {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw IoError("malformed sweep JSON: expected an array of records");
    for (const auto& o : arr) {
      SweepRecord r;
      r.s = o.at("s").get<double>();
      r.sigma = o.at("sigma").get<double>();
      for (const auto& col : kOptionalColumns) {
        if (o.contains(col.key)) r.*(col.field) = o.at(col.key).get<double>();
      }
      r.status = o.at("status").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed sweep JSON: ") + e.what());
  }
  return out;
}

std::string render(const std::vector<SweepRecord>& records, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(records) : to_json(records);
}

void emit(const std::vector<SweepRecord>& records, OutputFormat format, const std::string& path) {
  const std::string text = render(records, format);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace superres
