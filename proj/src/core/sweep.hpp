#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/numeric_oracle.hpp"
#include "core/qfim_two_param.hpp"

namespace superres {

enum class SweepMode { Single, Qfim, Verify };
enum class OutputFormat { Csv, Json };

const char* to_string(SweepMode m);

/// Inclusive linear axis; steps == 1 yields just `min`.
struct Range {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  double at(int i) const;
};

struct SweepSpec {
  SweepMode mode = SweepMode::Single;
  Nuisance nuisance = Nuisance::Theta;
  double sigma = 1.0;
  double phi = 0.0;
  Range s_range{1e-3, 5.0, 200};
  Range nuisance_range{0.0, 1.0, 200};
  OutputFormat format = OutputFormat::Csv;
  bool oracle = false;
  oracle::OracleSettings oracle_settings;
};

/// Default ranges for a mode/nuisance pair. Verify defaults to the
/// s in {0.5, ..., 3} x theta in {pi/8, ..., pi/2} check grid.
SweepSpec default_spec(SweepMode mode, Nuisance nuisance);

/// Throws UsageError naming the violated constraint.
void validate(const SweepSpec& spec);

/// Row statuses.
inline constexpr std::string_view kStatusOk = "ok";
inline constexpr std::string_view kStatusOutOfReach = "out_of_reach";
inline constexpr std::string_view kStatusDivergent = "nuisance_divergent";
inline constexpr std::string_view kStatusOracleMismatch = "oracle_mismatch";

struct SweepRecord {
  double s = 0.0;
  double sigma = 1.0;
  std::optional<double> theta, gamma, concurrence, d;
  std::optional<double> f_tot;
  std::optional<double> f_ss, f_tt, f_st;
  std::optional<double> h_s, h_nuisance;
  std::string status{kStatusOk};
  /// Largest relative analytic-vs-oracle deviation at this point, when the
  /// oracle ran. Not part of the emitted columns.
  std::optional<double> oracle_delta;

  bool operator==(const SweepRecord&) const = default;
};

/// Relative tolerance used for every analytic-vs-oracle comparison.
inline constexpr double kOracleTolerance = 1e-6;

struct SweepResult {
  std::vector<SweepRecord> records;
  /// Largest oracle_delta over all records; empty when the oracle never ran.
  std::optional<double> max_oracle_delta;

  bool verification_failed() const { return max_oracle_delta && *max_oracle_delta > kOracleTolerance; }
};

/// Evaluates the Cartesian product of the two axes, s-major. Points may run
/// on several threads (0 = hardware concurrency); the output order and
/// values do not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// A named figure is one or more sweeps whose rows are concatenated.
struct FigurePreset {
  std::string name;
  std::vector<SweepSpec> panels;
};

/// fig1a, fig1b, fig1c, fig2a or fig2b. Throws UsageError listing the
/// valid names otherwise.
FigurePreset figure_preset(std::string_view name);

SweepResult run_preset(const FigurePreset& preset, unsigned threads = 0);

/// Exact CSV header line (without newline).
inline constexpr std::string_view kCsvHeader = "s,sigma,theta,gamma,C,d,f_tot,f_ss,f_tt,f_st,h_s,h_nuisance,status";

std::string to_csv(const std::vector<SweepRecord>& records);
std::string to_json(const std::vector<SweepRecord>& records);
std::string render(const std::vector<SweepRecord>& records, OutputFormat format);

/// Parses the JSON emitted by to_json; throws IoError on malformed input.
std::vector<SweepRecord> records_from_json(std::string_view text);

/// Writes render(records, format) to `path`; throws IoError with the path on
/// failure.
void emit(const std::vector<SweepRecord>& records, OutputFormat format, const std::string& path);

}  // namespace superres
