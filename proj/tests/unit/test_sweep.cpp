#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"
#include "core/fisher_single.hpp"
#include "core/sweep.hpp"

namespace superres {
namespace {

constexpr double kPi = std::numbers::pi;

SweepSpec small_spec(SweepMode mode, Nuisance n, int ns = 5, int nn = 4) {
  SweepSpec spec = default_spec(mode, n);
  spec.s_range = Range{0.1, 3.0, ns};
  spec.nuisance_range.steps = nn;
  if (n == Nuisance::Concurrence) spec.nuisance_range = Range{0.0, 0.5, nn};
  return spec;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

TEST(Range, ExactEndpoints) {
  const Range r{0.0, kPi / 2, 7};
  EXPECT_EQ(r.at(0), 0.0);
  EXPECT_EQ(r.at(6), kPi / 2);
  EXPECT_EQ((Range{0.3, 0.3, 1}.at(0)), 0.3);
}

TEST(Sweep, ProductCount) {
  const SweepResult r = run_sweep(small_spec(SweepMode::Single, Nuisance::Coherence), 1);
  EXPECT_EQ(r.records.size(), 20u);
  EXPECT_FALSE(r.max_oracle_delta);
  EXPECT_FALSE(r.verification_failed());
  // s-major ordering
  EXPECT_EQ(r.records[0].s, r.records[3].s);
  EXPECT_LT(r.records[3].s, r.records[4].s);
}

TEST(Sweep, IncoherentColumnIsConstant) {
  SweepSpec spec = small_spec(SweepMode::Single, Nuisance::Coherence, 30, 3);
  spec.sigma = 2.0;
  for (const auto& r : run_sweep(spec, 1).records) {
    if (*r.gamma == 0.0) EXPECT_NEAR(*r.f_tot, 1.0 / 16.0, 1e-15);
  }
}

TEST(Sweep, SingleModeFields) {
  const SweepResult r = run_sweep(small_spec(SweepMode::Single, Nuisance::Concurrence), 1);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.d);
    if (rec.status == kStatusOk) {
      EXPECT_TRUE(rec.f_tot && rec.theta && rec.gamma && rec.concurrence);
      EXPECT_FALSE(rec.f_ss);
      EXPECT_NEAR(*rec.f_tot, f_tot_coherence(rec.s, 1.0, *rec.gamma).f_tot, 1e-12);
    } else {
      EXPECT_EQ(rec.status, kStatusOutOfReach);
      EXPECT_FALSE(rec.f_tot);
      EXPECT_GT(*rec.concurrence, max_concurrence(rec.s, 1.0));
    }
  }
}

TEST(Sweep, ZeroSeparationSingleMode) {
  SweepSpec spec = default_spec(SweepMode::Single, Nuisance::Concurrence);
  spec.s_range = Range{0.0, 0.0, 1};
  spec.nuisance_range = Range{0.0, 0.5, 2};
  const SweepResult r = run_sweep(spec, 1);
  EXPECT_EQ(r.records[0].status, kStatusOk);
  EXPECT_EQ(*r.records[0].f_tot, 0.0);
  EXPECT_EQ(r.records[1].status, kStatusOutOfReach);
}

TEST(Sweep, QfimModeDivergentNuisance) {
  SweepSpec spec = default_spec(SweepMode::Qfim, Nuisance::Coherence);
  spec.s_range = Range{1.0, 2.0, 2};
  spec.nuisance_range = Range{0.0, 1.0, 3};
  const SweepResult r = run_sweep(spec, 1);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.h_s);
    if (*rec.gamma == 1.0) {
      EXPECT_EQ(rec.status, kStatusDivergent);
      EXPECT_FALSE(rec.f_tt);
      EXPECT_TRUE(rec.f_ss);
    } else {
      EXPECT_EQ(rec.status, kStatusOk);
      EXPECT_TRUE(rec.f_tt && rec.f_st && rec.h_nuisance);
    }
  }
}

TEST(Sweep, VerifyDefaultsPass) {
  for (Nuisance n : {Nuisance::Theta, Nuisance::Coherence, Nuisance::Concurrence}) {
    const SweepResult r = run_sweep(default_spec(SweepMode::Verify, n), 0);
    EXPECT_EQ(r.records.size(), 24u);
    ASSERT_TRUE(r.max_oracle_delta);
    EXPECT_LT(*r.max_oracle_delta, kOracleTolerance) << to_string(n);
    for (const auto& rec : r.records) EXPECT_EQ(rec.status, kStatusOk);
  }
}

TEST(Sweep, SingleModeOracle) {
  SweepSpec spec = small_spec(SweepMode::Single, Nuisance::Coherence, 2, 3);
  spec.oracle = true;
  const SweepResult r = run_sweep(spec, 1);
  ASSERT_TRUE(r.max_oracle_delta);
  EXPECT_LT(*r.max_oracle_delta, kOracleTolerance);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  const SweepSpec spec = small_spec(SweepMode::Qfim, Nuisance::Concurrence, 17, 9);
  const SweepResult a = run_sweep(spec, 1);
  const SweepResult b = run_sweep(spec, 4);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(to_csv(a.records), to_csv(b.records));
}

TEST(Sweep, ValidationNamesConstraint) {
  auto message = [](const SweepSpec& s) {
    try {
      validate(s);
    } catch (const UsageError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  SweepSpec s = small_spec(SweepMode::Qfim, Nuisance::Theta);
  s.s_range.min = 0.0;
  EXPECT_NE(message(s).find("s-min"), std::string::npos);
  s = small_spec(SweepMode::Single, Nuisance::Theta);
  s.phi = 0.3;
  EXPECT_NE(message(s).find("phi"), std::string::npos);
  s = small_spec(SweepMode::Single, Nuisance::Theta);
  s.nuisance_range.max = 2.0;
  EXPECT_NE(message(s).find("theta"), std::string::npos);
  s = small_spec(SweepMode::Single, Nuisance::Coherence);
  s.s_range.steps = 0;
  EXPECT_NE(message(s).find("steps"), std::string::npos);
  s = small_spec(SweepMode::Verify, Nuisance::Theta);
  s.oracle_settings.n_points = 1000;
  EXPECT_NE(message(s).find("grid-points"), std::string::npos);
  s = small_spec(SweepMode::Single, Nuisance::Coherence);
  s.sigma = -1.0;
  EXPECT_NE(message(s).find("sigma"), std::string::npos);
  EXPECT_THROW(run_sweep(s), UsageError);
}

TEST(Csv, LineCountAndHeader) {
  const std::string csv = to_csv(run_sweep(small_spec(SweepMode::Single, Nuisance::Theta), 1).records);
  EXPECT_EQ(count_lines(csv), 21u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
}

TEST(Csv, EmptyFieldsForMissingValues) {
  SweepRecord r;
  r.s = 1.0;
  r.sigma = 1.0;
  r.status = std::string(kStatusOutOfReach);
  const std::string csv = to_csv({r});
  const std::string row = csv.substr(csv.find('\n') + 1);
  EXPECT_EQ(row, "1.0000000000000000e+00,1.0000000000000000e+00,,,,,,,,,,,out_of_reach\n");
}

TEST(Json, RoundTrip) {
  for (SweepMode m : {SweepMode::Single, SweepMode::Qfim}) {
    const auto records = run_sweep(small_spec(m, Nuisance::Concurrence), 1).records;
    EXPECT_EQ(records_from_json(to_json(records)), records);
  }
}

TEST(Json, OmitsAbsentKeys) {
  SweepRecord r;
  r.s = 0.5;
  const std::string j = to_json({r});
  EXPECT_EQ(j.find("f_tot"), std::string::npos);
  EXPECT_NE(j.find("\"status\""), std::string::npos);
  EXPECT_EQ(render({r}, OutputFormat::Json), j);
  EXPECT_THROW(records_from_json("not json"), Error);
}

TEST(Emit, WritesAndReportsPath) {
  const auto records = run_sweep(small_spec(SweepMode::Single, Nuisance::Coherence), 1).records;
  const auto dir = std::filesystem::temp_directory_path() / "superres_emit_test";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  emit(records, OutputFormat::Csv, a);
  emit(records, OutputFormat::Csv, b);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(count_lines(slurp(a)), 21u);
  EXPECT_EQ(slurp(a), slurp(b));
  std::filesystem::remove_all(dir);
  const std::string bad = (dir / "missing" / "x.csv").string();
  try {
    emit(records, OutputFormat::Csv, bad);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
  }
}

TEST(Preset, Fig1c) {
  const FigurePreset p = figure_preset("fig1c");
  ASSERT_EQ(p.panels.size(), 2u);
  EXPECT_EQ(p.panels[0].nuisance, Nuisance::Coherence);
  EXPECT_EQ(p.panels[1].nuisance, Nuisance::Concurrence);
  const SweepResult r = run_preset(p, 1);
  ASSERT_EQ(r.records.size(), 400u);
  EXPECT_NEAR(*r.records.front().f_tot, 0.25, 1e-15);
  EXPECT_EQ(*r.records[199].gamma, 1.0);
  EXPECT_NEAR(*r.records[199].f_tot, 0.0055934, 5e-8);
  EXPECT_NEAR(*r.records[200].f_tot, 0.0055934, 5e-8);
  EXPECT_NEAR(*r.records.back().f_tot, 0.25, 1e-12);
  for (const auto& rec : r.records) EXPECT_EQ(rec.status, kStatusOk);
}

TEST(Preset, AllNamesResolve) {
  for (const char* name : {"fig1a", "fig1b", "fig2a", "fig2b"}) {
    const FigurePreset p = figure_preset(name);
    ASSERT_EQ(p.panels.size(), 1u);
    EXPECT_NO_THROW(validate(p.panels[0]));
    EXPECT_EQ(p.panels[0].s_range.min, 1e-3);
    EXPECT_EQ(p.panels[0].s_range.max, 5.0);
    EXPECT_EQ(p.panels[0].sigma, 1.0);
  }
  EXPECT_EQ(figure_preset("fig1a").panels[0].nuisance, Nuisance::Concurrence);
  EXPECT_EQ(figure_preset("fig2b").panels[0].mode, SweepMode::Qfim);
  try {
    figure_preset("fig3");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("fig1a"), std::string::npos);
  }
}

}  // namespace
}  // namespace superres
