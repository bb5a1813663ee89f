#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "strainsense/errors.hpp"
#include "strainsense/harness/audit.hpp"
#include "strainsense/harness/config.hpp"
#include "strainsense/harness/experiment.hpp"
#include "strainsense/harness/report.hpp"
#include "strainsense/harness/sweeps.hpp"
#include "strainsense/units.hpp"

using namespace strainsense;
using namespace strainsense::harness;
using nlohmann::json;

namespace {

std::filesystem::path data_file(const char* name) {
  return std::filesystem::path(STRAINSENSE_TEST_DATA_DIR) / name;
}

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Config, WorkedExamplePresetMatchesBothFiles) {
  const RunConfig preset = worked_example_config();
  EXPECT_EQ(load_config(data_file("worked_example.json")), preset);
  EXPECT_EQ(load_config(data_file("worked_example.toml")), preset);
  EXPECT_EQ(config_hash(load_config(data_file("worked_example.toml"))), config_hash(preset));
}

TEST(Config, JsonRoundTrip) {
  RunConfig c = worked_example_config();
  c.strain_unit = StrainUnit::per_microstrain;
  c.homodyne.seed = 0xFFFF'FFFF'FFFF'FFF0ULL;
  c.sweep = default_contour_sweep();
  c.sweep->markers.push_back({"extra", 1e8, 2e8});
  c.sweep->fixed["omega_q0"] = 6e9;
  EXPECT_EQ(parse_config(to_json(c), ConfigFormat::json), c);
}

TEST(Config, DerivedParameters) {
  const RunConfig c = worked_example_config();
  const auto cp = c.coupling_params();
  EXPECT_NEAR(units::to_hz(cp.g1), 2.5e5, 1e-6);
  EXPECT_NEAR(cp.tau, 1e-7, 1e-22);
  RunConfig micro = c;
  micro.strain_unit = StrainUnit::per_microstrain;
  EXPECT_NEAR(micro.coupling_params().g1 / cp.g1, 1e6, 1e-6);
}

TEST(Config, Rejections) {
  EXPECT_THROW(load_config(data_file("unknown_key.json")), ConfigError);
  EXPECT_THROW(load_config(data_file("does_not_exist.json")), IoError);
  EXPECT_THROW(parse_config("{not json", ConfigFormat::json), ConfigError);
  EXPECT_THROW(parse_config("[coupling\n", ConfigFormat::toml), ConfigError);
  EXPECT_THROW(parse_strain_unit("per-furlong"), ConfigError);
  EXPECT_EQ(parse_strain_unit("per-microstrain"), StrainUnit::per_microstrain);
  EXPECT_EQ(parse_strain_unit("per_strain"), StrainUnit::per_strain);
  RunConfig c = worked_example_config();
  c.homodyne.shots = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, SweepValidation) {
  SweepSpec s = default_contour_sweep();
  EXPECT_NO_THROW(s.validate());
  s.axes[0].points = 1;
  EXPECT_THROW(s.validate(), ConfigError);
  s = default_contour_sweep();
  s.axes[1].min = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = default_contour_sweep();
  s.fixed["tau_s"] = 1.0;
  RunConfig c = worked_example_config();
  c.sweep = s;
  EXPECT_THROW(g1_contour_points(c), ConfigError);
}

TEST(Config, AxisValues) {
  const AxisSpec lin{"g0", 1.0, 3.0, 3, AxisScale::linear};
  EXPECT_EQ(lin.values(), (std::vector<double>{1.0, 2.0, 3.0}));
  const AxisSpec lg{"g0", 1.0, 100.0, 3, AxisScale::log};
  const auto v = lg.values();
  EXPECT_NEAR(v[1], 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(v.back(), 100.0);
}

TEST(Report, WorkerEnv) {
  ::setenv(kWorkersEnv, "3", 1);
  EXPECT_EQ(worker_count_from_env(), 3U);
  ::setenv(kWorkersEnv, "zero", 1);
  EXPECT_THROW(worker_count_from_env(), ConfigError);
  ::unsetenv(kWorkersEnv);
  EXPECT_EQ(worker_count_from_env(), 1U);
}

TEST(Report, UnitTagsRequired) {
  EXPECT_NO_THROW(require_unit_tags(R"({"a": {"value": 1.0, "unit": "Hz"}})"));
  EXPECT_THROW(require_unit_tags(R"({"a": 1.0})"), std::logic_error);
  EXPECT_THROW(require_unit_tags(R"({"a": {"value": 1.0}})"), std::logic_error);
}

TEST(Report, FormatSci) { EXPECT_EQ(format_sci(6.366197723675814), "6.36619772e+00"); }

TEST(Report, ParallelForCoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 7, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 1000);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 5) throw ModelRangeError("x"); }),
               ModelRangeError);
}

TEST(Audit, RowsAndIdentity) {
  const AuditReport a = run_reproduce_audit();
  std::set<std::string> steps;
  for (const AuditRow& row : a.rows) {
    EXPECT_TRUE(steps.insert(row.step).second) << row.step;
    EXPECT_FALSE(row.citation.empty());
    EXPECT_EQ(row.entries.size(), a.interpretations.size());
  }
  EXPECT_GE(a.interpretations.size(), 2U);
  EXPECT_LE(a.max_identity_residual, 1e-12);
  for (const char* s : {"g1_over_2pi", "g1_tau", "delta_eps_single_shot", "delta_eps_per_root_hz",
                        "delta_eps_ghz_per_root_hz"}) {
    EXPECT_TRUE(steps.count(s)) << s;
  }
  const std::string report = audit_json(a, worked_example_config());
  EXPECT_NO_THROW(require_unit_tags(report));
  EXPECT_EQ(count_lines(audit_csv(a)), 1 + static_cast<int>(a.rows.size() * a.interpretations.size()));
}

TEST(Audit, PrintedSingleShotValueUnderPerStrainReading) {
  const AuditReport a = run_reproduce_audit();
  for (const AuditRow& row : a.rows) {
    if (row.step != "delta_eps_single_shot") continue;
    for (const AuditEntry& e : row.entries) {
      if (e.interpretation.rfind("chi_per_strain+sigma_x_config", 0) == 0) {
        EXPECT_NEAR(e.recomputed, 6.366197723675814, 1e-9);
        EXPECT_NEAR(e.discrepancy_factor * row.printed_value, e.recomputed, 1e-9 * e.recomputed);
      }
    }
  }
}

TEST(Sweeps, ScalingSlopesAndMarker) {
  const RunConfig c = worked_example_config();
  const ScalingTable t = scaling_table(c);
  std::vector<double> n;
  std::vector<double> sql;
  std::vector<double> hl;
  for (const auto& r : t.normalized) {
    n.push_back(r.n);
    sql.push_back(r.sql);
    hl.push_back(r.hl);
  }
  EXPECT_NEAR(metrology::loglog_slope(n, sql), -0.5, 1e-12);
  EXPECT_NEAR(metrology::loglog_slope(n, hl), -1.0, 1e-12);
  const std::string csv = run_scaling_sweep(c);
  EXPECT_EQ(csv.rfind("N,sql_normalized,hl_normalized,sql_physical,hl_physical,marker\n", 0), 0U);
  EXPECT_NE(csv.find("ghz_n10"), std::string::npos);
  EXPECT_EQ(count_lines(csv), 101);
  EXPECT_NO_THROW(require_unit_tags(scaling_sweep_json(c)));
}

TEST(Sweeps, ContourFromFile) {
  const RunConfig c = load_config(data_file("small_contour.toml"));
  const auto pts = g1_contour_points(c);
  ASSERT_EQ(pts.size(), 4U * 3U + 2U);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(pts[i].kind, "grid");
    EXPECT_NEAR(pts[i].g1_over_2pi, pts[i].g0_over_2pi * pts[i].chi_eps / 1e10, 1e-9 * pts[i].g1_over_2pi);
  }
  EXPECT_EQ(pts[12].kind, "marker:nominal");
  EXPECT_NEAR(pts[12].g1_over_2pi, 2.5e5, 1e-6);
  EXPECT_EQ(pts[13].kind, "marker:wide_coupling");
  EXPECT_NEAR(pts[13].g1_over_2pi, 1e6, 1e-6);
}

TEST(Sweeps, ContourDefaultsAndGuards) {
  RunConfig c = worked_example_config();
  const auto pts = g1_contour_points(c);
  EXPECT_EQ(pts.size(), 101U * 101U + 1U);
  EXPECT_EQ(pts.back().kind, "marker:nominal");
  EXPECT_NEAR(pts.back().g1_over_2pi, 2.5e5, 1e-6);
  c.sweep = default_contour_sweep();
  c.sweep->axes[0].points = 10'000;
  c.sweep->axes[1].points = 10'000;
  EXPECT_THROW(g1_contour_points(c), ResourceError);
}

TEST(Sweeps, ContourWorkerCountInvariant) {
  const RunConfig c = worked_example_config();
  EXPECT_EQ(run_g1_contour(c, 1), run_g1_contour(c, 4));
}

TEST(Experiment, SmallNullCase) {
  RunConfig c = worked_example_config();
  c.experiment.repetitions = 40;
  c.homodyne.shots = 2000;
  const EstimationExperiment e = run_estimation_experiment(c, 1);
  EXPECT_EQ(e.eps_hat.size(), 40U);
  EXPECT_NEAR(e.mean_x_simulated, e.mean_x_analytic, 1e-8);
  EXPECT_LT(std::abs(e.bias_in_standard_errors), 4.0);
  EXPECT_NEAR(e.analytic_std, 1.0 / (10.0 * 2.0 * std::numbers::pi * 2.5e5 * 1e-7 * std::sqrt(2000.0)), 1e-9);
  const EstimationExperiment e2 = run_estimation_experiment(c, 3);
  EXPECT_EQ(e.eps_hat, e2.eps_hat);
  EXPECT_NO_THROW(require_unit_tags(estimation_report_json(e, c)));
}

TEST(Experiment, StrainOutOfRange) {
  EXPECT_THROW(run_estimation_experiment(load_config(data_file("strain_out_of_range.json"))),
               strainsense::Error);
}

TEST(Experiment, ReportsCarryUnits) {
  const RunConfig c = worked_example_config();
  EXPECT_NO_THROW(require_unit_tags(transmon_report_json(c)));
  EXPECT_NO_THROW(require_unit_tags(qfi_report_json(c)));
  const auto ramsey = default_ramsey_characterization(c);
  EXPECT_NO_THROW(require_unit_tags(ramsey_report_json(ramsey, c)));
  EXPECT_LT(ramsey.linear_fit_residual, 0.05);
  EXPECT_NEAR(ramsey.phase_slope / ramsey.phase_slope_analytic, 1.0, 1e-6);
}

TEST(Experiment, QfiReportBoundOrdering) {
  const json q = json::parse(qfi_report_json(worked_example_config()));
  ASSERT_EQ(q.at("ghz_scan").size(), 10U);
  for (const json& row : q.at("ghz_scan")) {
    EXPECT_FALSE(row.at("bound_ordering_collective").get<bool>());
    EXPECT_TRUE(row.at("bound_ordering_physical").get<bool>());
  }
}
