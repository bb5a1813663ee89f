#include "strainsense/harness/sweeps.hpp"

#include "report_json.hpp"
#include "strainsense/errors.hpp"
#include "strainsense/harness/report.hpp"
#include "strainsense/units.hpp"

namespace strainsense::harness {
namespace {

using detail::json;

std::string strain_suffix(StrainUnit u) {
  return u == StrainUnit::per_strain ? "per_strain" : "per_microstrain";
}

}  // namespace

ScalingTable scaling_table(const RunConfig& config) {
  ScalingTable t;
  t.single_shot = metrology::sensitivity_single(config.homodyne.sigma_x, config.coupling_params());
  t.normalized = metrology::scaling_curves(config.scaling_n_max, true);
  return t;
}

std::string run_scaling_sweep(const RunConfig& config) {
  const ScalingTable t = scaling_table(config);
  std::string out = "N,sql_normalized,hl_normalized,sql_physical,hl_physical,marker\n";
  for (const metrology::ScalingRow& r : t.normalized) {
    out += std::to_string(r.n) + "," + format_sci(r.sql) + "," + format_sci(r.hl) + "," +
           format_sci(r.sql * t.single_shot) + "," + format_sci(r.hl * t.single_shot) + "," +
           (r.n == kScalingMarkerN ? "ghz_n10" : "") + "\n";
  }
  return out;
}

std::string scaling_sweep_json(const RunConfig& config) {
  const ScalingTable t = scaling_table(config);
  json rows = json::array();
  for (const metrology::ScalingRow& r : t.normalized) {
    json row{{"N", detail::count(r.n)},
             {"sql_normalized", detail::quantity(r.sql, "dimensionless")},
             {"hl_normalized", detail::quantity(r.hl, "dimensionless")},
             {"sql_physical", detail::quantity(r.sql * t.single_shot, "strain")},
             {"hl_physical", detail::quantity(r.hl * t.single_shot, "strain")}};
    if (r.n == kScalingMarkerN) row["marker"] = "ghz_n10";
    rows.push_back(row);
  }
  json report{{"report", "scaling"},
              {"single_shot_sensitivity", detail::quantity(t.single_shot, "strain")},
              {"rows", rows},
              {"provenance", detail::provenance(config)}};
  return detail::dump_report(report);
}

std::vector<ContourPoint> g1_contour_points(const RunConfig& config, unsigned workers) {
  const double f = config.frequency_scale();
  const double s = config.strain_scale();
  SweepSpec spec;
  if (config.sweep) {
    spec = *config.sweep;
  } else {
    // Defaults are Hz/2pi, per declared strain unit so the nominal point
    // stays inside the grid under either reading.
    spec = default_contour_sweep();
    for (AxisSpec& a : spec.axes) {
      a.min *= units::kTwoPi / f;
      a.max *= units::kTwoPi / f;
    }
  }
  spec.validate();
  for (const AxisSpec& a : spec.axes) {
    if (a.name != "g0" && a.name != "chi_eps") {
      throw ConfigError("contour sweep: unknown axis '" + a.name + "' (expected g0, chi_eps)");
    }
  }
  for (const auto& [key, value] : spec.fixed) {
    (void)value;
    if (key != "omega_q0") throw ConfigError("contour sweep: unknown fixed override '" + key + "'");
  }
  const AxisSpec* g0_axis = spec.axis("g0");
  const AxisSpec* chi_axis = spec.axis("chi_eps");
  if (g0_axis == nullptr || chi_axis == nullptr) {
    throw ConfigError("contour sweep needs both a g0 and a chi_eps axis");
  }
  const auto n_points = static_cast<std::size_t>(g0_axis->points) *
                        static_cast<std::size_t>(chi_axis->points);
  if (n_points > kMaxContourPoints) {
    throw ResourceError("contour sweep: " + std::to_string(n_points) + " grid points exceed " +
                        std::to_string(kMaxContourPoints));
  }

  const double omega_q0 =
      (spec.fixed.contains("omega_q0") ? spec.fixed.at("omega_q0") : config.coupling.omega_q0) * f;
  if (!(omega_q0 > 0.0)) throw ConfigError("contour sweep: omega_q0 must be > 0");

  // Config values -> (g0/2pi in Hz, chi/2pi and g1/2pi in Hz per declared unit).
  auto make_point = [&](std::string kind, double g0_cfg, double chi_cfg) {
    const double g0 = g0_cfg * f;
    const double chi = chi_cfg * f * s;
    const double g1 = dynamics::CouplingParams::gradient(g0, omega_q0, chi);
    return ContourPoint{std::move(kind), units::to_hz(g0), units::to_hz(chi / s),
                        units::to_hz(g1 / s)};
  };

  const std::vector<double> g0_values = g0_axis->values();
  const std::vector<double> chi_values = chi_axis->values();
  std::vector<ContourPoint> points(n_points);
  const std::size_t nc = chi_values.size();
  parallel_for(g0_values.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < nc; ++j) {
      points[i * nc + j] = make_point("grid", g0_values[i], chi_values[j]);
    }
  });

  bool has_nominal = false;
  for (const MarkerSpec& m : spec.markers) has_nominal |= m.label == "nominal";
  if (!has_nominal) {
    points.push_back(make_point("marker:nominal", config.coupling.g0, config.coupling.chi_eps));
  }
  for (const MarkerSpec& m : spec.markers) {
    points.push_back(make_point("marker:" + m.label, m.g0, m.chi_eps));
  }
  return points;
}

std::string run_g1_contour(const RunConfig& config, unsigned workers) {
  const std::vector<ContourPoint> points = g1_contour_points(config, workers);
  const std::string u = strain_suffix(config.strain_unit);
  std::string out = "point_kind,g0_over_2pi_hz,chi_eps_hz_" + u + ",g1_over_2pi_hz_" + u + "\n";
  out.reserve(out.size() + points.size() * 64);
  for (const ContourPoint& p : points) {
    out += p.kind + "," + format_sci(p.g0_over_2pi) + "," + format_sci(p.chi_eps) + "," +
           format_sci(p.g1_over_2pi) + "\n";
  }
  return out;
}

std::string g1_contour_json(const RunConfig& config, unsigned workers) {
  const std::vector<ContourPoint> points = g1_contour_points(config, workers);
  const std::string per = detail::per_strain_unit("hz", config.strain_unit);
  json rows = json::array();
  for (const ContourPoint& p : points) {
    rows.push_back({{"point_kind", p.kind},
                    {"g0_over_2pi", detail::quantity(p.g0_over_2pi, "hz")},
                    {"chi_eps", detail::quantity(p.chi_eps, per)},
                    {"g1_over_2pi", detail::quantity(p.g1_over_2pi, per)}});
  }
  json report{{"report", "g1_contour"}, {"rows", rows}, {"provenance", detail::provenance(config)}};
  return detail::dump_report(report);
}

}  // namespace strainsense::harness
