#include "strainsense/harness/audit.hpp"

#include <cmath>
#include <functional>

#include "report_json.hpp"
#include "strainsense/harness/report.hpp"
#include "strainsense/homodyne.hpp"
#include "strainsense/metrology.hpp"
#include "strainsense/units.hpp"

namespace strainsense::harness {
namespace {

using detail::json;

constexpr double kPicostrain = 1e-12;
constexpr double kKappaInverseBound = 1e-6;  // s, printed lower bound on the decay time

// Every quantity of the example under one reading.
struct Chain {
  dynamics::CouplingParams cp;
  double sigma_x = 1.0;
  double nu = 1.0;
  int n = 1;

  double delta(int n_qubits) const {
    return metrology::sensitivity_ghz(sigma_x, cp, n_qubits);
  }
  double per_root_hz(int n_qubits) const { return homodyne::per_root_hz(delta(n_qubits), nu); }
};

struct RowSpec {
  const char* step;
  const char* kind;
  const char* citation;
  double printed;
  const char* unit;
  int n;
  std::function<double(const Chain&)> value;
};

bool within(double factor) { return std::abs(factor - 1.0) <= kAuditMatchTolerance; }

std::vector<RowSpec> row_specs(const RunConfig& cfg) {
  return {
      {"omega_q0_over_2pi", "input", "5 GHz", 5e9, "hz", 1,
       [](const Chain& c) { return units::to_hz(c.cp.omega_q0); }},
      {"chi_eps", "input", "50 MHz/strain", 50e6, "hz_per_strain", 1,
       [](const Chain& c) { return units::to_hz(c.cp.chi_eps); }},
      {"g0_over_2pi", "input", "50 MHz", 50e6, "hz", 1,
       [](const Chain& c) { return units::to_hz(c.cp.g0); }},
      {"tau", "input", "100 ns", 100e-9, "s", 1, [](const Chain& c) { return c.cp.tau; }},
      {"kappa_inverse_lower_bound", "input", "> 1 us", kKappaInverseBound, "s", 1,
       [](const Chain&) { return kKappaInverseBound; }},
      {"sigma_x", "input", "sigma_X = 1", 1.0, "dimensionless", 1,
       [](const Chain& c) { return c.sigma_x; }},
      {"measurement_bandwidth", "input", "100 kHz", 1e5, "hz", 1,
       [](const Chain& c) { return c.nu; }},
      {"nu", "input", "10^5 shots per second", 1e5, "shots_per_s", 1,
       [](const Chain& c) { return c.nu; }},
      {"n_qubits", "input", "N = 10", 10.0, "count", 1,
       [&cfg](const Chain&) { return static_cast<double>(cfg.n_qubits); }},
      {"g1_over_2pi", "chain", "0.25 MHz/ustrain", 0.25e6, "hz_per_microstrain", 1,
       [](const Chain& c) { return units::to_hz(c.cp.g1) * units::kMicrostrain; }},
      {"g1", "chain", "1.57e6 rad/(s ustrain)", 1.57e6, "rad_per_s_per_microstrain", 1,
       [](const Chain& c) { return c.cp.g1 * units::kMicrostrain; }},
      {"g1_tau", "chain", "(1.57e6 s^-1) x (100e-9 s)", 0.157, "rad_per_microstrain", 1,
       [](const Chain& c) { return c.cp.g1 * c.cp.tau * units::kMicrostrain; }},
      {"delta_eps_single_shot", "chain", "6.4e-3 strain", 6.4e-3, "strain", 1,
       [](const Chain& c) { return c.delta(1); }},
      {"delta_eps_single_shot_microstrain", "chain", "6400 ustrain per shot", 6400.0,
       "microstrain", 1, [](const Chain& c) { return c.delta(1) / units::kMicrostrain; }},
      {"delta_eps_per_root_hz", "chain", "6.4e-8 strain/sqrt(Hz)", 6.4e-8, "strain_per_sqrt_hz",
       1, [](const Chain& c) { return c.per_root_hz(1); }},
      {"delta_eps_per_root_hz_picostrain", "chain", "64 picostrain/sqrt(Hz)", 64.0,
       "picostrain_per_sqrt_hz", 1, [](const Chain& c) { return c.per_root_hz(1) / kPicostrain; }},
      {"delta_eps_ghz_per_root_hz", "chain", "~6 picostrain/sqrt(Hz) at N = 10", 6.0,
       "picostrain_per_sqrt_hz", 10,
       [](const Chain& c) { return c.per_root_hz(10) / kPicostrain; }},
      {"figure_single_qubit_per_root_hz", "figure", "64 ps/sqrt(Hz)", 64.0,
       "picostrain_per_sqrt_hz", 1, [](const Chain& c) { return c.per_root_hz(1) / kPicostrain; }},
      {"figure_ghz_n10_per_root_hz", "figure", "6.4 ps/sqrt(Hz) at N = 10", 6.4,
       "picostrain_per_sqrt_hz", 10,
       [](const Chain& c) { return c.per_root_hz(10) / kPicostrain; }},
      {"figure_ghz_n100_per_root_hz", "figure", "0.64 ps/sqrt(Hz) at N = 100", 0.64,
       "picostrain_per_sqrt_hz", 100,
       [](const Chain& c) { return c.per_root_hz(100) / kPicostrain; }},
  };
}

ArithmeticCheck arithmetic(const char* step, const char* expression, double printed,
                           double recomputed, const char* unit) {
  const double factor = recomputed / printed;
  return ArithmeticCheck{step, expression, printed, recomputed, unit, factor, within(factor)};
}

}  // namespace

AuditReport run_reproduce_audit(const RunConfig& config) {
  AuditReport report;
  const double sigma_sql = config.homodyne.sigma_x;
  report.interpretations = {
      {"chi_per_strain+sigma_x_config", StrainUnit::per_strain, sigma_sql},
      {"chi_per_microstrain+sigma_x_config", StrainUnit::per_microstrain, sigma_sql},
      {"chi_per_strain+sigma_x_vacuum", StrainUnit::per_strain, homodyne::kSigmaVacuum},
      {"chi_per_microstrain+sigma_x_vacuum", StrainUnit::per_microstrain, homodyne::kSigmaVacuum},
  };

  std::vector<Chain> chains;
  for (const AuditInterpretation& interp : report.interpretations) {
    RunConfig reading = config;
    reading.strain_unit = interp.chi_unit;
    chains.push_back(Chain{reading.coupling_params(), interp.sigma_x, config.homodyne.nu,
                           config.n_qubits});
  }

  for (const RowSpec& spec : row_specs(config)) {
    AuditRow row{spec.step, spec.kind, spec.citation, spec.printed, spec.unit, spec.n, {}, false};
    for (std::size_t k = 0; k < chains.size(); ++k) {
      const Chain& c = chains[k];
      AuditEntry e;
      e.interpretation = report.interpretations[k].name;
      e.recomputed = spec.value(c);
      e.discrepancy_factor = e.recomputed / spec.printed;
      e.match = within(e.discrepancy_factor);
      const double d = c.delta(spec.n);
      e.identity_residual = std::abs(d * c.cp.g1 * c.cp.tau * spec.n - c.sigma_x) / c.sigma_x;
      report.max_identity_residual = std::max(report.max_identity_residual, e.identity_residual);
      row.matched_any |= e.match;
      row.entries.push_back(e);
    }
    if (!row.matched_any && row.kind != std::string("input")) report.unmatched_steps.push_back(row.step);
    report.rows.push_back(std::move(row));
  }

  report.arithmetic = {
      arithmetic("g1_over_2pi", "(50 MHz)/(2 x 5 GHz) x (50 MHz/strain)", 0.25e6,
                 50e6 / (2.0 * 5e9) * 50e6 * units::kMicrostrain, "hz_per_microstrain"),
      arithmetic("g1", "2 pi x 0.25e6", 1.57e6, units::kTwoPi * 0.25e6, "rad_per_s_per_microstrain"),
      arithmetic("delta_eps_single_shot", "1 / ((1.57e6) x (100e-9))", 6.4e-3,
                 1.0 / (1.57e6 * 100e-9), "strain"),
      arithmetic("delta_eps_single_shot_microstrain", "6.4e-3 strain in microstrain", 6400.0,
                 6.4e-3 / units::kMicrostrain, "microstrain"),
      arithmetic("delta_eps_per_root_hz", "(6.4e-3) / sqrt(1e5)", 6.4e-8, 6.4e-3 / std::sqrt(1e5),
                 "strain_per_sqrt_hz"),
      arithmetic("delta_eps_per_root_hz_picostrain", "6.4e-8 strain in picostrain", 64.0,
                 6.4e-8 / kPicostrain, "picostrain_per_sqrt_hz"),
      arithmetic("delta_eps_ghz_per_root_hz", "(64 picostrain/sqrt(Hz)) / 10", 6.0, 64.0 / 10.0,
                 "picostrain_per_sqrt_hz"),
      arithmetic("figure_ghz_n100_per_root_hz", "(64 picostrain/sqrt(Hz)) / 100", 0.64,
                 64.0 / 100.0, "picostrain_per_sqrt_hz"),
  };

  report.notes = {
      "chi_eps is printed per strain while g1 is printed per microstrain; no single reading "
      "reproduces both the printed gradient and the printed sensitivities.",
      "The printed single-shot value equals 1/(g1 tau) with g1 tau = 0.157 only up to a factor "
      "1e3; 1/0.157 = 6.37.",
      "6.4e-8 strain is 64 nanostrain, not 64 picostrain, and 6.4e-3/sqrt(1e5) is 2.0e-5.",
      "sigma_X = 1 and the vacuum rms 1/sqrt(2) (with [X,P] = i) are both evaluated.",
      "The ps/sqrt(Hz) figure label is read as picostrain per sqrt(Hz); reports always write "
      "strain_per_sqrt_hz.",
      "nu = 1e5 shots per second against tau = 100 ns implies a 1% duty cycle; nu is a free "
      "parameter here.",
      "GHZ QFI: the intermediate step carries N^2/2 where the product-moment expression gives "
      "N^2/4 before the factor 4; the final (g1 tau)^2 N^2 <P^2> form is used.",
      "The generator g1 tau J_z P gives a Cramer-Rao bound above the homodyne error at "
      "sigma_X = 1/sqrt(2); the generator of the simulated evolution, 2 g1 tau J_z P, restores "
      "the ordering. The qfi report carries both.",
  };
  report.verdict = report.unmatched_steps.empty() ? "reproduced" : "not_reproduced";
  return report;
}

std::string audit_json(const AuditReport& report, const RunConfig& config) {
  json interps = json::array();
  for (const AuditInterpretation& i : report.interpretations) {
    interps.push_back({{"name", i.name},
                       {"chi_eps_unit", std::string(to_string(i.chi_unit))},
                       {"sigma_x", detail::quantity(i.sigma_x, "dimensionless")}});
  }
  json rows = json::array();
  for (const AuditRow& r : report.rows) {
    json entries = json::array();
    for (const AuditEntry& e : r.entries) {
      entries.push_back({{"interpretation", e.interpretation},
                         {"recomputed", detail::quantity(e.recomputed, r.unit)},
                         {"discrepancy_factor", detail::quantity(e.discrepancy_factor, "dimensionless")},
                         {"match", e.match},
                         {"identity_residual", detail::quantity(e.identity_residual, "dimensionless")}});
    }
    rows.push_back({{"step", r.step},
                    {"kind", r.kind},
                    {"citation", r.citation},
                    {"printed_value", detail::quantity(r.printed_value, r.unit)},
                    {"n_qubits", detail::count(r.n_qubits)},
                    {"matched_any", r.matched_any},
                    {"recomputed", entries}});
  }
  json checks = json::array();
  for (const ArithmeticCheck& a : report.arithmetic) {
    checks.push_back({{"step", a.step},
                      {"expression", a.expression},
                      {"printed", detail::quantity(a.printed, a.unit)},
                      {"recomputed", detail::quantity(a.recomputed, a.unit)},
                      {"discrepancy_factor", detail::quantity(a.discrepancy_factor, "dimensionless")},
                      {"match", a.match}});
  }
  json out{{"report", "audit"},
           {"interpretations", interps},
           {"rows", rows},
           {"arithmetic_checks", checks},
           {"notes", report.notes},
           {"unmatched_steps", report.unmatched_steps},
           {"max_identity_residual", detail::quantity(report.max_identity_residual, "dimensionless")},
           {"match_tolerance", detail::quantity(kAuditMatchTolerance, "dimensionless")},
           {"verdict", report.verdict},
           {"provenance", detail::provenance(config)}};
  return detail::dump_report(out);
}

std::string audit_csv(const AuditReport& report) {
  std::string out =
      "step,kind,printed_value,unit,interpretation,recomputed,discrepancy_factor,match,"
      "identity_residual\n";
  for (const AuditRow& r : report.rows) {
    for (const AuditEntry& e : r.entries) {
      out += r.step + "," + r.kind + "," + format_sci(r.printed_value) + "," + r.unit + "," +
             e.interpretation + "," + format_sci(e.recomputed) + "," +
             format_sci(e.discrepancy_factor) + "," + (e.match ? "true" : "false") + "," +
             format_sci(e.identity_residual) + "\n";
    }
  }
  return out;
}

}  // namespace strainsense::harness
