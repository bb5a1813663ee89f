#include "strainsense/harness/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "report_json.hpp"
#include "strainsense/errors.hpp"
#include "strainsense/harness/report.hpp"
#include "strainsense/homodyne.hpp"
#include "strainsense/transmon.hpp"
#include "strainsense/units.hpp"

namespace strainsense::harness {
namespace {

using detail::json;
using detail::quantity;
using dynamics::JointState;
using dynamics::Representation;
using phase_space::FockSpace;
using phase_space::ResonatorState;

constexpr int kQfiCutoff = 40;

// <X> of the read-out register basis state after the interaction.
struct ReadoutMean {
  EvolutionPath path;
  int cutoff;
  double jz;
  double mean_x;
};

ReadoutMean simulate_readout_mean(const dynamics::CouplingParams& cp, double eps, int n,
                                  homodyne::StateKind kind) {
  const dynamics::QubitRegister reg = kind == homodyne::StateKind::single
                                          ? dynamics::all_zero_state(1, Representation::exact)
                                          : dynamics::ghz_state(n, Representation::ghz_two_branch);
  const std::size_t readout = 0;  // |0> / |0...0>
  const double m = dynamics::jz_eigenvalue(reg.n_qubits(), reg.representation(), 0);
  const double g = dynamics::coupling_rate(cp, eps);

  auto run = [&](double theta_per_m) {
    const double alpha = std::abs(theta_per_m * m) / std::sqrt(2.0);
    const FockSpace space = FockSpace::adaptive(alpha);
    if (space.cutoff() > kMaxExperimentCutoff) return std::optional<std::pair<int, double>>{};
    const JointState psi = JointState::product(reg, ResonatorState::vacuum(space));
    const JointState out = dynamics::apply_collective_displacement(psi, theta_per_m);
    const double x = phase_space::moments(out.branches()[readout].resonator).mean_x;
    return std::optional<std::pair<int, double>>{{space.cutoff(), x}};
  };

  if (auto full = run(2.0 * g * cp.tau)) {
    return {EvolutionPath::exact_full, full->first, m, full->second};
  }
  // Displacements along X commute, so the g0 part is an exact additive shift.
  if (auto strain = run(2.0 * cp.g1 * eps * cp.tau)) {
    return {EvolutionPath::exact_strain_offset, strain->first, m,
            strain->second + 2.0 * cp.g0 * cp.tau * m};
  }
  return {EvolutionPath::analytic, 0, m, dynamics::mean_x_shift_analytic(cp, eps, m)};
}

json qfi_json(const metrology::QfiResult& q) {
  json out{{"convention", q.convention == metrology::GeneratorConvention::collective ? "collective" : "physical"},
           {"qfi_variance_route", quantity(q.qfi_variance_route, "per_strain_squared")},
           {"qfi_product_form", quantity(q.qfi_product_form, "per_strain_squared")},
           {"generator_mean", quantity(q.generator_mean, "dimensionless")},
           {"generator_second_moment", quantity(q.generator_second_moment, "dimensionless")},
           {"crb_single_shot", quantity(q.crb_single_shot, "strain")}};
  if (q.qfi_overlap_route) {
    out["qfi_overlap_route"] = quantity(*q.qfi_overlap_route, "per_strain_squared");
  }
  return out;
}

json coupling_inputs(const RunConfig& config) {
  const dynamics::CouplingParams cp = config.coupling_params();
  return json{{"g0_over_2pi", quantity(units::to_hz(cp.g0), "hz")},
              {"omega_q0_over_2pi", quantity(units::to_hz(cp.omega_q0), "hz")},
              {"omega_r_over_2pi", quantity(units::to_hz(cp.omega_r), "hz")},
              {"chi_eps_over_2pi", quantity(units::to_hz(cp.chi_eps), "hz_per_strain")},
              {"g1_over_2pi", quantity(units::to_hz(cp.g1), "hz_per_strain")},
              {"tau", quantity(cp.tau, "s")},
              {"sigma_x", quantity(config.homodyne.sigma_x, "dimensionless")},
              {"shots", detail::count(config.homodyne.shots)},
              {"nu", quantity(config.homodyne.nu, "shots_per_s")},
              {"n_qubits", detail::count(config.n_qubits)},
              {"seed", std::to_string(config.homodyne.seed)},
              {"chi_eps_unit_declared", std::string(to_string(config.strain_unit))},
              {"dispersive_ok", cp.dispersive_ok()}};
}

}  // namespace

std::string_view to_string(EvolutionPath p) {
  switch (p) {
    case EvolutionPath::exact_full:
      return "exact_full";
    case EvolutionPath::exact_strain_offset:
      return "exact_strain_offset";
    case EvolutionPath::analytic:
      return "analytic";
  }
  return "analytic";
}

EstimationExperiment run_estimation_experiment(const RunConfig& config, unsigned workers) {
  config.validate();
  const dynamics::CouplingParams cp = config.coupling_params();
  EstimationExperiment r;
  r.kind = config.experiment.state_kind;
  r.n_qubits = r.kind == homodyne::StateKind::single ? 1 : config.n_qubits;
  r.true_strain = config.true_strain();

  const ReadoutMean rm = simulate_readout_mean(cp, r.true_strain, r.n_qubits, r.kind);
  r.path = rm.path;
  r.fock_cutoff = rm.cutoff;
  r.readout_jz = rm.jz;
  r.mean_x_simulated = rm.mean_x;
  r.mean_x_analytic = dynamics::mean_x_shift_analytic(cp, r.true_strain, rm.jz);

  const double v = config.experiment.visibility;
  r.calibration = homodyne::calibration(cp, r.n_qubits, r.kind, v);
  const double record_mean = v * r.mean_x_simulated;

  const auto reps = static_cast<std::size_t>(config.experiment.repetitions);
  r.eps_hat.assign(reps, 0.0);
  r.std_error.assign(reps, 0.0);
  parallel_for(reps, workers, [&](std::size_t rep) {
    homodyne::HomodyneModel model = config.homodyne_model();
    model.seed = homodyne::derive_seed(config.homodyne.seed, rep);
    const std::vector<double> samples = homodyne::sample_shots(record_mean, model);
    const homodyne::EstimationResult est =
        homodyne::estimate_strain(samples, cp, r.n_qubits, r.kind, v);
    r.eps_hat[rep] = est.eps_hat;
    r.std_error[rep] = est.std_error;
  });

  double sum = 0.0;
  for (const double e : r.eps_hat) sum += e;
  r.mean_eps_hat = sum / static_cast<double>(reps);
  double ss = 0.0;
  for (const double e : r.eps_hat) ss += (e - r.mean_eps_hat) * (e - r.mean_eps_hat);
  r.empirical_std = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1))
                             : std::numeric_limits<double>::quiet_NaN();
  const auto shots = static_cast<double>(config.homodyne.shots);
  r.analytic_std = config.homodyne.sigma_x / (std::abs(r.calibration.slope) * std::sqrt(shots));
  const double se_mean = r.analytic_std / std::sqrt(static_cast<double>(reps));
  r.bias_in_standard_errors = (r.mean_eps_hat - r.true_strain) / se_mean;
  r.unbiased = std::abs(r.bias_in_standard_errors) < 4.0;
  r.std_within_10_percent = std::abs(r.empirical_std / r.analytic_std - 1.0) <= 0.10;

  r.delta_eps_single = metrology::sensitivity_single(config.homodyne.sigma_x, cp);
  r.delta_eps_ghz = metrology::sensitivity_ghz(config.homodyne.sigma_x, cp, r.n_qubits);
  r.delta_eps_per_root_hz = homodyne::per_root_hz(
      r.kind == homodyne::StateKind::single ? r.delta_eps_single : r.delta_eps_ghz,
      config.homodyne.nu);

  const dynamics::QubitRegister reg = r.kind == homodyne::StateKind::single
                                          ? dynamics::all_zero_state(1, Representation::exact)
                                          : dynamics::ghz_state(r.n_qubits);
  const ResonatorState vac = ResonatorState::vacuum(FockSpace(kQfiCutoff));
  r.qfi_collective = metrology::qfi_both_routes(reg, vac, cp, metrology::GeneratorConvention::collective);
  r.qfi_physical = metrology::qfi_both_routes(reg, vac, cp, metrology::GeneratorConvention::physical);
  r.crb_per_estimate = metrology::cramer_rao_bound(r.qfi_physical.qfi_variance_route, shots);
  return r;
}

std::string estimation_report_json(const EstimationExperiment& r, const RunConfig& config) {
  json inputs = coupling_inputs(config);
  inputs["true_strain"] = quantity(r.true_strain, "strain");
  inputs["repetitions"] = detail::count(config.experiment.repetitions);
  inputs["visibility"] = quantity(config.experiment.visibility, "dimensionless");
  inputs["state_kind"] = r.kind == homodyne::StateKind::ghz ? "ghz" : "single";

  json report{
      {"report", "estimation"},
      {"inputs", inputs},
      {"dynamics",
       {{"evolution_path", std::string(to_string(r.path))},
        {"fock_cutoff", detail::count(r.fock_cutoff)},
        {"readout_jz", quantity(r.readout_jz, "dimensionless")},
        {"mean_x_simulated", quantity(r.mean_x_simulated, "dimensionless")},
        {"mean_x_analytic", quantity(r.mean_x_analytic, "dimensionless")}}},
      {"calibration",
       {{"offset", quantity(r.calibration.offset, "dimensionless")},
        {"slope", quantity(r.calibration.slope, "per_strain")}}},
      {"estimates",
       {{"n_estimates", detail::count(static_cast<long long>(r.eps_hat.size()))},
        {"mean_eps_hat", quantity(r.mean_eps_hat, "strain")},
        {"bias", quantity(r.mean_eps_hat - r.true_strain, "strain")},
        {"bias_in_standard_errors", quantity(r.bias_in_standard_errors, "dimensionless")},
        {"empirical_std", quantity(r.empirical_std, "strain")},
        {"analytic_std", quantity(r.analytic_std, "strain")},
        {"std_ratio", quantity(r.empirical_std / r.analytic_std, "dimensionless")},
        {"unbiased_within_4_standard_errors", r.unbiased},
        {"std_within_10_percent", r.std_within_10_percent},
        {"empirical_std_over_crb", quantity(r.empirical_std / r.crb_per_estimate, "dimensionless")}}},
      {"sensitivity",
       {{"delta_eps_single", quantity(r.delta_eps_single, "strain")},
        {"delta_eps_ghz", quantity(r.delta_eps_ghz, "strain")},
        {"delta_eps_per_root_hz", quantity(r.delta_eps_per_root_hz, "strain_per_sqrt_hz")},
        {"qfi", quantity(r.qfi_physical.qfi_variance_route, "per_strain_squared")},
        {"crb_per_estimate", quantity(r.crb_per_estimate, "strain")},
        {"crb_per_root_hz",
         quantity(metrology::cramer_rao_bound(r.qfi_physical.qfi_variance_route, config.homodyne.nu),
                  "strain_per_sqrt_hz")}}},
      {"qfi", {{"collective", qfi_json(r.qfi_collective)}, {"physical", qfi_json(r.qfi_physical)}}},
      {"provenance", detail::provenance(config)}};
  return detail::dump_report(report);
}

std::string transmon_report_json(const RunConfig& config) {
  const transmon::TransmonParams tp =
      config.transmon_params().value_or(transmon::TransmonParams{
          units::from_hz(default_transmon_section().e_c), units::from_hz(default_transmon_section().e_j0),
          default_transmon_section().beta, 0.0, transmon::kDefaultChargeCutoff});
  tp.validate();
  const transmon::SpectrumResult exact = transmon::charge_spectrum_exact(tp, 0.0);
  const double chi_analytic = transmon::strain_susceptibility(tp, transmon::SusceptibilityMode::analytic);
  const double chi_numeric = transmon::strain_susceptibility(tp, transmon::SusceptibilityMode::numeric);

  json approx_json = json::object();
  if (tp.in_transmon_regime()) {
    const transmon::FrequencyApprox a = transmon::frequency_approx(tp, 0.0);
    approx_json = {{"omega_q0_over_2pi", quantity(units::to_hz(a.omega_q0), "hz")},
                   {"chi_taylor_over_2pi", quantity(units::to_hz(a.chi_taylor), "hz_per_strain")},
                   {"relative_error_vs_exact",
                    quantity(std::abs(a.omega_q0 - exact.omega01) / exact.omega01, "dimensionless")}};
  }

  // Approximation error across E_J/E_C at fixed E_C.
  json scan = json::array();
  double previous = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (const double ratio : {20.0, 50.0, 100.0, 200.0}) {
    transmon::TransmonParams p = tp;
    p.e_j0 = ratio * tp.e_c;
    const double w_exact = transmon::charge_spectrum_exact(p, 0.0).omega01;
    const double w_approx = transmon::frequency_approx(p, 0.0).omega_q0;
    const double err = std::abs(w_approx - w_exact) / w_exact;
    monotone = monotone && err < previous;
    previous = err;
    scan.push_back({{"ej_over_ec", quantity(ratio, "dimensionless")},
                    {"omega01_exact_over_2pi", quantity(units::to_hz(w_exact), "hz")},
                    {"omega01_approx_over_2pi", quantity(units::to_hz(w_approx), "hz")},
                    {"relative_error", quantity(err, "dimensionless")}});
  }

  json report{
      {"report", "transmon"},
      {"inputs",
       {{"e_c_over_2pi", quantity(units::to_hz(tp.e_c), "hz")},
        {"e_j0_over_2pi", quantity(units::to_hz(tp.e_j0), "hz")},
        {"beta", quantity(tp.beta, "per_strain")},
        {"n_g", quantity(tp.n_g, "dimensionless")},
        {"charge_cutoff", detail::count(tp.charge_cutoff)},
        {"ej_over_ec", quantity(tp.ej_over_ec(), "dimensionless")},
        {"transmon_regime", tp.in_transmon_regime()}}},
      {"exact",
       {{"omega01_over_2pi", quantity(units::to_hz(exact.omega01), "hz")},
        {"omega12_over_2pi", quantity(units::to_hz(exact.omega12), "hz")},
        {"anharmonicity_over_2pi", quantity(units::to_hz(exact.omega12 - exact.omega01), "hz")},
        {"cutoff_convergence", quantity(exact.cutoff_convergence, "dimensionless")}}},
      {"approximation", approx_json},
      {"susceptibility",
       {{"chi_analytic_over_2pi", quantity(units::to_hz(chi_analytic), "hz_per_strain")},
        {"chi_numeric_over_2pi", quantity(units::to_hz(chi_numeric), "hz_per_strain")},
        {"relative_deviation",
         quantity(std::abs(chi_numeric - chi_analytic) / std::abs(chi_analytic), "dimensionless")}}},
      {"ratio_scan", scan},
      {"ratio_scan_error_decreasing", monotone},
      {"provenance", detail::provenance(config)}};
  return detail::dump_report(report);
}

std::string qfi_report_json(const RunConfig& config) {
  const dynamics::CouplingParams cp = config.coupling_params();
  const ResonatorState vac = ResonatorState::vacuum(FockSpace(kQfiCutoff));
  const double nu = config.homodyne.nu;
  const double p_sq = phase_space::moments(vac).mean_p_sq;

  json scan = json::array();
  double f1_collective = 0.0;
  for (int n = 1; n <= config.n_qubits; ++n) {
    const dynamics::QubitRegister ghz = dynamics::ghz_state(n);
    const metrology::QfiResult collective =
        metrology::qfi_both_routes(ghz, vac, cp, metrology::GeneratorConvention::collective);
    const metrology::QfiResult phys =
        metrology::qfi_both_routes(ghz, vac, cp, metrology::GeneratorConvention::physical);
    if (n == 1) f1_collective = collective.qfi_variance_route;
    const double crb_collective = metrology::cramer_rao_bound(collective.qfi_variance_route, nu);
    const double crb_phys = metrology::cramer_rao_bound(phys.qfi_variance_route, nu);
    const double homodyne_vac =
        metrology::sensitivity_ghz(homodyne::kSigmaVacuum, cp, n) / std::sqrt(nu);
    scan.push_back(
        {{"N", detail::count(n)},
         {"collective", qfi_json(collective)},
         {"physical", qfi_json(phys)},
         {"qfi_ratio_to_n1", quantity(collective.qfi_variance_route / f1_collective, "dimensionless")},
         {"crb_collective", quantity(crb_collective, "strain")},
         {"crb_physical", quantity(crb_phys, "strain")},
         {"crb_closed_form", quantity(metrology::cramer_rao_ghz_closed_form(cp, n, nu, p_sq), "strain")},
         {"homodyne_ghz_vacuum_noise", quantity(homodyne_vac, "strain")},
         {"bound_ordering_collective", crb_collective <= homodyne_vac * (1.0 + 1e-9)},
         {"bound_ordering_physical", crb_phys <= homodyne_vac * (1.0 + 1e-9)}});
  }

  const int n = config.n_qubits;
  const dynamics::QubitRegister zeros = dynamics::all_zero_state(n, Representation::ghz_two_branch);
  const metrology::QfiResult zeros_qfi =
      metrology::qfi_both_routes(zeros, vac, cp, metrology::GeneratorConvention::collective);

  json report{{"report", "qfi"},
              {"inputs", coupling_inputs(config)},
              {"resonator", {{"state", "vacuum"}, {"mean_p_sq", quantity(p_sq, "dimensionless")}}},
              {"ghz_scan", scan},
              {"all_zero_register", qfi_json(zeros_qfi)},
              {"provenance", detail::provenance(config)}};
  return detail::dump_report(report);
}

RamseyCharacterization characterize_ramsey(const dynamics::CouplingParams& base, int n,
                                           const std::vector<double>& g_tau,
                                           double response_g_tau, const std::vector<double>& p0) {
  if (p0.size() < 2) throw ModelRangeError("characterize_ramsey: need at least two p0 values");
  auto params = [&](double gt) {
    return dynamics::CouplingParams::make(gt / base.tau, base.omega_q0, base.omega_r,
                                          base.chi_eps, base.tau);
  };
  RamseyCharacterization ch;
  ch.n_qubits = n;
  for (const double gt : g_tau) {
    const FockSpace space = FockSpace::adaptive(gt * n / std::sqrt(2.0));
    const dynamics::RamseyResult res =
        dynamics::ramsey_sequence(n, params(gt), 0.0, ResonatorState::vacuum(space));
    ch.deviation.push_back({gt, 0.0, res});
  }
  const double p_max = *std::max_element(p0.begin(), p0.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  const FockSpace space =
      FockSpace::adaptive((std::abs(p_max) + response_g_tau * n) / std::sqrt(2.0));
  for (const double p : p0) {
    const ResonatorState init = phase_space::coherent_state_from_quadratures(0.0, p, space);
    ch.response.push_back({response_g_tau, p,
                           dynamics::ramsey_sequence(n, params(response_g_tau), 0.0, init)});
  }

  // Least-squares line through (p0, measured_phase).
  const double k = static_cast<double>(p0.size());
  double mx = 0.0;
  double my = 0.0;
  for (const RamseyPoint& pt : ch.response) {
    mx += pt.p0 / k;
    my += pt.result.measured_phase / k;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (const RamseyPoint& pt : ch.response) {
    sxy += (pt.p0 - mx) * (pt.result.measured_phase - my);
    sxx += (pt.p0 - mx) * (pt.p0 - mx);
  }
  ch.phase_slope = sxy / sxx;
  ch.phase_intercept = my - ch.phase_slope * mx;
  ch.phase_slope_analytic = 2.0 * response_g_tau * n;
  double max_resid = 0.0;
  double max_val = 0.0;
  for (const RamseyPoint& pt : ch.response) {
    const double fit = ch.phase_intercept + ch.phase_slope * pt.p0;
    max_resid = std::max(max_resid, std::abs(fit - pt.result.measured_phase));
    max_val = std::max(max_val, std::abs(pt.result.measured_phase));
  }
  ch.linear_fit_residual = max_val > 0.0 ? max_resid / max_val : max_resid;
  return ch;
}

RamseyCharacterization default_ramsey_characterization(const RunConfig& config) {
  return characterize_ramsey(config.coupling_params(), 2, {0.01, 0.05, 0.1}, 0.05,
                             {0.1, 0.2, 0.3});
}

std::string ramsey_report_json(const RamseyCharacterization& ch, const RunConfig& config) {
  auto point_json = [](const RamseyPoint& pt) {
    return json{{"g_tau", quantity(pt.g_tau, "dimensionless")},
                {"p0", quantity(pt.p0, "dimensionless")},
                {"phase_analytic", quantity(pt.result.phase, "rad")},
                {"measured_phase", quantity(pt.result.measured_phase, "rad")},
                {"jz_final_exact", quantity(pt.result.jz_final_exact, "dimensionless")},
                {"jz_final_analytic", quantity(pt.result.jz_final_analytic, "dimensionless")},
                {"deviation", quantity(pt.result.deviation, "dimensionless")},
                {"visibility", quantity(pt.result.visibility, "dimensionless")}};
  };
  json dev = json::array();
  for (const RamseyPoint& pt : ch.deviation) dev.push_back(point_json(pt));
  json resp = json::array();
  for (const RamseyPoint& pt : ch.response) resp.push_back(point_json(pt));
  json report{{"report", "ramsey"},
              {"n_qubits", detail::count(ch.n_qubits)},
              {"vacuum_deviation", dev},
              {"phase_response", resp},
              {"phase_slope", quantity(ch.phase_slope, "rad")},
              {"phase_intercept", quantity(ch.phase_intercept, "rad")},
              {"phase_slope_analytic", quantity(ch.phase_slope_analytic, "rad")},
              {"linear_fit_residual", quantity(ch.linear_fit_residual, "dimensionless")},
              {"provenance", detail::provenance(config)}};
  return detail::dump_report(report);
}

}  // namespace strainsense::harness
