#pragma once

// End-to-end reports: Monte Carlo strain estimation, transmon spectrum,
// QFI / Cramer-Rao bounds and the Ramsey characterization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strainsense/dynamics.hpp"
#include "strainsense/harness/config.hpp"
#include "strainsense/metrology.hpp"

namespace strainsense::harness {

/// Largest Fock cutoff the estimation pipeline will simulate directly.
inline constexpr int kMaxExperimentCutoff = 200;

enum class EvolutionPath {
  exact_full,           ///< full g(eps) tau displacement simulated
  exact_strain_offset,  ///< g1 eps tau part simulated, g0 tau offset added exactly
  analytic,             ///< both parts too large for the cutoff cap
};

std::string_view to_string(EvolutionPath p);

struct EstimationExperiment {
  int n_qubits = 1;  ///< 1 for the single-qubit kind
  homodyne::StateKind kind = homodyne::StateKind::single;
  double true_strain = 0.0;
  EvolutionPath path = EvolutionPath::analytic;
  int fock_cutoff = 0;
  double readout_jz = 0.0;        ///< J_z eigenvalue of the read-out branch
  double mean_x_simulated = 0.0;  ///< <X> of the read-out branch
  double mean_x_analytic = 0.0;   ///< 2 g(eps) tau m
  homodyne::Calibration calibration;
  std::vector<double> eps_hat;    ///< one per repetition, repetition order
  std::vector<double> std_error;  ///< reported per repetition
  double mean_eps_hat = 0.0;
  double empirical_std = 0.0;
  double analytic_std = 0.0;  ///< sigma_X / (|slope| sqrt shots)
  double bias_in_standard_errors = 0.0;
  bool unbiased = false;             ///< |bias| < 4 analytic_std / sqrt(reps)
  bool std_within_10_percent = false;

  double delta_eps_single = 0.0;
  double delta_eps_ghz = 0.0;
  double delta_eps_per_root_hz = 0.0;
  metrology::QfiResult qfi_collective;
  metrology::QfiResult qfi_physical;
  double crb_per_estimate = 0.0;  ///< physical generator, nu = shots
};

/// true strain -> dynamics <X> -> homodyne records -> estimate_strain, per
/// repetition with seed derive_seed(seed, repetition). Output does not depend
/// on the worker count.
EstimationExperiment run_estimation_experiment(const RunConfig& config, unsigned workers = 1);
std::string estimation_report_json(const EstimationExperiment& result, const RunConfig& config);

std::string transmon_report_json(const RunConfig& config);
std::string qfi_report_json(const RunConfig& config);

struct RamseyPoint {
  double g_tau = 0.0;
  double p0 = 0.0;
  dynamics::RamseyResult result;
};

struct RamseyCharacterization {
  int n_qubits = 2;
  std::vector<RamseyPoint> deviation;  ///< vacuum resonator, one per g tau
  std::vector<RamseyPoint> response;   ///< displaced resonator, one per p0
  double phase_slope = 0.0;            ///< fitted d(measured_phase)/d p0
  double phase_intercept = 0.0;
  double phase_slope_analytic = 0.0;   ///< 2 g tau N
  double linear_fit_residual = 0.0;    ///< max |fit - data| / max |data|
};

/// Runs ramsey_sequence at eps = 0 with g0 tau = each g_tau (vacuum), then
/// at g0 tau = response_g_tau for coherent resonators with <X> = 0, <P> = p0.
RamseyCharacterization characterize_ramsey(const dynamics::CouplingParams& base, int n,
                                           const std::vector<double>& g_tau,
                                           double response_g_tau, const std::vector<double>& p0);
std::string ramsey_report_json(const RamseyCharacterization& ch, const RunConfig& config);
/// characterize_ramsey with N = 2, g tau in {0.01, 0.05, 0.1}, p0 in {0.1, 0.2, 0.3}.
RamseyCharacterization default_ramsey_characterization(const RunConfig& config);

}  // namespace strainsense::harness
