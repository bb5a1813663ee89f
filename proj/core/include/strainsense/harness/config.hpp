#pragma once

// Run configuration shared by every CLI subcommand. JSON and TOML files use
// the same schema; values are stored exactly as written together with their
// declared units and converted to rad/s and per-strain on demand.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strainsense/dynamics.hpp"
#include "strainsense/errors.hpp"
#include "strainsense/homodyne.hpp"
#include "strainsense/transmon.hpp"

namespace strainsense::harness {

using strainsense::ConfigError;
using strainsense::IoError;

enum class FrequencyUnit { hz_over_2pi, rad_s };
enum class StrainUnit { per_strain, per_microstrain };
enum class OutputFormat { csv, json };
enum class ConfigFormat { json, toml };
enum class AxisScale { linear, log };

std::string_view to_string(FrequencyUnit u);
std::string_view to_string(StrainUnit u);
std::string_view to_string(OutputFormat f);
StrainUnit parse_strain_unit(std::string_view text);  // accepts '-' or '_'
OutputFormat parse_output_format(std::string_view text);

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  AxisScale scale = AxisScale::linear;

  /// Grid values, endpoints included.
  std::vector<double> values() const;
  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

struct MarkerSpec {
  std::string label;
  double g0 = 0.0;
  double chi_eps = 0.0;
  friend bool operator==(const MarkerSpec&, const MarkerSpec&) = default;
};

struct SweepSpec {
  std::vector<AxisSpec> axes;
  std::map<std::string, double> fixed;
  std::vector<MarkerSpec> markers;

  /// points >= 2 and max > min per axis, positive bounds on log axes.
  void validate() const;
  const AxisSpec* axis(std::string_view name) const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Frequencies in the declared frequency unit; beta and chi_eps in the
/// declared strain unit.
struct TransmonSection {
  double e_c = 0.0;
  double e_j0 = 0.0;
  double beta = 0.0;
  double n_g = 0.0;
  int charge_cutoff = transmon::kDefaultChargeCutoff;
  friend bool operator==(const TransmonSection&, const TransmonSection&) = default;
};

struct CouplingSection {
  double g0 = 0.0;
  double omega_q0 = 0.0;
  double omega_r = 0.0;
  double chi_eps = 0.0;
  double tau_s = 0.0;
  friend bool operator==(const CouplingSection&, const CouplingSection&) = default;
};

struct HomodyneSection {
  double sigma_x = homodyne::kSigmaStandardQuantumLimit;
  std::uint64_t seed = 0;
  std::int64_t shots = 1;
  double nu = 1.0;  ///< shots per second
  friend bool operator==(const HomodyneSection&, const HomodyneSection&) = default;
};

struct ExperimentSection {
  double true_strain = 0.0;  ///< in the declared strain unit
  int repetitions = 200;
  homodyne::StateKind state_kind = homodyne::StateKind::ghz;
  double visibility = 1.0;
  friend bool operator==(const ExperimentSection&, const ExperimentSection&) = default;
};

struct RunConfig {
  FrequencyUnit frequency_unit = FrequencyUnit::hz_over_2pi;
  StrainUnit strain_unit = StrainUnit::per_strain;
  std::optional<TransmonSection> transmon;
  CouplingSection coupling;
  HomodyneSection homodyne;
  int n_qubits = 1;
  ExperimentSection experiment;
  int scaling_n_max = 100;
  std::optional<SweepSpec> sweep;
  std::string output_path;
  std::optional<OutputFormat> output_format;  ///< unset: subcommand default

  /// Throws ConfigError when any section fails its own validation.
  void validate() const;

  /// rad/s per (declared frequency unit).
  double frequency_scale() const;
  /// Multiplier taking a per-(declared strain unit) value to per strain.
  double strain_scale() const;

  dynamics::CouplingParams coupling_params() const;
  std::optional<transmon::TransmonParams> transmon_params() const;
  homodyne::HomodyneModel homodyne_model() const;
  /// True strain of the estimation experiment in strain.
  double true_strain() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Inputs of the worked numerical example: omega_q0/2pi = 5 GHz,
/// chi_eps = 50 MHz/strain, g0/2pi = 50 MHz, tau = 100 ns, sigma_X = 1,
/// nu = 1e5, N = 10. omega_r/2pi = 7 GHz is not part of the example.
RunConfig worked_example_config();

/// Same inputs with sigma_X = 1/sqrt 2, the vacuum quadrature rms.
RunConfig vacuum_noise_config();

/// E_C/2pi = 0.25 GHz, E_J/2pi = 12.5 GHz (E_J/E_C = 50), beta = 100.
TransmonSection default_transmon_section();

/// Default g1 contour grid: g0/2pi in [10, 200] MHz and chi_eps in
/// [10, 500] MHz per declared strain unit, both log, 101 x 101.
SweepSpec default_contour_sweep();

RunConfig parse_config(std::string_view text, ConfigFormat format);
/// Format chosen by extension (.json or .toml).
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON text (sorted keys, shortest round-trip doubles).
std::string to_json(const RunConfig& config);
/// 16 hex digits of FNV-1a over to_json(config).
std::string config_hash(const RunConfig& config);

}  // namespace strainsense::harness
