#pragma once

// Homodyne X-quadrature records and calibrated linear strain inversion.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "strainsense/dynamics.hpp"

namespace strainsense::homodyne {

/// rms quadrature noise of a measurement at the standard quantum limit.
inline constexpr double kSigmaStandardQuantumLimit = 1.0;
/// rms of the vacuum X quadrature, sqrt(<X^2>_vac) = 1/sqrt 2.
inline constexpr double kSigmaVacuum = 0.70710678118654752440;

struct HomodyneModel {
  double sigma_x = kSigmaStandardQuantumLimit;
  std::uint64_t seed = 0;
  std::int64_t shots = 1;

  /// Throws ModelRangeError unless sigma_x > 0 and shots >= 1.
  void validate() const;

  friend bool operator==(const HomodyneModel&, const HomodyneModel&) = default;
};

/// Standard normal variate fully determined by (seed, index).
double standard_normal(std::uint64_t seed, std::uint64_t index);

/// Independent 64-bit stream seed derived from a base seed, e.g. per Monte
/// Carlo repetition.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Draws shots samples from Normal(mean_x, sigma_x^2).
std::vector<double> sample_shots(double mean_x, const HomodyneModel& model);

/// Fills out with shots [first, first + out.size()). Any split of the index
/// range across workers reproduces sample_shots bit for bit.
void sample_shots_range(double mean_x, const HomodyneModel& model, std::uint64_t first,
                        std::span<double> out);

enum class StateKind { single, ghz };

struct EstimationResult {
  double eps_hat = 0.0;
  double std_error = 0.0;  ///< NaN for a single shot
  double sample_mean_x = 0.0;
  std::int64_t shots_used = 0;
};

/// Calibration line <X> = V (g0 + g1 eps) tau K, K = 1 (single qubit in |0>)
/// or N (GHZ readout slope). V is an optional visibility factor.
struct Calibration {
  double offset = 0.0;
  double slope = 0.0;
};

Calibration calibration(const dynamics::CouplingParams& cp, int n, StateKind kind,
                        double visibility = 1.0);

/// eps_hat = (mean - offset) / slope, std_error = s / (|slope| sqrt shots).
/// The result does not depend on the order of the samples.
EstimationResult estimate_strain(std::span<const double> samples,
                                 const dynamics::CouplingParams& cp, int n, StateKind kind,
                                 double visibility = 1.0);

/// delta / sqrt(nu): sensitivity per sqrt(Hz) at nu shots per second.
double per_root_hz(double delta_eps_shot, double nu);

}  // namespace strainsense::homodyne
