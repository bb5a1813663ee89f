#include "strainsense/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "strainsense/errors.hpp"

namespace strainsense::homodyne {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed + kGolden) ^ mix64(counter * kGolden + 0x632BE59BD9B4E019ULL));
}

// (0, 1] with 53 random bits.
double to_unit_open_left(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Neumaier-compensated sum of a sorted copy: independent of input order.
double order_free_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

void HomodyneModel::validate() const {
  if (!(sigma_x > 0.0)) throw ModelRangeError("homodyne: sigma_x must be positive");
  if (shots < 1) throw ModelRangeError("homodyne: shots must be >= 1");
}

double standard_normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = to_unit_open_left(counter_hash(seed, 2 * index));
  const double u2 = to_unit_open_left(counter_hash(seed, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream + kGolden));
}

void sample_shots_range(double mean_x, const HomodyneModel& model, std::uint64_t first,
                        std::span<double> out) {
  model.validate();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mean_x + model.sigma_x * standard_normal(model.seed, first + i);
  }
}

std::vector<double> sample_shots(double mean_x, const HomodyneModel& model) {
  model.validate();
  std::vector<double> out(static_cast<std::size_t>(model.shots));
  sample_shots_range(mean_x, model, 0, out);
  return out;
}

Calibration calibration(const dynamics::CouplingParams& cp, int n, StateKind kind,
                        double visibility) {
  if (n < 1) throw ModelRangeError("calibration: n must be >= 1");
  const double k = kind == StateKind::single ? 1.0 : static_cast<double>(n);
  return Calibration{visibility * cp.g0 * cp.tau * k, visibility * cp.g1 * cp.tau * k};
}

EstimationResult estimate_strain(std::span<const double> samples,
                                 const dynamics::CouplingParams& cp, int n, StateKind kind,
                                 double visibility) {
  if (samples.empty()) throw ModelRangeError("estimate_strain: no samples");
  const Calibration cal = calibration(cp, n, kind, visibility);
  if (cal.slope == 0.0 || !std::isfinite(cal.slope)) {
    throw DegenerateEstimatorError("estimate_strain: calibration slope g1 tau K is zero");
  }
  const auto count = static_cast<double>(samples.size());
  std::vector<double> values(samples.begin(), samples.end());
  const double mean = order_free_sum(values) / count;

  EstimationResult out;
  out.sample_mean_x = mean;
  out.shots_used = static_cast<std::int64_t>(samples.size());
  out.eps_hat = (mean - cal.offset) / cal.slope;
  if (samples.size() < 2) {
    out.std_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  for (double& v : values) v = (v - mean) * (v - mean);
  const double variance = order_free_sum(std::move(values)) / (count - 1.0);
  out.std_error = std::sqrt(variance) / (std::abs(cal.slope) * std::sqrt(count));
  return out;
}

double per_root_hz(double delta_eps_shot, double nu) {
  if (!(nu > 0.0)) throw ModelRangeError("per_root_hz: nu must be positive");
  return delta_eps_shot / std::sqrt(nu);
}

}  // namespace strainsense::homodyne
