#include "strainsense/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "strainsense/errors.hpp"

namespace strainsense::metrology {
namespace {

using dynamics::Branch;
using phase_space::Complex;
using phase_space::Vector;

QfiResult variance_route(const JointState& state, const CouplingParams& cp,
                         GeneratorConvention conv) {
  const double c = generator_scale(cp, conv);
  const dynamics::JointMoments jm = state.moments();

  // Register-side moments of the product factors.
  double reg_jz = 0.0;
  double reg_jz_sq = 0.0;
  for (std::size_t b = 0; b < state.branches().size(); ++b) {
    const double w = std::norm(state.branches()[b].weight);
    const double m = state.jz(b);
    reg_jz += w * m;
    reg_jz_sq += w * m * m;
  }
  const phase_space::Moments res = phase_space::moments(state.branches().front().resonator);

  QfiResult out;
  out.convention = conv;
  out.generator_mean = c * jm.mean_jz_p;
  out.generator_second_moment = c * c * jm.mean_jz_sq_p_sq;
  out.qfi_variance_route =
      4.0 * (out.generator_second_moment - out.generator_mean * out.generator_mean);
  out.qfi_product_form =
      4.0 * c * c * (reg_jz_sq * res.mean_p_sq - reg_jz * reg_jz * res.mean_p * res.mean_p);
  out.crb_single_shot = out.qfi_variance_route > 0.0
                            ? 1.0 / std::sqrt(out.qfi_variance_route)
                            : std::numeric_limits<double>::infinity();
  return out;
}

// F from a central difference with step h. Derivative vectors are formed
// branch by branch to avoid cancellation in <d psi|d psi>.
double central_difference_qfi(const JointState& psi0, double scale, double h) {
  const JointState plus = dynamics::apply_collective_displacement(psi0, scale * h);
  const JointState minus = dynamics::apply_collective_displacement(psi0, -scale * h);
  double dd = 0.0;
  Complex pd{0.0, 0.0};
  for (std::size_t b = 0; b < psi0.branches().size(); ++b) {
    const Complex w = psi0.branches()[b].weight;
    const double w2 = std::norm(w);
    if (w2 == 0.0) continue;
    const Vector diff = (plus.branches()[b].resonator.amplitudes() -
                         minus.branches()[b].resonator.amplitudes()) /
                        (2.0 * h);
    dd += w2 * diff.squaredNorm();
    pd += w2 * psi0.branches()[b].resonator.amplitudes().dot(diff);
  }
  return 4.0 * (dd - std::norm(pd));
}

}  // namespace

double generator_scale(const CouplingParams& cp, GeneratorConvention conv) {
  const double base = cp.g1 * cp.tau;
  return conv == GeneratorConvention::collective ? base : 2.0 * base;
}

double sensitivity_single(double sigma_x, const CouplingParams& cp) {
  const double slope = std::abs(cp.g1 * cp.tau);
  if (slope == 0.0) throw DegenerateEstimatorError("sensitivity_single: g1 tau is zero");
  return sigma_x / slope;
}

double sensitivity_ghz(double sigma_x, const CouplingParams& cp, int n) {
  if (n < 1) throw ModelRangeError("sensitivity_ghz: n must be >= 1");
  return sensitivity_single(sigma_x, cp) / n;
}

QfiResult qfi_generator_variance(const QubitRegister& reg, const ResonatorState& resonator,
                                 const CouplingParams& cp, GeneratorConvention conv) {
  return variance_route(JointState::product(reg, resonator), cp, conv);
}

QfiResult qfi_generator_variance(const JointState& state, const CouplingParams& cp,
                                 GeneratorConvention conv) {
  if (!state.is_product()) {
    throw UnsupportedStateError(
        "qfi_generator_variance: state is not a register (x) resonator product");
  }
  return variance_route(state, cp, conv);
}

double default_qfi_step(const CouplingParams& cp, int n) {
  const double slope = std::abs(cp.g1 * cp.tau) * n;
  if (slope == 0.0) return 1e-4;
  return 1e-4 / slope;
}

double qfi_finite_difference(const QubitRegister& reg, const ResonatorState& resonator,
                             const CouplingParams& cp, double /*eps0*/, double h,
                             GeneratorConvention conv) {
  // The family exp(-i (eps - eps0) G) |psi0> has eps-independent QFI, and
  // |psi(eps0)> = |psi0>; eps0 only labels the expansion point.
  const double scale = generator_scale(cp, conv);
  if (scale == 0.0) return 0.0;
  const double increment = std::abs(h * cp.g1 * cp.tau);
  if (!(increment >= kMinQfiStep && increment <= kMaxQfiStep)) {
    std::ostringstream msg;
    msg << "qfi_finite_difference: |h g1 tau| = " << increment << " outside ["
        << kMinQfiStep << ", " << kMaxQfiStep << "]";
    throw StepError(msg.str());
  }
  const JointState psi0 = JointState::product(reg, resonator);
  const double coarse = central_difference_qfi(psi0, scale, h);
  const double fine = central_difference_qfi(psi0, scale, 0.5 * h);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  const double ref = std::max(std::abs(extrapolated), std::numeric_limits<double>::min());
  if (std::abs(fine - coarse) / ref > kRichardsonTolerance) {
    std::ostringstream msg;
    msg << "qfi_finite_difference: Richardson residual " << std::abs(fine - coarse) / ref
        << " exceeds " << kRichardsonTolerance << "; reduce h";
    throw StepError(msg.str());
  }
  return extrapolated;
}

QfiResult qfi_both_routes(const QubitRegister& reg, const ResonatorState& resonator,
                          const CouplingParams& cp, GeneratorConvention conv,
                          std::optional<double> h) {
  QfiResult out = qfi_generator_variance(reg, resonator, cp, conv);
  const double step = h.value_or(default_qfi_step(cp, reg.n_qubits()));
  out.qfi_overlap_route = qfi_finite_difference(reg, resonator, cp, 0.0, step, conv);
  return out;
}

double cramer_rao_bound(double qfi, double nu) {
  if (!(qfi > 0.0)) throw UnidentifiableError("cramer_rao_bound: Fisher information is zero");
  if (!(nu >= 1.0)) throw ModelRangeError("cramer_rao_bound: nu must be >= 1");
  return 1.0 / std::sqrt(nu * qfi);
}

double cramer_rao_ghz_closed_form(const CouplingParams& cp, int n, double nu, double mean_p_sq) {
  const double slope = std::abs(cp.g1 * cp.tau) * n;
  if (slope == 0.0 || !(mean_p_sq > 0.0)) {
    throw UnidentifiableError("cramer_rao_ghz_closed_form: zero Fisher information");
  }
  return 1.0 / (slope * std::sqrt(nu * mean_p_sq));
}

std::vector<ScalingRow> scaling_curves(int n_max, bool normalize, double single_value) {
  if (n_max < 2) throw ModelRangeError("scaling_curves: n_max must be >= 2");
  const double scale = normalize ? 1.0 : single_value;
  std::vector<ScalingRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    rows.push_back(ScalingRow{n, scale / std::sqrt(static_cast<double>(n)),
                              scale / static_cast<double>(n)});
  }
  return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ModelRangeError("loglog_slope: need two equal-length series of >= 2 points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace strainsense::metrology
