#pragma once

// Sensitivity formulas, quantum Fisher information by two independent routes,
// Cramer-Rao bounds and SQL / Heisenberg scaling curves.
//
// Strain is the estimated parameter, so Fisher information is reported in
// 1/strain^2 and sensitivities in strain.

#include <optional>
#include <span>
#include <vector>

#include "strainsense/dynamics.hpp"

namespace strainsense::metrology {

using dynamics::CouplingParams;
using dynamics::JointState;
using dynamics::QubitRegister;
using phase_space::ResonatorState;

/// Normalization of the strain generator G in U(eps) = exp(-i eps G).
enum class GeneratorConvention {
  /// G = g1 tau J_z (x) P: the collective operator of the QFI derivation
  /// taken as J_z. Reproduces F_Q = (g1 tau)^2 N^2 <P^2> for GHZ.
  collective,
  /// G = 2 g1 tau J_z (x) P: the eps-derivative of the simulated evolution
  /// exp(-i 2 g(eps) tau J_z (x) P).
  physical,
};

/// Coefficient c in G = c J_z (x) P (per unit strain).
double generator_scale(const CouplingParams& cp, GeneratorConvention conv);

/// sigma_X / (g1 tau). Throws DegenerateEstimatorError when g1 tau = 0.
double sensitivity_single(double sigma_x, const CouplingParams& cp);

/// sigma_X / (g1 tau N).
double sensitivity_ghz(double sigma_x, const CouplingParams& cp, int n);

struct QfiResult {
  double qfi_variance_route = 0.0;             ///< 4 Var(G), 1/strain^2
  std::optional<double> qfi_overlap_route;     ///< finite-difference route
  double qfi_product_form = 0.0;               ///< 4 c^2 (<Jz^2><P^2> - <Jz>^2<P>^2)
  double generator_mean = 0.0;                 ///< <G> on the full state
  double generator_second_moment = 0.0;        ///< <G^2> on the full state
  double crb_single_shot = 0.0;                ///< 1 / sqrt(F_Q), nu = 1
  GeneratorConvention convention = GeneratorConvention::collective;
};

/// Variance route on the product state register (x) resonator. Generator
/// moments are taken on the full joint state.
QfiResult qfi_generator_variance(const QubitRegister& reg, const ResonatorState& resonator,
                                 const CouplingParams& cp,
                                 GeneratorConvention conv = GeneratorConvention::collective);

/// Same, for a state already held as a JointState. Throws
/// UnsupportedStateError unless the state is a register (x) resonator product.
QfiResult qfi_generator_variance(const JointState& state, const CouplingParams& cp,
                                 GeneratorConvention conv = GeneratorConvention::collective);

/// Admissible window for the dimensionless increment |h g1 tau|.
inline constexpr double kMinQfiStep = 1e-8;
inline constexpr double kMaxQfiStep = 1e-2;
inline constexpr double kRichardsonTolerance = 1e-4;

/// 1e-4 / (|g1| tau N).
double default_qfi_step(const CouplingParams& cp, int n);

/// 4 (<d psi|d psi> - |<psi|d psi>|^2) with |psi(eps)> built by exact
/// evolution, central differences at eps0 +- h and Richardson over {h, h/2}.
double qfi_finite_difference(const QubitRegister& reg, const ResonatorState& resonator,
                             const CouplingParams& cp, double eps0, double h,
                             GeneratorConvention conv = GeneratorConvention::collective);

/// Both routes, overlap route filled in.
QfiResult qfi_both_routes(const QubitRegister& reg, const ResonatorState& resonator,
                          const CouplingParams& cp,
                          GeneratorConvention conv = GeneratorConvention::collective,
                          std::optional<double> h = std::nullopt);

/// 1 / sqrt(nu F_Q).
double cramer_rao_bound(double qfi, double nu);

/// 1 / (g1 tau N sqrt(nu <P^2>)) for GHZ (x) a <P> = 0 resonator under the
/// collective convention.
double cramer_rao_ghz_closed_form(const CouplingParams& cp, int n, double nu, double mean_p_sq);

struct ScalingRow {
  int n = 0;
  double sql = 0.0;  ///< proportional to 1/sqrt(N)
  double hl = 0.0;   ///< proportional to 1/N
};

/// Rows N = 1..n_max. normalize: 1 at N = 1; otherwise both columns are
/// multiplied by single_value (e.g. sensitivity_single).
std::vector<ScalingRow> scaling_curves(int n_max, bool normalize, double single_value = 1.0);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace strainsense::metrology
