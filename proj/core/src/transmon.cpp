#include "strainsense/transmon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strainsense/errors.hpp"

namespace strainsense::transmon {
namespace {

constexpr double kCutoffTolerance = 1e-9;
constexpr double kDegeneracyTolerance = 1e-12;
constexpr int kCutoffProbeStep = 5;

// Charge Hamiltonian in units of E_C. The dense solver is used on purpose:
// Eigen 3.4's computeFromTridiagonal reports NoConvergence for a few percent
// of E_J/E_C values on this matrix (near-degenerate +-n pairs).
Eigen::MatrixXd build_scaled(const TransmonParams& params, double e_j, int cutoff) {
  const int dim = 2 * cutoff + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double hop = -0.5 * e_j / params.e_c;
  for (int i = 0; i < dim; ++i) {
    const double n = static_cast<double>(i - cutoff) - params.n_g;
    h(i, i) = 4.0 * n * n;
    if (i + 1 < dim) {
      h(i, i + 1) = hop;
      h(i + 1, i) = hop;
    }
  }
  return h;
}

Eigen::VectorXd scaled_levels(const TransmonParams& params, double e_j, int cutoff) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      build_scaled(params, e_j, cutoff), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw CutoffError("charge-basis eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

}  // namespace

void TransmonParams::validate() const {
  if (!(e_c > 0.0)) throw ModelRangeError("transmon: e_c must be positive");
  if (!(e_j0 > 0.0)) throw ModelRangeError("transmon: e_j0 must be positive");
  if (charge_cutoff < kMinChargeCutoff) {
    throw ModelRangeError("transmon: charge_cutoff must be >= " +
                          std::to_string(kMinChargeCutoff));
  }
}

double josephson_energy(const TransmonParams& params, double eps) {
  const double shift = params.beta * eps;
  if (!(std::abs(shift) < 1.0)) {
    std::ostringstream msg;
    msg << "josephson_energy: |beta*eps| = " << std::abs(shift)
        << " >= 1 leaves the linearized model range";
    throw ModelRangeError(msg.str());
  }
  return params.e_j0 * (1.0 + shift);
}

Eigen::MatrixXd charge_hamiltonian(const TransmonParams& params, double eps) {
  params.validate();
  const double e_j = josephson_energy(params, eps);
  const int cutoff = params.charge_cutoff;
  const int dim = 2 * cutoff + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double n = static_cast<double>(i - cutoff) - params.n_g;
    h(i, i) = 4.0 * params.e_c * n * n;
    if (i + 1 < dim) {
      h(i, i + 1) = -0.5 * e_j;
      h(i + 1, i) = -0.5 * e_j;
    }
  }
  return h;
}

SpectrumResult charge_spectrum_exact(const TransmonParams& params, double eps,
                                     std::size_t k) {
  params.validate();
  const auto max_levels = static_cast<std::size_t>(2 * params.charge_cutoff - 3);
  if (k < 3 || k > max_levels) {
    throw CutoffError("charge_spectrum_exact: level count k must lie in [3, " +
                      std::to_string(max_levels) + "]");
  }
  const double e_j = josephson_energy(params, eps);

  const Eigen::VectorXd levels = scaled_levels(params, e_j, params.charge_cutoff);
  const Eigen::VectorXd probe =
      scaled_levels(params, e_j, params.charge_cutoff + kCutoffProbeStep);

  const double w01 = levels[1] - levels[0];
  const double w01_probe = probe[1] - probe[0];
  const double scale = std::max(std::abs(levels[0]), std::abs(levels[static_cast<Eigen::Index>(k - 1)]));
  // A degenerate doublet has omega01 = 0; measure drift against the
  // degeneracy floor instead.
  const double w01_floor = kDegeneracyTolerance * std::max(scale, 1.0);
  const double drift = std::abs(w01_probe - w01) / std::max(std::abs(w01), w01_floor);
  if (!(drift <= kCutoffTolerance)) {
    std::ostringstream msg;
    msg << "charge_spectrum_exact: omega01 not converged at cutoff "
        << params.charge_cutoff << " (relative drift " << drift << ")";
    throw CutoffError(msg.str());
  }

  SpectrumResult out;
  out.charge_cutoff = params.charge_cutoff;
  out.cutoff_convergence = drift;
  out.eigenvalues.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.eigenvalues[i] = levels[static_cast<Eigen::Index>(i)] * params.e_c;
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double gap = levels[static_cast<Eigen::Index>(i + 1)] - levels[static_cast<Eigen::Index>(i)];
    if (gap <= w01_floor) {
      out.degeneracies.emplace_back(i, i + 1);
    }
  }
  out.omega01 = out.eigenvalues[1] - out.eigenvalues[0];
  out.omega12 = out.eigenvalues[2] - out.eigenvalues[1];
  return out;
}

FrequencyApprox frequency_approx(const TransmonParams& params, double eps) {
  params.validate();
  if (!params.in_transmon_regime()) {
    std::ostringstream msg;
    msg << "frequency_approx: E_J/E_C = " << params.ej_over_ec()
        << " is below the transmon regime threshold " << kTransmonRegimeRatio;
    throw RegimeError(msg.str());
  }
  const double e_j = josephson_energy(params, eps);
  const double plasma0 = std::sqrt(8.0 * params.e_c * params.e_j0);
  FrequencyApprox out;
  out.nonlinear = std::sqrt(8.0 * params.e_c * e_j) - params.e_c;
  out.omega_q0 = plasma0 - params.e_c;
  out.chi_taylor = 0.5 * plasma0 * params.beta;
  out.linearized = out.omega_q0 + out.chi_taylor * eps;
  return out;
}

double strain_susceptibility(const TransmonParams& params, SusceptibilityMode mode,
                             double h) {
  if (mode == SusceptibilityMode::analytic) {
    return 0.5 * frequency_approx(params, 0.0).omega_q0 * params.beta;
  }
  if (!(h >= kMinSusceptibilityStep && h <= kMaxSusceptibilityStep)) {
    std::ostringstream msg;
    msg << "strain_susceptibility: step h = " << h << " outside ["
        << kMinSusceptibilityStep << ", " << kMaxSusceptibilityStep << "]";
    throw StepError(msg.str());
  }
  const double up = charge_spectrum_exact(params, h).omega01;
  const double down = charge_spectrum_exact(params, -h).omega01;
  return (up - down) / (2.0 * h);
}

}  // namespace strainsense::transmon
