#pragma once

// Strain-dependent transmon spectrum: exact charge-basis diagonalization and
// the closed-form E_J >> E_C approximation.
//
// All energies are angular frequencies (rad/s); strain is dimensionless.

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace strainsense::transmon {

inline constexpr int kDefaultChargeCutoff = 30;
inline constexpr int kMinChargeCutoff = 10;
inline constexpr double kTransmonRegimeRatio = 20.0;

struct TransmonParams {
  double e_c = 0.0;   ///< charging energy E_C / hbar
  double e_j0 = 0.0;  ///< unstrained Josephson energy E_J^0 / hbar
  double beta = 0.0;  ///< dimensionless strain coefficient
  double n_g = 0.0;   ///< offset charge
  int charge_cutoff = kDefaultChargeCutoff;

  /// Throws ModelRangeError when e_c, e_j0 or charge_cutoff are invalid.
  void validate() const;

  double ej_over_ec() const { return e_j0 / e_c; }
  bool in_transmon_regime() const { return ej_over_ec() >= kTransmonRegimeRatio; }

  friend bool operator==(const TransmonParams&, const TransmonParams&) = default;
};

struct SpectrumResult {
  double omega01 = 0.0;
  double omega12 = 0.0;
  std::vector<double> eigenvalues;  ///< lowest k levels, ascending
  /// Adjacent level pairs (i, i+1) whose gap is below 1e-12 relative.
  std::vector<std::pair<std::size_t, std::size_t>> degeneracies;
  int charge_cutoff = 0;
  double cutoff_convergence = 0.0;  ///< |omega01(n_c+5) - omega01(n_c)| / omega01(n_c)
};

/// E_J(eps) = E_J^0 (1 + beta eps). Rejects |beta eps| >= 1.
double josephson_energy(const TransmonParams& params, double eps);

/// Charge-basis Hamiltonian 4E_C(n - n_g)^2 - (E_J/2)(|n><n+1| + h.c.),
/// dimension 2 n_c + 1, in rad/s.
Eigen::MatrixXd charge_hamiltonian(const TransmonParams& params, double eps);

/// Diagonalizes the charge-basis Hamiltonian and returns the lowest k levels.
/// Requires 3 <= k <= 2 n_c - 3. Throws CutoffError if omega01 moves by more
/// than 1e-9 relative when the cutoff grows by 5.
SpectrumResult charge_spectrum_exact(const TransmonParams& params, double eps,
                                     std::size_t k = 3);

struct FrequencyApprox {
  double nonlinear = 0.0;    ///< sqrt(8 E_C E_J(eps)) - E_C
  double linearized = 0.0;   ///< omega_q0 + chi_taylor * eps
  double omega_q0 = 0.0;     ///< sqrt(8 E_C E_J^0) - E_C
  double chi_taylor = 0.0;   ///< exact first-order coefficient sqrt(8 E_C E_J^0) beta / 2
};

/// Closed-form qubit frequency. Throws RegimeError when E_J/E_C < 20.
FrequencyApprox frequency_approx(const TransmonParams& params, double eps);

enum class SusceptibilityMode { analytic, numeric };

inline constexpr double kMinSusceptibilityStep = 1e-9;
inline constexpr double kMaxSusceptibilityStep = 1e-3;
inline constexpr double kDefaultSusceptibilityStep = 1e-6;

/// d omega_q / d eps. Analytic: (omega_q0 / 2) beta. Numeric: central
/// difference of the exact omega01 with step h in [1e-9, 1e-3].
double strain_susceptibility(const TransmonParams& params, SusceptibilityMode mode,
                             double h = kDefaultSusceptibilityStep);

}  // namespace strainsense::transmon
