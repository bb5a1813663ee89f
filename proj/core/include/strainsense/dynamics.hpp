#pragma once

// Qubit-register / resonator joint evolution under the strain-dependent
// conditional displacement exp(-i 2 g(eps) tau J_z (x) P).
//
// The joint state is stored branch-resolved: one resonator state per register
// basis state. This is exact because the coupling is diagonal in the J_z basis.

#include <complex>
#include <vector>

#include "strainsense/phase_space.hpp"

namespace strainsense::dynamics {

using phase_space::Complex;
using phase_space::ResonatorState;
using phase_space::Vector;

inline constexpr double kG1Tolerance = 1e-12;
inline constexpr double kDispersiveFactor = 10.0;

/// Rates in rad/s, chi_eps in rad/s per unit strain, tau in seconds.
struct CouplingParams {
  double g0 = 0.0;
  double omega_q0 = 0.0;
  double omega_r = 0.0;
  double chi_eps = 0.0;
  double tau = 0.0;
  double g1 = 0.0;  ///< g0 chi_eps / (2 omega_q0), filled by make()

  static CouplingParams make(double g0, double omega_q0, double omega_r, double chi_eps,
                             double tau);

  static double gradient(double g0, double omega_q0, double chi_eps) {
    return g0 * chi_eps / (2.0 * omega_q0);
  }

  /// Throws ModelRangeError for non-positive g0/omega_q0/tau or a stale g1.
  void validate() const;

  /// |omega_q0 - omega_r| >= 10 g0. Advisory only.
  bool dispersive_ok() const;

  friend bool operator==(const CouplingParams&, const CouplingParams&) = default;
};

/// g(eps) = g0 + g1 eps. Throws ModelRangeError when |g1 eps| >= g0.
double coupling_rate(const CouplingParams& cp, double eps);

/// Net quadrature shift 2 g(eps) tau <J_z>. For one qubit J_z = sigma_z / 2.
double mean_x_shift_analytic(const CouplingParams& cp, double eps, double jz_mean);

/// phi(eps) = 2 g(eps) tau N.
double ramsey_phase_analytic(const CouplingParams& cp, double eps, int n);

enum class Representation {
  exact,           ///< 2^N computational amplitudes, bit j set = qubit j in |1>
  symmetric,       ///< N+1 Dicke amplitudes indexed by the number of |1>s
  ghz_two_branch,  ///< amplitudes of |0...0> and |1...1>
};

inline constexpr int kMaxExactQubits = 12;

Eigen::Index basis_dim(int n_qubits, Representation rep);

/// J_z eigenvalue m of a register basis state.
double jz_eigenvalue(int n_qubits, Representation rep, Eigen::Index basis);

class QubitRegister {
 public:
  /// Throws StateError on a bad length or norm, RepresentationError when the
  /// exact representation is requested for more than 12 qubits.
  QubitRegister(int n_qubits, Representation rep, Vector amplitudes);

  int n_qubits() const { return n_qubits_; }
  Representation representation() const { return rep_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

  double jz(Eigen::Index basis) const { return jz_eigenvalue(n_qubits_, rep_, basis); }
  double mean_jz() const;
  double mean_jz_sq() const;

  /// Expands into the 2^N computational basis (N <= 12).
  QubitRegister to_exact() const;

 private:
  int n_qubits_;
  Representation rep_;
  Vector amplitudes_;
};

/// (|0>^N + |1>^N)/sqrt 2 in the requested representation.
QubitRegister ghz_state(int n, Representation rep = Representation::ghz_two_branch);

/// |0>^N.
QubitRegister all_zero_state(int n, Representation rep);

/// |+>^N, produced by the collective pi/2 pulse exp(-i (pi/4) sigma_y) on |0>^N.
/// Not expressible in the GHZ two-branch representation.
QubitRegister plus_state(int n, Representation rep);

/// c0|0> + c1|1> for one qubit (normalized by the caller).
QubitRegister single_qubit(Complex c0, Complex c1);

struct Branch {
  Complex weight;
  ResonatorState resonator;
};

struct JointMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double mean_x_sq = 0.0;
  double mean_p_sq = 0.0;
  double mean_jz = 0.0;
  double mean_jz_sq = 0.0;
  double mean_jz_p = 0.0;        ///< <J_z (x) P>
  double mean_jz_sq_p_sq = 0.0;  ///< <J_z^2 (x) P^2>
};

class JointState {
 public:
  /// Throws StateError unless there is one branch per register basis state
  /// and the total norm is 1 within 1e-10.
  JointState(int n_qubits, Representation rep, std::vector<Branch> branches);

  static JointState product(const QubitRegister& reg, const ResonatorState& resonator);

  int n_qubits() const { return n_qubits_; }
  Representation representation() const { return rep_; }
  const std::vector<Branch>& branches() const { return branches_; }
  double jz(std::size_t basis) const {
    return jz_eigenvalue(n_qubits_, rep_, static_cast<Eigen::Index>(basis));
  }

  std::vector<double> register_probabilities() const;
  JointMoments moments() const;

  /// <psi|phi> over the full joint space (same layout required).
  Complex inner(const JointState& other) const;

  /// Reduced register density matrix rho_bc = w_b w_c^* <psi_c|psi_b>.
  /// Throws ResourceError above 1024 basis states.
  Eigen::MatrixXcd reduced_register() const;

  /// True when every branch carries the same resonator state (to tol), i.e.
  /// the state is a register (x) resonator product.
  bool is_product(double tol = 1e-10) const;

 private:
  int n_qubits_;
  Representation rep_;
  std::vector<Branch> branches_;
};

/// Displaces every branch by exp(-i theta_per_m m P), m its J_z eigenvalue.
JointState apply_collective_displacement(const JointState& state, double theta_per_m);

/// Applies exp(-i 2 g(eps) tau J_z (x) P). Register populations are unchanged.
JointState evolve_joint(const JointState& state, const CouplingParams& cp, double eps);

struct RamseyResult {
  double phase = 0.0;              ///< analytic phi(eps) = 2 g tau N
  double jz_final_exact = 0.0;
  double jz_final_analytic = 0.0;  ///< N g(eps) tau
  double visibility = 0.0;         ///< |<branch_{+N/2}|branch_{-N/2}>|
  double deviation = 0.0;          ///< |exact - analytic|
  double measured_phase = 0.0;     ///< arg rho_{1..1,0..0} before readout
};

/// |+>^N (x) resonator_init -> evolve_joint -> readout pi/2 pulse
/// exp(-i (pi/4) sigma_x) on every qubit -> <J_z> by partial trace.
/// Supports the exact (N <= 12) and symmetric representations.
RamseyResult ramsey_sequence(int n, const CouplingParams& cp, double eps,
                             const ResonatorState& resonator_init,
                             Representation rep = Representation::symmetric);

/// Collective rotation exp(-i angle J_axis) in the Dicke basis (N+1 dim).
Eigen::MatrixXcd collective_rotation_dicke(int n, char axis, double angle);

}  // namespace strainsense::dynamics
