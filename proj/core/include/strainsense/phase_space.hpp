#pragma once

// Truncated Fock-space model of a single resonator mode.
//
// Quadratures follow the dimensionless convention X = (a + a^dag)/sqrt 2,
// P = i(a^dag - a)/sqrt 2, so [X, P] = i and the vacuum has Var X = 1/2.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace strainsense::phase_space {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMinFockCutoff = 4;
inline constexpr double kNormTolerance = 1e-10;
/// Mass in the top two Fock levels above which a state is not truncation-safe.
inline constexpr double kTailTolerance = 1e-8;
/// Column tail mass defining the safe subspace of a displacement operator.
inline constexpr double kOperatorTailTolerance = 1e-16;

class FockSpace {
 public:
  explicit FockSpace(int cutoff);

  int cutoff() const { return cutoff_; }
  Eigen::Index dim() const { return cutoff_; }

  /// Smallest cutoff satisfying the sufficiency rule for displacements up to
  /// |alpha_max|: ceil(alpha^2 + 8 alpha + 15).
  static FockSpace adaptive(double alpha_max);

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int cutoff_;
};

/// Largest |alpha| a coherent state may have in this space:
/// |alpha|^2 + 8|alpha| + 10 <= cutoff.
double max_coherent_amplitude(const FockSpace& space);

/// Largest |theta| accepted by conditional_displacement (alpha = theta / sqrt 2).
double max_displacement(const FockSpace& space);

struct Quadratures {
  Matrix x;
  Matrix p;
  Matrix a;
};

Quadratures quadrature_operators(const FockSpace& space);

class ResonatorState {
 public:
  /// Takes ownership of the amplitudes; throws StateError if the length does
  /// not match the space or the norm is off by more than 1e-10.
  ResonatorState(FockSpace space, Vector amplitudes);

  static ResonatorState vacuum(FockSpace space);

  const FockSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  /// |c_{cutoff-1}|^2 + |c_{cutoff-2}|^2
  double tail_mass() const;
  bool truncation_safe() const { return tail_mass() < kTailTolerance; }

  Complex overlap(const ResonatorState& other) const;

 private:
  FockSpace space_;
  Vector amplitudes_;
};

/// Coherent state |alpha>, renormalized after truncation. Throws
/// TruncationError when |alpha|^2 + 8|alpha| + 10 > cutoff.
ResonatorState coherent_state(Complex alpha, const FockSpace& space);

/// Coherent state with quadrature means (<X>, <P>) = (x0, p0).
ResonatorState coherent_state_from_quadratures(double x0, double p0, const FockSpace& space);

enum class DisplacementMethod {
  series,       ///< scaled Taylor exponential of -i theta P (oracle)
  closed_form,  ///< Laguerre matrix elements of D(theta / sqrt 2) (fast path)
};

/// exp(-i theta P) on the truncated space. For real theta this equals the
/// displacement D(theta / sqrt 2) and shifts <X> by theta.
Matrix conditional_displacement(double theta, const FockSpace& space,
                                DisplacementMethod method = DisplacementMethod::closed_form);

/// Number of leading Fock states whose image under D(theta / sqrt 2) keeps
/// its top-two-level mass below kOperatorTailTolerance. Both displacement
/// methods agree, and are unitary, on this subspace.
Eigen::Index safe_subspace_dim(double theta, const FockSpace& space);

/// Applies exp(-i theta P) to a state using the closed-form matrix.
ResonatorState displace(const ResonatorState& state, double theta);

/// Scaling-and-squaring Taylor exponential exp(-i t H) of a Hermitian H.
Matrix expm_hermitian(const Matrix& h, double t);

struct Moments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double mean_p_sq = 0.0;
  double mean_x_sq = 0.0;
  double mean_n = 0.0;
  bool truncation_safe = true;
};

/// Expectations against the truncated operators. Throws StateError if the
/// state is not normalized.
Moments moments(const ResonatorState& state);

/// Matrix-free actions of the truncated quadratures on an amplitude vector.
Vector apply_x(const Vector& v);
Vector apply_p(const Vector& v);

}  // namespace strainsense::phase_space
