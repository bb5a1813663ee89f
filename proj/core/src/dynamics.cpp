#include "strainsense/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "strainsense/errors.hpp"

namespace strainsense::dynamics {
namespace {

using phase_space::FockSpace;
using phase_space::Matrix;

constexpr double kRegisterNormTolerance = 1e-10;

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

void require_qubits(int n) {
  if (n < 1) throw StateError("register needs at least one qubit");
}

Eigen::Index check_exact_size(int n) {
  if (n > kMaxExactQubits) {
    throw RepresentationError("exact representation limited to " +
                              std::to_string(kMaxExactQubits) + " qubits, got " +
                              std::to_string(n));
  }
  return Eigen::Index{1} << n;
}

// Pauli matrices in the (|0>, |1>) basis; |0> has sigma_z = +1.
Matrix pauli(char axis) {
  Matrix s = Matrix::Zero(2, 2);
  switch (axis) {
    case 'x': s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 'y': s(0, 1) = Complex(0, -1); s(1, 0) = Complex(0, 1); break;
    case 'z': s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    default: throw StateError(std::string("unknown Pauli axis ") + axis);
  }
  return s;
}

// Applies the same single-qubit gate to every qubit of a 2^N vector.
Vector apply_to_every_qubit(const Vector& v, int n, const Matrix& gate) {
  Vector out = v;
  for (int j = 0; j < n; ++j) {
    const Eigen::Index bit = Eigen::Index{1} << j;
    for (Eigen::Index b = 0; b < out.size(); ++b) {
      if (b & bit) continue;
      const Complex a0 = out[b];
      const Complex a1 = out[b | bit];
      out[b] = gate(0, 0) * a0 + gate(0, 1) * a1;
      out[b | bit] = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
  }
  return out;
}

// Basis indices of |0...0> and |1...1>.
std::pair<Eigen::Index, Eigen::Index> extremal_indices(int n, Representation rep) {
  const Eigen::Index dim = basis_dim(n, rep);
  return {0, dim - 1};
}

}  // namespace

CouplingParams CouplingParams::make(double g0, double omega_q0, double omega_r,
                                    double chi_eps, double tau) {
  CouplingParams cp{g0, omega_q0, omega_r, chi_eps, tau, 0.0};
  if (omega_q0 != 0.0) cp.g1 = gradient(g0, omega_q0, chi_eps);
  cp.validate();
  return cp;
}

void CouplingParams::validate() const {
  if (!(g0 > 0.0)) throw ModelRangeError("coupling: g0 must be positive");
  if (!(omega_q0 > 0.0)) throw ModelRangeError("coupling: omega_q0 must be positive");
  if (!(tau > 0.0)) throw ModelRangeError("coupling: tau must be positive");
  const double expected = gradient(g0, omega_q0, chi_eps);
  const double scale = std::max(std::abs(expected), std::numeric_limits<double>::min());
  if (std::abs(g1 - expected) > kG1Tolerance * scale) {
    throw ModelRangeError("coupling: stored g1 does not match g0 chi_eps / (2 omega_q0)");
  }
}

bool CouplingParams::dispersive_ok() const {
  return std::abs(omega_q0 - omega_r) >= kDispersiveFactor * g0;
}

double coupling_rate(const CouplingParams& cp, double eps) {
  const double shift = cp.g1 * eps;
  if (!(std::abs(shift) < cp.g0)) {
    std::ostringstream msg;
    msg << "coupling_rate: |g1 eps| = " << std::abs(shift) << " >= g0 = " << cp.g0;
    throw ModelRangeError(msg.str());
  }
  return cp.g0 + shift;
}

double mean_x_shift_analytic(const CouplingParams& cp, double eps, double jz_mean) {
  return 2.0 * coupling_rate(cp, eps) * cp.tau * jz_mean;
}

double ramsey_phase_analytic(const CouplingParams& cp, double eps, int n) {
  return 2.0 * coupling_rate(cp, eps) * cp.tau * n;
}

Eigen::Index basis_dim(int n_qubits, Representation rep) {
  switch (rep) {
    case Representation::exact: return check_exact_size(n_qubits);
    case Representation::symmetric: return n_qubits + 1;
    case Representation::ghz_two_branch: return 2;
  }
  return 0;
}

double jz_eigenvalue(int n_qubits, Representation rep, Eigen::Index basis) {
  const double half = 0.5 * n_qubits;
  switch (rep) {
    case Representation::exact:
      return half - static_cast<double>(std::popcount(static_cast<unsigned long long>(basis)));
    case Representation::symmetric:
      return half - static_cast<double>(basis);
    case Representation::ghz_two_branch:
      return basis == 0 ? half : -half;
  }
  return 0.0;
}

QubitRegister::QubitRegister(int n_qubits, Representation rep, Vector amplitudes)
    : n_qubits_(n_qubits), rep_(rep), amplitudes_(std::move(amplitudes)) {
  require_qubits(n_qubits);
  if (amplitudes_.size() != basis_dim(n_qubits, rep)) {
    throw StateError("QubitRegister: amplitude count does not match representation");
  }
  if (!(std::abs(amplitudes_.norm() - 1.0) <= kRegisterNormTolerance)) {
    throw StateError("QubitRegister: amplitudes not normalized");
  }
}

double QubitRegister::mean_jz() const {
  double acc = 0.0;
  for (Eigen::Index b = 0; b < dim(); ++b) acc += std::norm(amplitudes_[b]) * jz(b);
  return acc;
}

double QubitRegister::mean_jz_sq() const {
  double acc = 0.0;
  for (Eigen::Index b = 0; b < dim(); ++b) {
    const double m = jz(b);
    acc += std::norm(amplitudes_[b]) * m * m;
  }
  return acc;
}

QubitRegister QubitRegister::to_exact() const {
  const Eigen::Index dim_exact = check_exact_size(n_qubits_);
  Vector out = Vector::Zero(dim_exact);
  switch (rep_) {
    case Representation::exact:
      return *this;
    case Representation::symmetric:
      for (Eigen::Index b = 0; b < dim_exact; ++b) {
        const int k = std::popcount(static_cast<unsigned long long>(b));
        out[b] = amplitudes_[k] / std::sqrt(binomial(n_qubits_, k));
      }
      break;
    case Representation::ghz_two_branch:
      out[0] = amplitudes_[0];
      out[dim_exact - 1] = amplitudes_[1];
      break;
  }
  return QubitRegister(n_qubits_, Representation::exact, std::move(out));
}

QubitRegister ghz_state(int n, Representation rep) {
  require_qubits(n);
  Vector v = Vector::Zero(basis_dim(n, rep));
  v[0] = std::numbers::sqrt2 / 2.0;
  v[v.size() - 1] = std::numbers::sqrt2 / 2.0;
  return QubitRegister(n, rep, std::move(v));
}

QubitRegister all_zero_state(int n, Representation rep) {
  require_qubits(n);
  Vector v = Vector::Zero(basis_dim(n, rep));
  v[0] = 1.0;
  return QubitRegister(n, rep, std::move(v));
}

QubitRegister plus_state(int n, Representation rep) {
  require_qubits(n);
  const double quarter_turn = std::numbers::pi / 2.0;
  switch (rep) {
    case Representation::exact: {
      Vector v = Vector::Zero(basis_dim(n, rep));
      v[0] = 1.0;
      const Matrix pulse = phase_space::expm_hermitian(pauli('y'), quarter_turn / 2.0);
      return QubitRegister(n, rep, apply_to_every_qubit(v, n, pulse));
    }
    case Representation::symmetric: {
      Vector v = Vector::Zero(n + 1);
      v[0] = 1.0;
      return QubitRegister(n, rep, collective_rotation_dicke(n, 'y', quarter_turn) * v);
    }
    case Representation::ghz_two_branch:
      break;
  }
  throw RepresentationError("plus_state: |+>^N is outside the GHZ two-branch span");
}

QubitRegister single_qubit(Complex c0, Complex c1) {
  Vector v(2);
  v << c0, c1;
  return QubitRegister(1, Representation::exact, std::move(v));
}

Eigen::MatrixXcd collective_rotation_dicke(int n, char axis, double angle) {
  require_qubits(n);
  const Eigen::Index dim = n + 1;
  const double j = 0.5 * n;
  Matrix jplus = Matrix::Zero(dim, dim);
  // J_+ |k> = sqrt(k (N - k + 1)) |k - 1>, k = number of |1>s.
  for (Eigen::Index k = 1; k < dim; ++k) {
    const double m = j - static_cast<double>(k);
    jplus(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  Matrix generator;
  switch (axis) {
    case 'x': generator = 0.5 * (jplus + jplus.adjoint()); break;
    case 'y': generator = Complex(0.0, -0.5) * (jplus - jplus.adjoint()); break;
    case 'z':
      generator = Matrix::Zero(dim, dim);
      for (Eigen::Index k = 0; k < dim; ++k) generator(k, k) = j - static_cast<double>(k);
      break;
    default: throw StateError(std::string("unknown rotation axis ") + axis);
  }
  return phase_space::expm_hermitian(generator, angle);
}

JointState::JointState(int n_qubits, Representation rep, std::vector<Branch> branches)
    : n_qubits_(n_qubits), rep_(rep), branches_(std::move(branches)) {
  require_qubits(n_qubits);
  if (static_cast<Eigen::Index>(branches_.size()) != basis_dim(n_qubits, rep)) {
    throw StateError("JointState: branch count must equal register dimension");
  }
  double norm_sq = 0.0;
  for (const Branch& br : branches_) {
    norm_sq += std::norm(br.weight) * br.resonator.amplitudes().squaredNorm();
  }
  if (!(std::abs(std::sqrt(norm_sq) - 1.0) <= kRegisterNormTolerance)) {
    throw StateError("JointState: total norm deviates from 1");
  }
}

JointState JointState::product(const QubitRegister& reg, const ResonatorState& resonator) {
  std::vector<Branch> branches;
  branches.reserve(static_cast<std::size_t>(reg.dim()));
  for (Eigen::Index b = 0; b < reg.dim(); ++b) {
    branches.push_back(Branch{reg.amplitudes()[b], resonator});
  }
  return JointState(reg.n_qubits(), reg.representation(), std::move(branches));
}

std::vector<double> JointState::register_probabilities() const {
  std::vector<double> p;
  p.reserve(branches_.size());
  for (const Branch& br : branches_) {
    p.push_back(std::norm(br.weight) * br.resonator.amplitudes().squaredNorm());
  }
  return p;
}

JointMoments JointState::moments() const {
  JointMoments out;
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    const double w = std::norm(branches_[b].weight);
    if (w == 0.0) continue;
    const double m = jz(b);
    const Vector& v = branches_[b].resonator.amplitudes();
    const Vector xv = phase_space::apply_x(v);
    const Vector pv = phase_space::apply_p(v);
    const double mx = v.dot(xv).real();
    const double mp = v.dot(pv).real();
    const double mp2 = pv.squaredNorm();
    out.mean_x += w * mx;
    out.mean_p += w * mp;
    out.mean_x_sq += w * xv.squaredNorm();
    out.mean_p_sq += w * mp2;
    out.mean_jz += w * m;
    out.mean_jz_sq += w * m * m;
    out.mean_jz_p += w * m * mp;
    out.mean_jz_sq_p_sq += w * m * m * mp2;
  }
  return out;
}

Complex JointState::inner(const JointState& other) const {
  if (other.rep_ != rep_ || other.n_qubits_ != n_qubits_) {
    throw RepresentationError("JointState::inner: layouts differ");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    acc += std::conj(branches_[b].weight) * other.branches_[b].weight *
           branches_[b].resonator.overlap(other.branches_[b].resonator);
  }
  return acc;
}

Eigen::MatrixXcd JointState::reduced_register() const {
  const auto dim = static_cast<Eigen::Index>(branches_.size());
  if (dim > 1024) throw ResourceError("reduced_register: register dimension above 1024");
  Eigen::MatrixXcd rho(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    for (Eigen::Index c = 0; c <= b; ++c) {
      const Branch& bb = branches_[static_cast<std::size_t>(b)];
      const Branch& bc = branches_[static_cast<std::size_t>(c)];
      const Complex value = bb.weight * std::conj(bc.weight) * bc.resonator.overlap(bb.resonator);
      rho(b, c) = value;
      rho(c, b) = std::conj(value);
    }
  }
  return rho;
}

bool JointState::is_product(double tol) const {
  const Vector& ref = branches_.front().resonator.amplitudes();
  for (const Branch& br : branches_) {
    if ((br.resonator.amplitudes() - ref).norm() > tol) return false;
  }
  return true;
}

JointState apply_collective_displacement(const JointState& state, double theta_per_m) {
  std::map<long, Matrix> cache;
  std::vector<Branch> out;
  out.reserve(state.branches().size());
  for (std::size_t b = 0; b < state.branches().size(); ++b) {
    const Branch& br = state.branches()[b];
    const double m = state.jz(b);
    const long key = std::lround(2.0 * m);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, phase_space::conditional_displacement(
                                  theta_per_m * m, br.resonator.space()))
               .first;
    }
    Vector v = it->second * br.resonator.amplitudes();
    if (!(std::abs(v.norm() - 1.0) <= phase_space::kNormTolerance)) {
      std::ostringstream msg;
      msg << "evolve_joint: branch with m = " << m << " leaks past cutoff "
          << br.resonator.space().cutoff();
      throw TruncationError(msg.str());
    }
    out.push_back(Branch{br.weight, ResonatorState(br.resonator.space(), std::move(v))});
  }
  return JointState(state.n_qubits(), state.representation(), std::move(out));
}

JointState evolve_joint(const JointState& state, const CouplingParams& cp, double eps) {
  return apply_collective_displacement(state, 2.0 * coupling_rate(cp, eps) * cp.tau);
}

RamseyResult ramsey_sequence(int n, const CouplingParams& cp, double eps,
                             const ResonatorState& resonator_init, Representation rep) {
  if (rep == Representation::ghz_two_branch) {
    throw RepresentationError("ramsey_sequence: needs the exact or symmetric representation");
  }
  if (!resonator_init.truncation_safe()) {
    throw TruncationError("ramsey_sequence: initial resonator state is not truncation-safe");
  }
  const JointState initial = JointState::product(plus_state(n, rep), resonator_init);
  const JointState evolved = evolve_joint(initial, cp, eps);
  const auto& br = evolved.branches();
  const double quarter_turn = std::numbers::pi / 2.0;

  RamseyResult out;
  out.phase = ramsey_phase_analytic(cp, eps, n);
  out.jz_final_analytic = n * coupling_rate(cp, eps) * cp.tau;

  const auto [top, bottom] = extremal_indices(n, rep);
  const Branch& b_top = br[static_cast<std::size_t>(top)];
  const Branch& b_bottom = br[static_cast<std::size_t>(bottom)];
  out.visibility = std::abs(b_top.resonator.overlap(b_bottom.resonator));
  out.measured_phase = std::arg(b_bottom.weight * std::conj(b_top.weight) *
                                b_top.resonator.overlap(b_bottom.resonator));

  if (rep == Representation::symmetric) {
    const Matrix rho = evolved.reduced_register();
    const Matrix r = collective_rotation_dicke(n, 'x', quarter_turn);
    const Matrix rotated = r * rho * r.adjoint();
    double jz = 0.0;
    for (Eigen::Index k = 0; k < rotated.rows(); ++k) {
      jz += rotated(k, k).real() * (0.5 * n - static_cast<double>(k));
    }
    out.jz_final_exact = jz;
  } else {
    // <J_z>_final = 1/2 sum_j Tr(rho R^dag sigma_z^(j) R); the rotated
    // operator only couples basis states that differ in bit j.
    const Matrix pulse = phase_space::expm_hermitian(pauli('x'), quarter_turn / 2.0);
    const Matrix a = pulse.adjoint() * pauli('z') * pulse;
    double jz = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      for (std::size_t b = 0; b < br.size(); ++b) {
        const int sb = (b & bit) ? 1 : 0;
        for (int sc = 0; sc < 2; ++sc) {
          const std::size_t c = sc ? (b | bit) : (b & ~bit);
          const Complex a_cb = a(sc, sb);
          if (a_cb == Complex(0.0, 0.0)) continue;
          const Complex rho_bc =
              br[b].weight * std::conj(br[c].weight) * br[c].resonator.overlap(br[b].resonator);
          jz += 0.5 * (rho_bc * a_cb).real();
        }
      }
    }
    out.jz_final_exact = jz;
  }
  out.deviation = std::abs(out.jz_final_exact - out.jz_final_analytic);
  return out;
}

}  // namespace strainsense::dynamics
