#include "strainsense/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strainsense/errors.hpp"

namespace strainsense::phase_space {
namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// Laguerre polynomials L_j^{(k)}(x) for j = 0 .. count-1 by the forward
// three-term recurrence.
void laguerre_column(int k, double x, int count, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(count));
  if (count == 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  out[1] = 1.0 + k - x;
  for (int j = 1; j + 1 < count; ++j) {
    out[static_cast<std::size_t>(j + 1)] =
        ((2.0 * j + 1.0 + k - x) * out[static_cast<std::size_t>(j)] -
         (j + k) * out[static_cast<std::size_t>(j - 1)]) /
        (j + 1.0);
  }
}

Matrix displacement_closed_form(Complex alpha, int cutoff) {
  Matrix d = Matrix::Zero(cutoff, cutoff);
  const double mag = std::abs(alpha);
  if (mag == 0.0) {
    d.setIdentity();
    return d;
  }
  const double x = mag * mag;
  const double log_mag = std::log(mag);
  const Complex unit = alpha / mag;
  const Complex unit_upper = -std::conj(alpha) / mag;
  std::vector<double> lag;
  Complex phase_lower{1.0, 0.0};
  Complex phase_upper{1.0, 0.0};
  for (int k = 0; k < cutoff; ++k) {
    const int count = cutoff - k;
    laguerre_column(k, x, count, lag);
    for (int j = 0; j < count; ++j) {
      const double pref = std::exp(0.5 * (std::lgamma(j + 1.0) - std::lgamma(j + k + 1.0)) +
                                   k * log_mag - 0.5 * x);
      const double value = pref * lag[static_cast<std::size_t>(j)];
      d(j + k, j) = phase_lower * value;
      if (k > 0) d(j, j + k) = phase_upper * value;
    }
    phase_lower *= unit;
    phase_upper *= unit_upper;
  }
  return d;
}

void check_theta(double theta, const FockSpace& space) {
  const double limit = max_displacement(space);
  if (!(std::abs(theta) <= limit)) {
    std::ostringstream msg;
    msg << "conditional_displacement: |theta| = " << std::abs(theta)
        << " exceeds " << limit << " allowed by cutoff " << space.cutoff();
    throw TruncationError(msg.str());
  }
}

}  // namespace

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < kMinFockCutoff) {
    throw StateError("FockSpace: cutoff must be >= " + std::to_string(kMinFockCutoff));
  }
}

FockSpace FockSpace::adaptive(double alpha_max) {
  const double a = std::abs(alpha_max);
  return FockSpace(std::max(kMinFockCutoff, static_cast<int>(std::ceil(a * a + 8.0 * a + 15.0))));
}

double max_coherent_amplitude(const FockSpace& space) {
  const double disc = 6.0 + space.cutoff();
  return std::max(0.0, -4.0 + std::sqrt(disc));
}

double max_displacement(const FockSpace& space) {
  return std::sqrt(2.0) * max_coherent_amplitude(space);
}

Quadratures quadrature_operators(const FockSpace& space) {
  const Eigen::Index n = space.dim();
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) a(i - 1, i) = std::sqrt(static_cast<double>(i));
  const Matrix ad = a.adjoint();
  Quadratures q;
  q.x = (a + ad) * kSqrtHalf;
  q.p = (ad - a) * Complex(0.0, kSqrtHalf);
  q.a = std::move(a);
  return q;
}

ResonatorState::ResonatorState(FockSpace space, Vector amplitudes)
    : space_(space), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dim()) {
    throw StateError("ResonatorState: amplitude length does not match cutoff");
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "ResonatorState: norm " << norm << " deviates from 1 by more than "
        << kNormTolerance;
    throw StateError(msg.str());
  }
}

ResonatorState ResonatorState::vacuum(FockSpace space) {
  Vector v = Vector::Zero(space.dim());
  v[0] = 1.0;
  return ResonatorState(space, std::move(v));
}

double ResonatorState::tail_mass() const {
  const Eigen::Index n = amplitudes_.size();
  return std::norm(amplitudes_[n - 1]) + std::norm(amplitudes_[n - 2]);
}

Complex ResonatorState::overlap(const ResonatorState& other) const {
  return amplitudes_.dot(other.amplitudes_);
}

ResonatorState coherent_state(Complex alpha, const FockSpace& space) {
  const double mag = std::abs(alpha);
  if (mag * mag + 8.0 * mag + 10.0 > space.cutoff()) {
    std::ostringstream msg;
    msg << "coherent_state: |alpha| = " << mag << " needs cutoff >= "
        << std::ceil(mag * mag + 8.0 * mag + 10.0) << ", have " << space.cutoff();
    throw TruncationError(msg.str());
  }
  Vector v(space.dim());
  v[0] = std::exp(-0.5 * mag * mag);
  for (Eigen::Index n = 1; n < space.dim(); ++n) {
    v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  }
  v /= v.norm();
  return ResonatorState(space, std::move(v));
}

ResonatorState coherent_state_from_quadratures(double x0, double p0, const FockSpace& space) {
  return coherent_state(Complex(x0, p0) * kSqrtHalf, space);
}

Matrix expm_hermitian(const Matrix& h, double t) {
  const Matrix a = h * Complex(0.0, -t);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);

  const Eigen::Index n = h.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 64; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Matrix conditional_displacement(double theta, const FockSpace& space,
                                DisplacementMethod method) {
  check_theta(theta, space);
  if (method == DisplacementMethod::series) {
    return expm_hermitian(quadrature_operators(space).p, theta);
  }
  return displacement_closed_form(Complex(theta * kSqrtHalf, 0.0), space.cutoff());
}

Eigen::Index safe_subspace_dim(double theta, const FockSpace& space) {
  const Matrix d = displacement_closed_form(Complex(theta * kSqrtHalf, 0.0), space.cutoff());
  const Eigen::Index c = space.dim();
  Eigen::Index count = 0;
  while (count < c) {
    const double tail = std::norm(d(c - 1, count)) + std::norm(d(c - 2, count));
    if (!(tail < kOperatorTailTolerance)) break;
    ++count;
  }
  return count;
}

ResonatorState displace(const ResonatorState& state, double theta) {
  const FockSpace& space = state.space();
  Vector out = conditional_displacement(theta, space) * state.amplitudes();
  const double norm = out.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "displace: displaced state leaks past cutoff " << space.cutoff()
        << " (norm " << norm << ")";
    throw TruncationError(msg.str());
  }
  return ResonatorState(space, std::move(out));
}

Vector apply_x(const Vector& v) {
  const Eigen::Index n = v.size();
  Vector out = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex acc{0.0, 0.0};
    if (i > 0) acc += std::sqrt(static_cast<double>(i)) * v[i - 1];
    if (i + 1 < n) acc += std::sqrt(static_cast<double>(i + 1)) * v[i + 1];
    out[i] = acc * kSqrtHalf;
  }
  return out;
}

Vector apply_p(const Vector& v) {
  const Eigen::Index n = v.size();
  Vector out = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex acc{0.0, 0.0};
    if (i > 0) acc += std::sqrt(static_cast<double>(i)) * v[i - 1];
    if (i + 1 < n) acc -= std::sqrt(static_cast<double>(i + 1)) * v[i + 1];
    out[i] = acc * Complex(0.0, kSqrtHalf);
  }
  return out;
}

Moments moments(const ResonatorState& state) {
  const Vector& v = state.amplitudes();
  const double norm = v.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw StateError("moments: state is not normalized");
  }
  const Vector xv = apply_x(v);
  const Vector pv = apply_p(v);
  Moments m;
  m.mean_x = v.dot(xv).real();
  m.mean_p = v.dot(pv).real();
  m.mean_x_sq = xv.squaredNorm();
  m.mean_p_sq = pv.squaredNorm();
  m.var_x = m.mean_x_sq - m.mean_x * m.mean_x;
  m.var_p = m.mean_p_sq - m.mean_p * m.mean_p;
  for (Eigen::Index n = 0; n < v.size(); ++n) m.mean_n += static_cast<double>(n) * std::norm(v[n]);
  m.truncation_safe = state.truncation_safe();
  return m;
}

}  // namespace strainsense::phase_space
