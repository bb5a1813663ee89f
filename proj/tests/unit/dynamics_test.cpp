#include "strainsense/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "strainsense/errors.hpp"
#include "strainsense/units.hpp"

using namespace strainsense;
using namespace strainsense::dynamics;
using phase_space::FockSpace;

namespace {

CouplingParams example_coupling() {
  return CouplingParams::make(units::mhz(50.0), units::ghz(5.0), units::ghz(7.0), units::mhz(50.0),
                              units::nanoseconds(100.0));
}

// g0 tau = gt, g1 tau = 0.1 gt.
CouplingParams scaled_coupling(double gt) {
  const double tau = 1e-7;
  const double omega_q0 = units::ghz(5.0);
  const double g0 = gt / tau;
  const double chi = 0.2 * omega_q0;  // g1 = 0.1 g0
  return CouplingParams::make(g0, omega_q0, units::ghz(7.0), chi, tau);
}

bool moments_close(const JointMoments& a, const JointMoments& b, double tol) {
  return std::abs(a.mean_x - b.mean_x) < tol && std::abs(a.mean_p - b.mean_p) < tol &&
         std::abs(a.mean_x_sq - b.mean_x_sq) < tol && std::abs(a.mean_p_sq - b.mean_p_sq) < tol &&
         std::abs(a.mean_jz - b.mean_jz) < tol && std::abs(a.mean_jz_sq - b.mean_jz_sq) < tol &&
         std::abs(a.mean_jz_p - b.mean_jz_p) < tol &&
         std::abs(a.mean_jz_sq_p_sq - b.mean_jz_sq_p_sq) < tol;
}

}  // namespace

TEST(Coupling, GradientOfWorkedExample) {
  const CouplingParams cp = example_coupling();
  EXPECT_NEAR(units::to_hz(cp.g1), 0.25e6, 1e-6);
  EXPECT_NEAR(cp.g1 * cp.tau, 0.15707963267948966, 1e-15);
  EXPECT_TRUE(cp.dispersive_ok());
  EXPECT_NO_THROW(cp.validate());
}

TEST(Coupling, Guards) {
  CouplingParams cp = example_coupling();
  EXPECT_THROW(coupling_rate(cp, cp.g0 / cp.g1), ModelRangeError);
  cp.g1 *= 1.01;
  EXPECT_THROW(cp.validate(), ModelRangeError);
  EXPECT_THROW(CouplingParams::make(0.0, 1.0, 1.0, 1.0, 1.0), ModelRangeError);
  const CouplingParams near = CouplingParams::make(units::mhz(50), units::ghz(5.0),
                                                   units::ghz(5.2), units::mhz(50), 1e-7);
  EXPECT_FALSE(near.dispersive_ok());
}

TEST(Coupling, AnalyticShifts) {
  const CouplingParams cp = scaled_coupling(0.2);
  EXPECT_NEAR(mean_x_shift_analytic(cp, 0.0, 0.5), 0.2, 1e-15);
  EXPECT_NEAR(ramsey_phase_analytic(cp, 0.0, 4), 1.6, 1e-15);
  EXPECT_NEAR(coupling_rate(cp, 1e-3) * cp.tau, 0.2 * (1.0 + 1e-4), 1e-15);
}

TEST(Register, BasisConventions) {
  EXPECT_EQ(basis_dim(3, Representation::exact), 8);
  EXPECT_EQ(basis_dim(3, Representation::symmetric), 4);
  EXPECT_EQ(basis_dim(3, Representation::ghz_two_branch), 2);
  EXPECT_DOUBLE_EQ(jz_eigenvalue(3, Representation::exact, 0b000), 1.5);
  EXPECT_DOUBLE_EQ(jz_eigenvalue(3, Representation::exact, 0b101), -0.5);
  EXPECT_DOUBLE_EQ(jz_eigenvalue(3, Representation::symmetric, 3), -1.5);
  EXPECT_DOUBLE_EQ(jz_eigenvalue(3, Representation::ghz_two_branch, 1), -1.5);
  EXPECT_THROW(all_zero_state(13, Representation::exact), RepresentationError);
  EXPECT_THROW(plus_state(3, Representation::ghz_two_branch), RepresentationError);
}

TEST(Register, GhzMoments) {
  for (auto rep : {Representation::exact, Representation::symmetric, Representation::ghz_two_branch}) {
    const QubitRegister g = ghz_state(4, rep);
    EXPECT_NEAR(g.mean_jz(), 0.0, 1e-15);
    EXPECT_NEAR(g.mean_jz_sq(), 4.0, 1e-15);
  }
}

TEST(Register, PlusStateMoments) {
  for (auto rep : {Representation::exact, Representation::symmetric}) {
    const QubitRegister p = plus_state(5, rep);
    EXPECT_NEAR(p.mean_jz(), 0.0, 1e-12);
    EXPECT_NEAR(p.mean_jz_sq(), 5.0 / 4.0, 1e-12);
  }
  const QubitRegister sym = plus_state(3, Representation::symmetric).to_exact();
  const QubitRegister ex = plus_state(3, Representation::exact);
  EXPECT_NEAR(std::abs(sym.amplitudes().dot(ex.amplitudes())), 1.0, 1e-12);
}

TEST(Register, RejectsBadAmplitudes) {
  EXPECT_THROW(QubitRegister(2, Representation::exact, Vector::Zero(4)), StateError);
  EXPECT_THROW(QubitRegister(2, Representation::exact, Vector::Ones(3) / std::sqrt(3.0)), StateError);
}

TEST(JointState, SingleQubitConditionalShift) {
  const CouplingParams cp = scaled_coupling(0.3);
  const FockSpace space(40);
  const JointState zero = JointState::product(single_qubit(1.0, 0.0),
                                              phase_space::ResonatorState::vacuum(space));
  EXPECT_NEAR(evolve_joint(zero, cp, 0.0).moments().mean_x, 0.3, 1e-12);
  const JointState one = JointState::product(single_qubit(0.0, 1.0),
                                             phase_space::ResonatorState::vacuum(space));
  EXPECT_NEAR(evolve_joint(one, cp, 0.0).moments().mean_x, -0.3, 1e-12);
}

TEST(JointState, GhzBranchesAreCoherentStates) {
  const CouplingParams cp = scaled_coupling(0.2);
  const int n = 4;
  const FockSpace space(50);
  const JointState psi = evolve_joint(
      JointState::product(ghz_state(n), phase_space::ResonatorState::vacuum(space)), cp, 0.0);
  const double shift = 0.2 * n;  // g tau N along X
  const auto plus = phase_space::coherent_state_from_quadratures(shift, 0.0, space);
  const auto minus = phase_space::coherent_state_from_quadratures(-shift, 0.0, space);
  EXPECT_GT(std::norm(psi.branches()[0].resonator.overlap(plus)), 1.0 - 1e-12);
  EXPECT_GT(std::norm(psi.branches()[1].resonator.overlap(minus)), 1.0 - 1e-12);
  const double x0 = phase_space::moments(psi.branches()[0].resonator).mean_x;
  const double x1 = phase_space::moments(psi.branches()[1].resonator).mean_x;
  EXPECT_NEAR(x0 - x1, 2.0 * shift, 1e-10);
  EXPECT_FALSE(psi.is_product());
}

TEST(JointState, RepresentationsAgree) {
  const CouplingParams cp = scaled_coupling(0.2);
  const FockSpace space(50);
  const auto vac = phase_space::ResonatorState::vacuum(space);
  const JointMoments m_exact =
      evolve_joint(JointState::product(ghz_state(4, Representation::exact), vac), cp, 0.0).moments();
  const JointMoments m_sym =
      evolve_joint(JointState::product(ghz_state(4, Representation::symmetric), vac), cp, 0.0).moments();
  const JointMoments m_two = evolve_joint(JointState::product(ghz_state(4), vac), cp, 0.0).moments();
  EXPECT_TRUE(moments_close(m_exact, m_two, 1e-12));
  EXPECT_TRUE(moments_close(m_sym, m_two, 1e-12));
}

TEST(JointState, ReducedRegisterOfGhzDecoheres) {
  const CouplingParams cp = scaled_coupling(0.2);
  const FockSpace space(50);
  const JointState psi = evolve_joint(
      JointState::product(ghz_state(2), phase_space::ResonatorState::vacuum(space)), cp, 0.0);
  const Eigen::MatrixXcd rho = psi.reduced_register();
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-12);
  // Coherence is damped by |<-gtN|gtN>| = exp(-(2 g tau N)^2 / 4).
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.5 * std::exp(-0.16), 1e-12);
}

TEST(JointState, RejectsBadLayout) {
  const auto vac = phase_space::ResonatorState::vacuum(FockSpace(10));
  std::vector<Branch> one{{Complex(1.0, 0.0), vac}};
  EXPECT_THROW(JointState(2, Representation::ghz_two_branch, one), StateError);
}

// Frozen from tests/oracles/dynamics_oracle.py (full 2^N x Fock expm).
TEST(Ramsey, MatchesFullSpaceOracle) {
  struct Case {
    double g_tau;
    double p0;
    double jz;
    double phase;
    double vis;
  };
  const Case cases[] = {
      {0.01, 0.0, 0.0, 0.0, 9.996000799893344e-01},
      {0.1, 0.0, 0.0, 0.0, 9.607894391523233e-01},
      {0.05, 0.1, 9.974864974285430e-03, 2.0e-02, 9.900498337491680e-01},
      {0.05, 0.3, 2.992060510986305e-02, 6.0e-02, 9.900498337491683e-01},
  };
  for (const Case& c : cases) {
    const CouplingParams cp = scaled_coupling(c.g_tau);
    const FockSpace space(40);
    const auto init = phase_space::coherent_state_from_quadratures(0.0, c.p0, space);
    for (auto rep : {Representation::symmetric, Representation::exact}) {
      const RamseyResult r = ramsey_sequence(2, cp, 0.0, init, rep);
      EXPECT_NEAR(r.jz_final_exact, c.jz, 1e-12);
      EXPECT_NEAR(r.measured_phase, c.phase, 1e-12);
      EXPECT_NEAR(r.visibility, c.vis, 1e-12);
      EXPECT_NEAR(r.jz_final_analytic, 2.0 * c.g_tau, 1e-15);
      EXPECT_NEAR(r.phase, 4.0 * c.g_tau, 1e-15);
    }
  }
}

TEST(Ramsey, ZeroCouplingLeavesRegisterUnrotated) {
  const CouplingParams cp = scaled_coupling(1e-12);
  const auto vac = phase_space::ResonatorState::vacuum(FockSpace(20));
  EXPECT_NEAR(ramsey_sequence(3, cp, 0.0, vac).jz_final_exact, 0.0, 1e-12);
}

TEST(DynamicsProperty, PopulationsPreserved) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gt(0.0, 0.4);
  std::normal_distribution<double> amp(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    Vector v(basis_dim(n, Representation::exact));
    for (auto& c : v) c = Complex(amp(rng), amp(rng));
    v.normalize();
    const QubitRegister reg(n, Representation::exact, v);
    const JointState psi = JointState::product(reg, phase_space::ResonatorState::vacuum(FockSpace(40)));
    const JointState out = evolve_joint(psi, scaled_coupling(gt(rng)), 0.0);
    const auto before = psi.register_probabilities();
    const auto after = out.register_probabilities();
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
  }
}

TEST(DynamicsProperty, MeanXTracksJz) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> gt(0.0, 0.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> mix(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double c = std::sqrt(mix(rng));
    const QubitRegister q = single_qubit(c, std::polar(std::sqrt(1.0 - c * c), phase(rng)));
    const CouplingParams cp = scaled_coupling(gt(rng));
    const JointState out = evolve_joint(
        JointState::product(q, phase_space::ResonatorState::vacuum(FockSpace(40))), cp, 0.0);
    EXPECT_NEAR(out.moments().mean_x, mean_x_shift_analytic(cp, 0.0, q.mean_jz()), 1e-11);
  }
}
