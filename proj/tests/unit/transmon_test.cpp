#include "strainsense/transmon.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "strainsense/errors.hpp"
#include "strainsense/units.hpp"

using namespace strainsense;
using transmon::TransmonParams;

namespace {

// Values from tests/oracles/transmon_oracle.py (numpy eigvalsh), units of E_C.
struct OracleRow {
  double ratio;
  double omega01;
  double omega12;
  double approx;
};
constexpr OracleRow kOracle[] = {
    {20.0, 11.5548217207006, 10.0995280857374, 11.6491106406735},
    {50.0, 18.9419189243162, 17.7926958950914, 19.0},
    {100.0, 27.2451355371447, 26.1496412826206, 27.2842712474619},
    {200.0, 38.9731923436322, 37.9095497436521, 39.0},
};
constexpr double kChiNumericOverEc = 1003.39391079;  // beta = 100, h = 1e-6, ratio 50

TransmonParams unit_ec(double ratio, double beta = 0.0, double n_g = 0.0) {
  return TransmonParams{1.0, ratio, beta, n_g, transmon::kDefaultChargeCutoff};
}

}  // namespace

TEST(Transmon, ExactSpectrumMatchesDenseOracle) {
  for (const OracleRow& row : kOracle) {
    const auto s = transmon::charge_spectrum_exact(unit_ec(row.ratio), 0.0);
    EXPECT_NEAR(s.omega01, row.omega01, 1e-10 * row.omega01) << row.ratio;
    EXPECT_NEAR(s.omega12, row.omega12, 1e-10 * row.omega12) << row.ratio;
    EXPECT_TRUE(s.degeneracies.empty());
  }
}

TEST(Transmon, ApproximationErrorShrinksWithRatio) {
  double previous = 1.0;
  for (const OracleRow& row : kOracle) {
    const auto a = transmon::frequency_approx(unit_ec(row.ratio), 0.0);
    EXPECT_NEAR(a.omega_q0, row.approx, 1e-12 * row.approx);
    const double err = std::abs(a.omega_q0 - row.omega01) / row.omega01;
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(Transmon, PhysicalUnitsExample) {
  const TransmonParams p{units::ghz(0.25), units::ghz(12.5), 0.0, 0.0, 30};
  const auto s = transmon::charge_spectrum_exact(p, 0.0);
  EXPECT_NEAR(units::to_hz(s.omega01), 4.7354797310790415e9, 1.0);
  EXPECT_LT(s.omega12, s.omega01);  // negative anharmonicity
}

TEST(Transmon, CutoffConverged) {
  TransmonParams lo = unit_ec(50.0);
  lo.charge_cutoff = 20;
  const double w20 = transmon::charge_spectrum_exact(lo, 0.0).omega01;
  const double w30 = transmon::charge_spectrum_exact(unit_ec(50.0), 0.0).omega01;
  EXPECT_LT(std::abs(w20 - w30) / w30, 1e-12);
}

TEST(Transmon, OffsetChargeInsensitiveDeepInRegime) {
  // Oracle: 2.09e-6 relative at E_J/E_C = 50.
  const double w0 = transmon::charge_spectrum_exact(unit_ec(50.0, 0.0, 0.0), 0.0).omega01;
  const double w5 = transmon::charge_spectrum_exact(unit_ec(50.0, 0.0, 0.5), 0.0).omega01;
  EXPECT_NEAR(std::abs(w0 - w5) / w0, 2.0922e-6, 1e-9);
  EXPECT_LT(std::abs(w0 - w5) / w0, 5e-6);
}

TEST(Transmon, DegeneracyFlaggedAtChargeSweetSpotWithWeakJunction) {
  // E_J -> 0 at n_g = 0.5: charge states 0 and 1 are degenerate.
  TransmonParams p = unit_ec(1e-14, 0.0, 0.5);
  p.e_j0 = 1e-14;
  const auto s = transmon::charge_spectrum_exact(p, 0.0);
  ASSERT_FALSE(s.degeneracies.empty());
  EXPECT_EQ(s.degeneracies.front(), std::make_pair(std::size_t{0}, std::size_t{1}));
}

TEST(Transmon, EigenvaluesMatchDenseHamiltonian) {
  const TransmonParams p = unit_ec(37.3, 40.0, 0.17);
  const Eigen::MatrixXd h = transmon::charge_hamiltonian(p, 1e-3);
  EXPECT_TRUE(h.isApprox(h.transpose()));
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues();
  const auto s = transmon::charge_spectrum_exact(p, 1e-3, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(s.eigenvalues[i], ev[static_cast<Eigen::Index>(i)], 1e-9);
  }
}

TEST(Transmon, Guards) {
  EXPECT_THROW(transmon::josephson_energy(unit_ec(50.0, 100.0), 0.01), ModelRangeError);
  EXPECT_THROW(transmon::frequency_approx(unit_ec(10.0), 0.0), RegimeError);
  EXPECT_THROW(transmon::charge_spectrum_exact(unit_ec(50.0), 0.0, 2), CutoffError);
  EXPECT_THROW(transmon::charge_spectrum_exact(unit_ec(50.0), 0.0, 58), CutoffError);
  TransmonParams tight = unit_ec(50.0);
  tight.charge_cutoff = 9;
  EXPECT_THROW(tight.validate(), ModelRangeError);
  TransmonParams coarse = unit_ec(2000.0);
  coarse.charge_cutoff = 10;
  EXPECT_THROW(transmon::charge_spectrum_exact(coarse, 0.0), CutoffError);
  EXPECT_THROW(transmon::strain_susceptibility(unit_ec(50.0, 100.0),
                                               transmon::SusceptibilityMode::numeric, 1e-2),
               StepError);
  EXPECT_THROW(transmon::strain_susceptibility(unit_ec(50.0, 100.0),
                                               transmon::SusceptibilityMode::numeric, 1e-10),
               StepError);
}

TEST(Transmon, SusceptibilityAgainstOracle) {
  const TransmonParams p = unit_ec(50.0, 100.0);
  const double numeric = transmon::strain_susceptibility(p, transmon::SusceptibilityMode::numeric);
  const double analytic = transmon::strain_susceptibility(p, transmon::SusceptibilityMode::analytic);
  EXPECT_NEAR(numeric, kChiNumericOverEc, 1e-6 * kChiNumericOverEc);
  EXPECT_DOUBLE_EQ(analytic, 950.0);
  EXPECT_NEAR(transmon::frequency_approx(p, 0.0).chi_taylor, 1000.0, 1e-9);
}

TEST(Transmon, ZeroBetaHasNoSusceptibility) {
  const TransmonParams p = unit_ec(50.0, 0.0);
  EXPECT_EQ(transmon::strain_susceptibility(p, transmon::SusceptibilityMode::analytic), 0.0);
  EXPECT_NEAR(transmon::strain_susceptibility(p, transmon::SusceptibilityMode::numeric), 0.0, 1e-6);
}

// Linearized frequency differs from the nonlinear one at O(eps^2).
TEST(TransmonProperty, LinearizationErrorIsQuadratic) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ratio(20.0, 300.0);
  std::uniform_real_distribution<double> beta(10.0, 200.0);
  for (int trial = 0; trial < 50; ++trial) {
    const TransmonParams p = unit_ec(ratio(rng), beta(rng));
    const double eps = 1e-4 / p.beta;
    const auto a1 = transmon::frequency_approx(p, eps);
    const auto a2 = transmon::frequency_approx(p, 2.0 * eps);
    const double e1 = std::abs(a1.nonlinear - a1.linearized);
    const double e2 = std::abs(a2.nonlinear - a2.linearized);
    EXPECT_NEAR(e2 / e1, 4.0, 1e-3) << "trial " << trial;
  }
}

TEST(TransmonProperty, FrequencyIncreasesWithJosephsonEnergy) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ratio(20.0, 250.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double r = ratio(rng);
    const double lo = transmon::charge_spectrum_exact(unit_ec(r), 0.0).omega01;
    const double hi = transmon::charge_spectrum_exact(unit_ec(r * 1.01), 0.0).omega01;
    EXPECT_GT(hi, lo);
  }
}
