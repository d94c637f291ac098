#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qwalk/analysis.hpp"

using namespace qwalk;

namespace {

DensityMatrix bell_rho() { return DensityMatrix::from_pure(make_generalized_bell({2, 0, 0})); }

DensityMatrix random_rho(int n_qubits, Rng& rng) {
  const int dim = 1 << n_qubits;
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(standard_normal(rng), standard_normal(rng));
  Matrix r = g * g.adjoint();
  r /= r.trace().real();
  return DensityMatrix(std::vector<int>(n_qubits, 2), 0.5 * (r + r.adjoint()));
}

}  // namespace

TEST(Concurrence, Examples) {
  EXPECT_NEAR(concurrence(bell_rho()), 1.0, 1e-9);
  EXPECT_NEAR(concurrence(PureState::basis({2, 2}, {0, 1})), 0.0, 1e-9);
  EXPECT_NEAR(concurrence(make_pair(0.6, 0.8)), 0.96, 1e-9);
  EXPECT_THROW(concurrence(make_generalized_bell({3, 0, 0})), std::invalid_argument);
}

TEST(Concurrence, MatchesSpinFlipOracleOnMixedStates) {
  Rng rng = make_rng(8);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix r = random_rho(2, rng);
    const DensityMatrix mixed = depolarize(bell_rho(), 0.05 * (i % 10));
    EXPECT_NEAR(concurrence(r), oracle::concurrence(r.mat()), 1e-7);
    EXPECT_NEAR(concurrence(mixed), oracle::concurrence(mixed.mat()), 1e-7);
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entanglement_entropy(make_generalized_bell({2, 0, 0}), {0}), 1.0, 1e-9);
  EXPECT_NEAR(entanglement_entropy(PureState::basis({2, 2}, {0, 1}), {0}), 0.0, 1e-9);
  Vector v = Vector::Zero(27);
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) v(((p + q) % 3) * 9 + p * 3 + q) = 1.0 / 3.0;
  const PureState s({3, 3, 3}, v);
  EXPECT_NEAR(entanglement_entropy(s, {0}), std::log2(3.0), 1e-9);
  EXPECT_NEAR(entanglement_entropy(s, {0}), oracle::entropy_bits(oracle::partial_trace_keep(DensityMatrix::from_pure(s).mat(), {3, 3, 3}, {0})), 1e-9);
  for (double e : single_site_entropies(s)) EXPECT_NEAR(e, std::log2(3.0), 1e-9);
}

TEST(Entropy, InvalidCuts) {
  const PureState b = make_generalized_bell({2, 0, 0});
  EXPECT_THROW(entanglement_entropy(b, {}), std::invalid_argument);
  EXPECT_THROW(entanglement_entropy(b, {0, 1}), std::invalid_argument);
  EXPECT_THROW(entanglement_entropy(b, {0, 0}), std::invalid_argument);
}

TEST(Fidelity, Examples) {
  const DensityMatrix b = bell_rho();
  EXPECT_NEAR(fidelity(b, b), 1.0, 1e-9);
  EXPECT_NEAR(fidelity(DensityMatrix::from_pure(PureState::basis({2}, {0})), DensityMatrix::from_pure(PureState::basis({2}, {1}))), 0.0, 1e-9);
  EXPECT_NEAR(fidelity(b, DensityMatrix::maximally_mixed({2, 2})), 0.25, 1e-9);
  EXPECT_THROW(fidelity(b, DensityMatrix::maximally_mixed({4})), std::invalid_argument);
}

TEST(Fidelity, SymmetricAndPureOverlap) {
  Rng rng = make_rng(4);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = random_rho(2, rng), b = random_rho(2, rng);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-9);
    Vector u(4), w(4);
    for (int j = 0; j < 4; ++j) {
      u(j) = cplx(standard_normal(rng), standard_normal(rng));
      w(j) = cplx(standard_normal(rng), standard_normal(rng));
    }
    const PureState pu = PureState::normalized({2, 2}, u), pw = PureState::normalized({2, 2}, w);
    EXPECT_NEAR(fidelity(DensityMatrix::from_pure(pu), DensityMatrix::from_pure(pw)), std::norm(pu.amps().dot(pw.amps())), 1e-9);
  }
}

TEST(Depolarize, EndpointsAndBellValue) {
  const DensityMatrix b = bell_rho();
  EXPECT_LT((depolarize(b, 0.0).mat() - b.mat()).norm(), 1e-15);
  EXPECT_LT((depolarize(b, 1.0).mat() - Matrix::Identity(4, 4) / 4.0).norm(), 1e-15);
  EXPECT_NEAR(fidelity(b, depolarize(b, 0.2)), 0.85, 1e-9);
  EXPECT_THROW(depolarize(b, -0.1), std::invalid_argument);
  EXPECT_THROW(depolarize(b, 1.1), std::invalid_argument);
}

TEST(Depolarize, MonotoneTracePreservingPsd) {
  const DensityMatrix b = bell_rho();
  double prev = 2.0;
  for (int i = 0; i <= 10; ++i) {
    const DensityMatrix r = depolarize(b, 0.1 * i);
    EXPECT_NEAR(r.mat().trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(r.is_psd());
    const double f = fidelity(b, r);
    EXPECT_LE(f, prev + 1e-12);
    prev = f;
  }
}

TEST(Tomography, ExactModeRecoversRandomStates) {
  Rng rng = make_rng(13);
  for (int n : {2, 3})
    for (int i = 0; i < 10; ++i) {
      const DensityMatrix r = random_rho(n, rng);
      const auto res = tomography(r, std::nullopt, 0, TomographyMethod::linear_inversion);
      EXPECT_LT(max_abs(res.rho.mat() - r.mat()), 1e-9);
      EXPECT_EQ(res.basis_settings, n == 2 ? 9 : 27);
      EXPECT_FALSE(res.shots_per_setting.has_value());
      const auto e = pauli_expectations(r);
      EXPECT_LT(max_abs(reconstruct_from_pauli(e, n) - r.mat()), 1e-9);
    }
}

TEST(Tomography, BellAt8192Shots) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto res = tomography(make_generalized_bell({2, 0, 0}), 8192, seed, TomographyMethod::linear_inversion);
    EXPECT_GE(fidelity(res.rho, bell_rho()), 0.999) << "seed " << seed;
  }
}

TEST(Tomography, BellAt8192ShotsProjected) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto res = tomography(make_generalized_bell({2, 0, 0}), 8192, seed, TomographyMethod::psd_projected);
    EXPECT_GE(fidelity(res.rho, bell_rho()), 0.99) << "seed " << seed;
    EXPECT_TRUE(res.psd);
  }
}

TEST(Tomography, ProjectionIsIdentityOnDensityMatrices) {
  Rng rng = make_rng(5);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix r = random_rho(2, rng);
    EXPECT_LT(max_abs(project_psd(r.mat()) - r.mat()), 1e-12);
  }
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  const Matrix p = project_psd(neg);
  EXPECT_NEAR(p(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(p(1, 1).real(), 0.0, 1e-12);
}

TEST(Tomography, DepolarizedBellLargeShots) {
  const DensityMatrix target = depolarize(bell_rho(), 0.3);
  const auto res = tomography(target, 200000, 7, TomographyMethod::linear_inversion);
  EXPECT_LT(trace_distance(res.rho, target), 0.02);
}

TEST(Tomography, SeedDeterminismAndErrors) {
  const auto a = tomography(bell_rho(), 100, 3, TomographyMethod::linear_inversion);
  const auto b = tomography(bell_rho(), 100, 3, TomographyMethod::linear_inversion);
  EXPECT_EQ(a.rho.mat(), b.rho.mat());
  EXPECT_THROW(tomography(make_generalized_bell({3, 0, 0}), 10, 1, TomographyMethod::linear_inversion), std::invalid_argument);
  EXPECT_THROW(tomography(PureState::basis({2}, {0}), 10, 1, TomographyMethod::linear_inversion), std::invalid_argument);
  EXPECT_THROW(tomography(bell_rho(), 0, 1, TomographyMethod::linear_inversion), std::invalid_argument);
}

TEST(Tomography, PsdProjectionIsValidDensity) {
  const auto res = tomography(bell_rho(), 20, 9, TomographyMethod::psd_projected);
  EXPECT_GE(res.min_eigenvalue, kPsdFloor);
  EXPECT_NEAR(res.rho.mat().trace().real(), 1.0, 1e-9);
}

TEST(ChiSquare, UniformAndMismatch) {
  const std::map<std::string, double> exp{{"0", 0.5}, {"1", 0.5}};
  const auto ok = chi_square_gof({{"0", 500}, {"1", 500}}, exp);
  EXPECT_NEAR(ok.statistic, 0.0, 1e-12);
  EXPECT_EQ(ok.dof, 1);
  EXPECT_NEAR(ok.p_value, 1.0, 1e-12);
  const auto bad = chi_square_gof({{"0", 900}, {"1", 100}}, exp);
  EXPECT_LT(bad.p_value, 1e-10);
  EXPECT_EQ(chi_square_gof({{"2", 1}, {"0", 5}}, exp).p_value, 0.0);
}

TEST(ChiSquare, CriticalValueDf7) {
  // 24.322 is the 0.999 quantile of chi^2 with 7 degrees of freedom.
  std::map<std::string, double> exp;
  Histogram h;
  for (int i = 0; i < 8; ++i) {
    exp[std::to_string(i)] = 0.125;
    h[std::to_string(i)] = 1000;
  }
  h["0"] += 0;
  const auto r = chi_square_gof(h, exp);
  EXPECT_EQ(r.dof, 7);
  boost::math::chi_squared_distribution<double> d(7);
  EXPECT_NEAR(boost::math::quantile(d, 0.999), 24.322, 1e-3);
}
