#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "metrocost/qfi.hpp"

using namespace metrocost;

namespace {

CMatrix dense_combination(const GeneratorSet& g, const RVector& theta) {
  CMatrix h = CMatrix::Zero(g.dim(), g.dim());
  for (int i = 0; i < g.size(); ++i) h += theta(i) * g[i].dense();
  return h;
}

CVector expm_evolve(const GeneratorSet& g, const RVector& theta, const CVector& psi) {
  const CMatrix h = Complex(0.0, 1.0) * dense_combination(g, theta);
  return h.exp() * psi;
}

// F from Richardson-extrapolated central differences of exp(i n theta.Lambda) psi.
RMatrix oracle_qfi(const GeneratorSet& g, const RVector& theta0, const CVector& psi, int n) {
  const int p = g.size();
  const CVector out = expm_evolve(g, n * theta0, psi);
  std::vector<CVector> d;
  for (int i = 0; i < p; ++i) {
    auto diff = [&](double h) {
      RVector a = theta0, b = theta0;
      a(i) += h;
      b(i) -= h;
      return CVector((expm_evolve(g, n * a, psi) - expm_evolve(g, n * b, psi)) / (2.0 * h));
    };
    d.push_back((4.0 * diff(1e-4) - diff(2e-4)) / 3.0);
  }
  RMatrix f(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const Complex overlap = d[i].dot(d[j]) - d[i].dot(out) * out.dot(d[j]);
      f(i, j) = 4.0 * overlap.real();
    }
  return f;
}

// Generator covariance at theta = 0: 4 n^2 (Re<L_i L_j> - <L_i><L_j>).
RMatrix covariance_qfi(const GeneratorSet& g, const CVector& psi, int n) {
  const int p = g.size();
  RMatrix f(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const CMatrix li = g[i].dense(), lj = g[j].dense();
      const double sym = 0.5 * psi.dot((li * lj + lj * li) * psi).real();
      f(i, j) = 4.0 * n * n * (sym - psi.dot(li * psi).real() * psi.dot(lj * psi).real());
    }
  return f;
}

CVector random_state(Eigen::Index d, unsigned seed) {
  std::srand(seed);
  CVector v = CVector::Random(d);
  return v / v.norm();
}

}  // namespace

TEST(PureState, NormalizationContract) {
  CVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(PureState{v}, InvalidArgument);
  EXPECT_NEAR(PureState(v, true).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(PureState(CVector::Zero(3), true), InvalidArgument);
  EXPECT_THROW(PureState::basis(3, 3), InvalidArgument);
}

TEST(PhaseState, SinCoefficientsClosedForm) {
  const int n = 12;
  const auto c = sin_coefficients(n);
  EXPECT_EQ(c.budget(), n);
  for (int m = 0; m <= n; ++m)
    EXPECT_NEAR(c[m].real(), std::sqrt(2.0 / (n + 2)) * std::sin((m + 1) * kPi / (n + 2)), 1e-15);
  EXPECT_THROW(sin_coefficients(0), InvalidArgument);
}

TEST(Evolve, MatchesMatrixExponential) {
  const GeneratorSet g = build_pauli_generators("xyz");
  RVector theta(3);
  theta << 0.4, -0.9, 1.3;
  const CVector psi = random_state(2, 3);
  const CVector ours = evolve(g, theta, PureState(psi)).amplitudes();
  EXPECT_LT((ours - expm_evolve(g, theta, psi)).norm(), 1e-13);

  const GeneratorSet f = build_fixed_atom_generators(3);
  RVector t3(3);
  t3 << 0.2, 1.7, -2.5;
  const CVector s8 = random_state(8, 5);
  EXPECT_LT((evolve(f, t3, PureState(s8)).amplitudes() - expm_evolve(f, t3, s8)).norm(), 1e-13);
}

TEST(Qfi, NoonFamilyGivesNSquared) {
  for (int n = 1; n <= 10; ++n) {
    const auto c = noon_coefficients(n);
    const GeneratorSet g({c.number_operator()});
    const QfiMatrix f = qfi_pure(g, RVector::Zero(1), c.as_state());
    EXPECT_NEAR(f(0, 0), static_cast<double>(n) * n, 1e-9);
  }
}

TEST(Qfi, CommutingMatchesFiniteDifferenceOracleAwayFromOrigin) {
  const GeneratorSet g = build_fixed_atom_generators(3);
  RVector theta(3);
  theta << 0.3, -0.2, 0.9;
  const CVector psi = random_state(8, 11);
  for (int n : {1, 3}) {
    const RMatrix ours = qfi_pure(g, theta, PureState(psi), n).matrix();
    EXPECT_LT((ours - oracle_qfi(g, theta, psi, n)).cwiseAbs().maxCoeff(), 1e-6) << "n=" << n;
  }
}

TEST(Qfi, NoncommutingAtOriginMatchesCovariance) {
  const GeneratorSet g = build_pauli_generators("xyz");
  const CVector psi = random_state(2, 17);
  const RMatrix ours = qfi_pure(g, RVector::Zero(3), PureState(psi), 2).matrix();
  EXPECT_LT((ours - covariance_qfi(g, psi, 2)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Qfi, NoncommutingAwayFromOriginUnsupported) {
  const GeneratorSet g = build_pauli_generators("xy");
  EXPECT_THROW(qfi_pure(g, RVector::Constant(2, 0.1), PureState::basis(2, 0)), UnsupportedConfiguration);
}

TEST(Qfi, InputValidation) {
  const GeneratorSet g = build_fixed_atom_generators(2);
  EXPECT_THROW(qfi_pure(g, RVector::Zero(3), PureState::basis(4, 0)), InvalidArgument);
  EXPECT_THROW(qfi_pure(g, RVector::Zero(2), PureState::basis(3, 0)), InvalidArgument);
  EXPECT_THROW(qfi_pure(g, RVector::Zero(2), PureState::basis(4, 0), 0), InvalidArgument);
}

TEST(Qfi, SuperposedNoonIsIsotropic) {
  for (int p = 1; p <= 6; ++p) {
    for (int n : {1, 5, 20}) {
      const QfiMatrix f = qfi_pure(build_free_atom_generators(p), RVector::Zero(p), superposed_noon_state(p, n), n);
      EXPECT_LT((f.matrix() - (double(n) * n / p) * RMatrix::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_NEAR(trace_inverse(f), double(p) * p / (double(n) * n), 1e-9);
    }
  }
}

TEST(Qfi, SkewedPairTraceInverse) {
  const double a = 1.0, b = 0.5;
  const GeneratorSet g = build_skewed_pair_generators(a, b);
  const QfiMatrix f = qfi_pure(g, RVector::Zero(2), PureState(CVector::Constant(4, 0.5)));
  EXPECT_NEAR(f(0, 0), 0.625, 1e-12);
  EXPECT_NEAR(f(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(trace_inverse(f), 2.0 / ((a - b) * (a - b)) + 2.0 / ((a + b) * (a + b)), 1e-9);
}

TEST(Qfi, SingularLimits) {
  RMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, 0.0;
  const QfiMatrix f(m);
  EXPECT_EQ(trace_inverse(f), kInf);
  EXPECT_DOUBLE_EQ(directional_variance(f, RVector::Unit(2, 0)), 1.0);
  EXPECT_EQ(directional_variance(f, RVector::Unit(2, 1)), kInf);
  EXPECT_EQ(nuisance_variance(f, 1), kInf);
  RMatrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(QfiMatrix{bad}, InvalidArgument);
}

TEST(Saturability, CommutingIsSaturableNoncommutingMayNotBe) {
  const GeneratorSet f = build_fixed_atom_generators(2);
  EXPECT_TRUE(saturability(f, RVector::Zero(2), PureState(CVector::Constant(4, 0.5))).saturable);

  // |0> under X/2, Y/2: Im <d_x psi|d_y psi> = <Z>/4 != 0.
  const auto rep = saturability(build_pauli_generators("xy"), RVector::Zero(2), PureState::basis(2, 0));
  EXPECT_FALSE(rep.saturable);
  EXPECT_NEAR(rep.imag_parts(0, 1), -rep.imag_parts(1, 0), 1e-15);
  EXPECT_GT(rep.imag_max, 0.1);
}
