#include <gtest/gtest.h>

#include <random>

#include "metrocost/bounds.hpp"
#include "metrocost/qfi.hpp"

using namespace metrocost;

namespace {

// min over x on a simplex grid of sum c_i / x_i^alpha, refined by coordinate
// shrinking around the incumbent.
double brute_force_allocation(const RVector& c, int alpha) {
  const int p = static_cast<int>(c.size());
  auto cost = [&](const RVector& x) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += c(i) / std::pow(x(i), alpha);
    return s;
  };
  if (p == 1) return c(0);
  RVector best = RVector::Constant(p, 1.0 / p);
  double best_v = cost(best);
  double radius = 0.5;
  const int steps = p == 2 ? 400 : 80;
  for (int round = 0; round < 40; ++round) {
    const RVector centre = best;
    for (int a = -steps; a <= steps; ++a)
      for (int b = (p == 3 ? -steps : 0); b <= (p == 3 ? steps : 0); ++b) {
        RVector x = centre;
        x(0) += radius * a / steps;
        if (p == 3) x(1) += radius * b / steps;
        x(p - 1) = 1.0 - x.head(p - 1).sum();
        if ((x.array() <= 0.0).any()) continue;
        double v = cost(x);
        if (v < best_v) {
          best_v = v;
          best = x;
        }
      }
    radius *= 0.2;
  }
  return best_v;
}

// min over diagonal probe populations q of [A^-1 F(q)^-1 A^-T]_ii, with
// F(q) = 4 Cov_q(lambda) for diagonal generators, on a 3-simplex grid.
double brute_force_nuisance(const GeneratorSet& g, const RMatrix& a, int i, int steps) {
  const RMatrix table = *g.eigenvalue_table();
  const RVector r = a.inverse().row(i).transpose();
  double best = kInf;
  for (int q0 = 0; q0 <= steps; ++q0)
    for (int q1 = 0; q0 + q1 <= steps; ++q1)
      for (int q2 = 0; q0 + q1 + q2 <= steps; ++q2) {
        RVector q(4);
        q << q0, q1, q2, steps - q0 - q1 - q2;
        q /= steps;
        const RVector mean = table.transpose() * q;
        RMatrix f = RMatrix::Zero(2, 2);
        for (int s = 0; s < 4; ++s) {
          const RVector d = table.row(s).transpose() - mean;
          f += 4.0 * q(s) * d * d.transpose();
        }
        if (f.determinant() < 1e-12) continue;
        best = std::min(best, r.dot(f.inverse() * r));
      }
  return best;
}

}  // namespace

TEST(NelderMead, FindsQuadraticMinimum) {
  auto f = [](const RVector& x) { return (x(0) - 1.0) * (x(0) - 1.0) + 4.0 * (x(1) + 2.0) * (x(1) + 2.0); };
  const LocalResult r = nelder_mead(f, RVector::Zero(2), 0.5, 2000, 1e-15);
  EXPECT_NEAR(r.x(0), 1.0, 1e-6);
  EXPECT_NEAR(r.x(1), -2.0, 1e-6);
}

TEST(Multistart, ThreadCountDoesNotChangeResult) {
  auto f = [](const RVector& x) { return std::sin(3.0 * x(0)) * std::cos(2.0 * x(1)) + 0.1 * x.squaredNorm(); };
  std::vector<RVector> starts;
  for (int s = 0; s < 6; ++s) starts.push_back(RVector::Constant(2, counter_normal(5, s)));
  SearchOptions one, four;
  four.threads = 4;
  const auto a = multistart_minimize(f, starts, one);
  const auto b = multistart_minimize(f, starts, four);
  EXPECT_EQ(a.best_start, b.best_start);
  EXPECT_EQ(a.value, b.value);
}

TEST(CounterRng, DeterministicAndUniform) {
  EXPECT_EQ(counter_uniform(1, 7), counter_uniform(1, 7));
  EXPECT_NE(counter_uniform(1, 7), counter_uniform(2, 7));
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) mean += counter_uniform(42, i);
  EXPECT_NEAR(mean / 20000.0, 0.5, 0.01);
}

TEST(SphereSearch, FixedAtomMaximumIsRootP) {
  // spread(a . Lambda) = sum |a_i| for fixed atoms, maximal at the uniform direction.
  for (int p = 1; p <= 5; ++p)
    EXPECT_NEAR(max_spread_over_sphere(build_fixed_atom_generators(p)).value, std::sqrt(double(p)), 1e-9);
  // Free atoms: spread = max_i |a_i|, at most 1 on the sphere.
  EXPECT_NEAR(max_spread_over_sphere(build_free_atom_generators(3)).value, 1.0, 1e-9);
}

TEST(HyperplaneSearch, MatchesGridScan) {
  const GeneratorSet g = build_skewed_pair_generators(1.0, 0.3);
  RVector r(2);
  r << 0.8, -0.6;
  double scan = kInf;
  for (int k = -200000; k <= 200000; ++k) {
    const double t = k * 2.5e-5;
    RVector w = r / r.squaredNorm() + t * RVector((RVector(2) << 0.6, 0.8).finished());
    scan = std::min(scan, g.combination_spread(w));
  }
  // The scan step bounds how far the scan can sit above the true minimum.
  const double ours = min_spread_on_hyperplane(g, r);
  EXPECT_LE(ours, scan + 1e-12);
  EXPECT_GE(ours, scan - 3e-5);
}

TEST(OrthogonalBound, FixedAndFreeAtoms) {
  // Fixed atoms: identity is optimal (sum = p). Free atoms: Walsh-Hadamard (sum = p^2).
  for (int p : {2, 4}) {
    const auto fixed = optimize_orthogonal_bound(build_fixed_atom_generators(p));
    EXPECT_NEAR(fixed.value, p, 1e-9);
    const auto free = optimize_orthogonal_bound(build_free_atom_generators(p));
    EXPECT_NEAR(free.value, double(p) * p, 1e-9);
  }
  EXPECT_THROW(optimize_orthogonal_bound(build_free_atom_generators(1)), InvalidArgument);
}

TEST(Allocation, ClosedFormMatchesBruteForce) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 1 + trial % 3;
    const int alpha = 1 + (trial / 3) % 2;
    RVector c(p);
    for (int i = 0; i < p; ++i) c(i) = u(gen);
    const AllocationPlan plan = allocate(c, alpha);
    EXPECT_NEAR(plan.shares.sum(), 1.0, 1e-14);
    const double brute = brute_force_allocation(c, alpha);
    EXPECT_NEAR(plan.total_constant / brute, 1.0, 1e-6) << "trial " << trial;
    EXPECT_LE(plan.total_constant, brute * (1.0 + 1e-12));
  }
  EXPECT_THROW(allocate(RVector::Ones(2), 3), InvalidArgument);
  EXPECT_THROW(allocate(RVector::Zero(2), 1), InvalidArgument);
}

TEST(SepCost, FixedAtomConstants) {
  const GeneratorSet g = build_fixed_atom_generators(4);
  const auto cr = sep_cost(g, ResourceBudget::cr(10, 3), single_param_constants(g, Paradigm::CR));
  EXPECT_NEAR(cr.constant, 16.0, 1e-12);
  EXPECT_NEAR(cr.cost(ResourceBudget::cr(10, 3)), 16.0 / (3.0 * 100.0), 1e-15);
  const auto mm = sep_cost(g, ResourceBudget::mm(50), single_param_constants(g, Paradigm::MM));
  EXPECT_NEAR(mm.constant, kPi * kPi * 64.0, 1e-9);
  EXPECT_EQ(mm.exponents().N, -2);
  EXPECT_THROW(mm.cost(ResourceBudget::cr(1, 1)), InvalidArgument);
}

TEST(SepPlus, IdentityObjectiveEqualsSepCost) {
  const GeneratorSet g = build_fixed_atom_generators(3);
  const double obj = sep_plus_objective(RMatrix::Identity(3, 3), spread_variance_oracle(g, Paradigm::MM), 2);
  EXPECT_NEAR(obj, kPi * kPi * 27.0, 1e-9);
  RMatrix singular = RMatrix::Ones(3, 3);
  EXPECT_EQ(sep_plus_objective(singular, spread_variance_oracle(g, Paradigm::MM), 2), kInf);
}

TEST(SepPlus, WalshHadamardReachesLowerBoundForFixedAtoms) {
  for (int p : {2, 4}) {
    const GeneratorSet g = build_fixed_atom_generators(p);
    const ResourceBudget b = ResourceBudget::mm(1);
    const double wh = sep_plus_objective(walsh_hadamard(*exact_log2(p)).matrix(), nuisance_variance_oracle(g, Paradigm::MM), 2);
    EXPECT_NEAR(wh, kPi * kPi * p * p, 1e-6 * wh);
    EXPECT_NEAR(sep_plus_lower_bound(g, b).constant, kPi * kPi * p * p, 1e-6 * wh);
  }
}

TEST(NuisanceOracle, MatchesBruteForceOverProbes) {
  const GeneratorSet g = build_skewed_pair_generators(1.0, 0.5);
  const VarianceOracle oracle = nuisance_variance_oracle(g, Paradigm::CR);
  RMatrix a(2, 2);
  a << 1.0, 0.3, -0.4, 0.9;
  for (int i = 0; i < 2; ++i) {
    const double brute = brute_force_nuisance(g, a, i, 60);
    const double ours = oracle(ReparamMatrix(a), i);
    EXPECT_LE(ours, brute * (1.0 + 1e-9));
    EXPECT_NEAR(ours / brute, 1.0, 5e-3);
  }
}

TEST(SkewedPair, GeneralSeedAttainsJointConstant) {
  const double alpha = 1.0, beta = 0.5;
  const GeneratorSet g = build_skewed_pair_generators(alpha, beta);
  RMatrix m(2, 2);
  m << alpha, beta, beta, alpha;
  const SepPlusResult r = sep_plus_optimize(g, ResourceBudget::cr(1, 1), SearchOptions{}, {RMatrix(m.inverse())});
  const double jnt = skewed_pair_general_constant(alpha, beta);
  EXPECT_NEAR(jnt, 80.0 / 9.0, 1e-12);
  EXPECT_NEAR(r.estimate.constant, jnt, 1e-9);
  EXPECT_EQ(r.estimate.status, BoundStatus::upper_bound);

  const double orth = orthogonal_restricted_sep_plus(alpha, beta, 360);
  EXPECT_GT(orth / jnt, 1.01);
}

TEST(SkewedPair, OrthogonalRestrictionMatchesAngleScan) {
  const GeneratorSet g = build_skewed_pair_generators(1.0, 0.4);
  double scan = kInf;
  for (int k = 0; k < 20000; ++k) scan = std::min(scan, skewed_pair_rotation_cost(g, k * kPi / 2.0 / 20000));
  const double ours = orthogonal_restricted_sep_plus(1.0, 0.4, 90);
  EXPECT_LE(ours, scan * (1.0 + 1e-12));
  EXPECT_GT(ours / scan, 1.0 - 1e-4);
}

TEST(JntBound, Values) {
  EXPECT_NEAR(jnt_lower_bound(build_free_atom_generators(4), ResourceBudget::cr(1, 1)).constant, 16.0, 1e-9);
  EXPECT_NEAR(jnt_lower_bound(build_pauli_generators("xyz"), ResourceBudget::mm(1)).constant, 3.0 * kPi * kPi, 1e-8);
  EXPECT_EQ(jnt_lower_bound(build_pauli_generators("z"), ResourceBudget::cr(1, 1)).status, BoundStatus::lower_bound);
}

TEST(CostEstimate, FiniteNForm) {
  CostEstimate e = make_estimate(Paradigm::CR, Strategy::JNT, 9.0, 2, BoundStatus::cited, "x");
  e.n_offset = 2.0;
  EXPECT_NEAR(e.effective_constant(100), 9.0 * 100.0 / 102.0, 1e-14);
  EXPECT_THROW(make_estimate(Paradigm::CR, Strategy::SEP, kInf, 1, BoundStatus::exact_asymptotic, ""), NumericalError);
  EXPECT_THROW(make_estimate(Paradigm::CR, Strategy::SEP, -1.0, 1, BoundStatus::exact_asymptotic, ""), NumericalError);
  EXPECT_THROW(paradigm_from_string("xx"), InvalidArgument);
}
