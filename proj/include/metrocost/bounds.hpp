#pragma once

// Leading-order strategy costs in the many-repetition (CR) and single-shot
// minimax (MM) paradigms. A CR constant c means cost ~ c / (k n^2); an MM
// constant c means cost ~ c / N^2.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "metrocost/parameter_search.hpp"
#include "metrocost/qfi.hpp"

namespace metrocost {

enum class Paradigm { CR, MM };
enum class Strategy { SEP, SEP_PLUS, JNT };
enum class BoundStatus { exact_asymptotic, lower_bound, upper_bound, cited };

inline std::string to_string(Paradigm p) { return p == Paradigm::CR ? "CR" : "MM"; }
inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::SEP: return "SEP";
    case Strategy::SEP_PLUS: return "SEP+";
    case Strategy::JNT: return "JNT";
  }
  return "?";
}
inline std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::exact_asymptotic: return "exact_asymptotic";
    case BoundStatus::lower_bound: return "lower_bound";
    case BoundStatus::upper_bound: return "upper_bound";
    case BoundStatus::cited: return "cited";
  }
  return "?";
}

inline Paradigm paradigm_from_string(const std::string& s) {
  if (s == "CR" || s == "cr") return Paradigm::CR;
  if (s == "MM" || s == "mm") return Paradigm::MM;
  throw InvalidArgument("unknown paradigm '" + s + "'");
}
inline Strategy strategy_from_string(const std::string& s) {
  if (s == "SEP" || s == "sep") return Strategy::SEP;
  if (s == "SEP+" || s == "sep+" || s == "sep-plus") return Strategy::SEP_PLUS;
  if (s == "JNT" || s == "jnt") return Strategy::JNT;
  throw InvalidArgument("unknown strategy '" + s + "'");
}
inline BoundStatus status_from_string(const std::string& s) {
  if (s == "exact_asymptotic") return BoundStatus::exact_asymptotic;
  if (s == "lower_bound") return BoundStatus::lower_bound;
  if (s == "upper_bound") return BoundStatus::upper_bound;
  if (s == "cited") return BoundStatus::cited;
  throw InvalidArgument("unknown bound status '" + s + "'");
}

/// Resources: n gates per trial and k trials (CR), or N gates in one shot (MM).
struct ResourceBudget {
  Paradigm paradigm = Paradigm::CR;
  long n = 1;
  long k = 1;
  long N = 1;

  static ResourceBudget cr(long n, long k) {
    detail::require(n >= 1 && k >= 1, "ResourceBudget: n and k must be >= 1");
    return {Paradigm::CR, n, k, n * k};
  }
  static ResourceBudget mm(long total) {
    detail::require(total >= 1, "ResourceBudget: N must be >= 1");
    return {Paradigm::MM, 1, 1, total};
  }
};

/// Exponents of the leading-order cost in (p, n, k, N).
struct CostExponents {
  int p = 0;
  int n = 0;
  int k = 0;
  int N = 0;
};

struct CostEstimate {
  Paradigm paradigm = Paradigm::CR;
  Strategy strategy = Strategy::SEP;
  double constant = 1.0;
  int p_exponent = 0;  // power of p in the formula as written (informational)
  BoundStatus status = BoundStatus::exact_asymptotic;
  std::string provenance;
  std::string variant;  // "", "parallel", "adaptive", ...
  std::string formula;  // leading-order constant in closed form, e.g. "pi^2*p^3"
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;
  double n_offset = 0.0;  // CR finite-n form: constant * n / (n + n_offset)

  CostExponents exponents() const {
    if (paradigm == Paradigm::CR) return {p_exponent, -2, -1, 0};
    return {p_exponent, 0, 0, -2};
  }

  /// Constant of 1/(k n^2) at finite n; equals `constant` when n_offset = 0.
  double effective_constant(long n) const {
    if (paradigm == Paradigm::MM || n_offset == 0.0) return constant;
    return constant * static_cast<double>(n) / (static_cast<double>(n) + n_offset);
  }

  double cost(const ResourceBudget& b) const {
    detail::require(b.paradigm == paradigm, "CostEstimate::cost: budget paradigm differs");
    if (paradigm == Paradigm::CR) return effective_constant(b.n) / (static_cast<double>(b.k) * b.n * b.n);
    return constant / (static_cast<double>(b.N) * b.N);
  }
};

inline CostEstimate make_estimate(Paradigm paradigm, Strategy strategy, double constant, int p_exponent,
                                  BoundStatus status, std::string provenance, std::string formula = {}) {
  if (!(constant > 0.0) || !std::isfinite(constant))
    throw NumericalError("CostEstimate: constant must be positive and finite, got " + std::to_string(constant));
  CostEstimate e;
  e.paradigm = paradigm;
  e.strategy = strategy;
  e.constant = constant;
  e.p_exponent = p_exponent;
  e.status = status;
  e.provenance = std::move(provenance);
  e.formula = std::move(formula);
  return e;
}

// ---------------------------------------------------------------------------
// Single-parameter limits

/// Many-repetition limit 1/(k n^2 lambda^2).
inline double single_param_cr(double lambda, long n, long k) {
  detail::require(lambda > 0.0, "single_param_cr: lambda must be > 0");
  detail::require(n >= 1 && k >= 1, "single_param_cr: n, k must be >= 1");
  return 1.0 / (static_cast<double>(k) * n * n * lambda * lambda);
}

/// Single-shot Heisenberg limit pi^2/(N^2 lambda^2).
inline double single_param_mm(double lambda, long total) {
  detail::require(lambda > 0.0, "single_param_mm: lambda must be > 0");
  detail::require(total >= 1, "single_param_mm: N must be >= 1");
  return kPi * kPi / (static_cast<double>(total) * total * lambda * lambda);
}

inline int scaling_alpha(Paradigm p) { return p == Paradigm::CR ? 1 : 2; }

// ---------------------------------------------------------------------------
// Resource allocation among separately estimated parameters

struct AllocationPlan {
  int alpha = 1;
  RVector c;
  RVector shares;
  double total_constant = 0.0;
};

/// Minimizes sum_i c_i / x_i^alpha over shares x on the simplex:
/// x_i ~ c_i^(1/(alpha+1)), total = (sum_i c_i^(1/(alpha+1)))^(alpha+1).
inline AllocationPlan allocate(const RVector& c, int alpha) {
  detail::require(alpha == 1 || alpha == 2, "allocate: alpha must be 1 or 2");
  detail::require(c.size() >= 1, "allocate: empty constant vector");
  for (Eigen::Index i = 0; i < c.size(); ++i)
    detail::require(c(i) > 0.0 && std::isfinite(c(i)), "allocate: constants must be positive and finite");
  const double e = 1.0 / (alpha + 1.0);
  RVector roots = c.array().pow(e).matrix();
  const double s = roots.sum();
  AllocationPlan plan;
  plan.alpha = alpha;
  plan.c = c;
  plan.shares = roots / s;
  plan.total_constant = std::pow(s, alpha + 1.0);
  return plan;
}

/// A with A^T A = W (upper Cholesky factor), so tr(W Sigma') = tr(Sigma) under theta = A theta'.
inline ReparamMatrix weight_to_reparam(const RMatrix& w) {
  detail::require(w.rows() >= 1 && w.rows() == w.cols(), "weight_to_reparam: W must be square");
  detail::require((w - w.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff()),
                  "weight_to_reparam: W must be symmetric");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(w, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  detail::require(top > 0.0 && es.eigenvalues().minCoeff() > 1e-12 * top, "weight_to_reparam: W must be positive definite");
  Eigen::LLT<RMatrix> llt(w);
  detail::require(llt.info() == Eigen::Success, "weight_to_reparam: Cholesky factorization failed");
  return ReparamMatrix(RMatrix(llt.matrixU()));
}

// ---------------------------------------------------------------------------
// Strategy costs and bounds

/// Separate strategy with optimal resource split. `per_param_constants` are the
/// single-parameter constants (1/lambda_i^2 for CR, pi^2/lambda_i^2 for MM).
/// `unobstructed` states that nuisance parameters do not spoil the individual protocols.
inline CostEstimate sep_cost(const GeneratorSet& gens, const ResourceBudget& budget, const RVector& per_param_constants,
                             bool unobstructed = true) {
  detail::require(per_param_constants.size() == gens.size(), "sep_cost: one constant per parameter required");
  const int alpha = scaling_alpha(budget.paradigm);
  AllocationPlan plan = allocate(per_param_constants, alpha);
  return make_estimate(budget.paradigm, Strategy::SEP, plan.total_constant, alpha + 1,
                       unobstructed ? BoundStatus::exact_asymptotic : BoundStatus::lower_bound, "resource allocation");
}

/// Single-parameter constants from the generator spreads.
inline RVector single_param_constants(const GeneratorSet& gens, Paradigm paradigm) {
  RVector c(gens.size());
  for (int i = 0; i < gens.size(); ++i) {
    double s = spread(gens[i]);
    detail::require(s > 0.0, "single_param_constants: generator with zero spread");
    c(i) = (paradigm == Paradigm::MM ? kPi * kPi : 1.0) / (s * s);
  }
  return c;
}

/// Reparametrization-optimized separate strategy, lower bound via the best
/// single direction: CR p^2/Lambda*^2, MM pi^2 p^3/Lambda*^2.
inline CostEstimate sep_plus_lower_bound(const GeneratorSet& gens, const ResourceBudget& budget,
                                         const SearchOptions& opt = {}) {
  const double p = gens.size();
  const double lam = max_spread_over_sphere(gens, opt).value;
  detail::require(lam > 0.0, "sep_plus_lower_bound: all combinations have zero spread");
  if (budget.paradigm == Paradigm::CR)
    return make_estimate(Paradigm::CR, Strategy::SEP_PLUS, p * p / (lam * lam), 2, BoundStatus::lower_bound,
                         "best single direction");
  return make_estimate(Paradigm::MM, Strategy::SEP_PLUS, kPi * kPi * p * p * p / (lam * lam), 3, BoundStatus::lower_bound,
                       "best single direction");
}

/// Joint-strategy lower bound from the best orthogonal rotation:
/// CR max_O sum_i 1/lambda^2([O^T Lambda]_i), MM the same times pi^2.
inline CostEstimate jnt_lower_bound(const GeneratorSet& gens, const ResourceBudget& budget, const SearchOptions& opt = {}) {
  double value;
  if (gens.size() == 1) {
    double s = spread(gens[0]);
    detail::require(s > 0.0, "jnt_lower_bound: generator with zero spread");
    value = 1.0 / (s * s);
  } else {
    value = optimize_orthogonal_bound(gens, opt).value;
  }
  const double factor = budget.paradigm == Paradigm::MM ? kPi * kPi : 1.0;
  return make_estimate(budget.paradigm, Strategy::JNT, factor * value, 1, BoundStatus::lower_bound, "best orthogonal rotation");
}

/// Minimal variance constant of parameter i in the A-parametrization.
using VarianceOracle = std::function<double(const ReparamMatrix&, int)>;

/// Ignores the other parameters: 1/lambda'^2 (times pi^2 for MM) with
/// lambda' the spread of [A^T Lambda]_i.
inline VarianceOracle spread_variance_oracle(const GeneratorSet& gens, Paradigm paradigm) {
  const double factor = paradigm == Paradigm::MM ? kPi * kPi : 1.0;
  return [gens, factor](const ReparamMatrix& a, int i) {
    double s = gens.combination_spread(a.matrix().col(i));
    return s > 0.0 ? factor / (s * s) : kInf;
  };
}

/// Treats the other parameters as nuisance: min over probes of
/// [A^-1 F^-1 A^-T]_ii = 1 / min_{w . r_i = 1} spread(w . Lambda)^2 with r_i the
/// i-th row of A^-1 (times pi^2 for MM).
inline VarianceOracle nuisance_variance_oracle(const GeneratorSet& gens, Paradigm paradigm, SearchOptions opt = {}) {
  const double factor = paradigm == Paradigm::MM ? kPi * kPi : 1.0;
  opt.random_starts = 0;  // the inner problem is convex
  opt.threads = 1;
  opt.max_evaluations = std::min(opt.max_evaluations, 150 * gens.size());
  return [gens, factor, opt](const ReparamMatrix& a, int i) {
    RVector r = a.matrix().inverse().row(i).transpose();
    double m = min_spread_on_hyperplane(gens, r, opt);
    return m > 0.0 ? factor / (m * m) : kInf;
  };
}

struct SepPlusResult {
  ReparamMatrix reparam = ReparamMatrix::identity(1);
  CostEstimate estimate;
  std::string best_seed;
};

/// (sum_i ([A^T A]_ii * oracle(A, i))^(1/(alpha+1)))^(alpha+1), +inf for singular A.
inline double sep_plus_objective(const RMatrix& a, const VarianceOracle& oracle, int alpha) {
  const Eigen::Index p = a.rows();
  double scale = 1.0;
  for (Eigen::Index j = 0; j < p; ++j) scale *= a.col(j).norm();
  if (!(scale > 0.0) || !(std::abs(a.determinant()) / scale > 1e-12)) return kInf;
  ReparamMatrix rm(a);
  const RMatrix ata = a.transpose() * a;
  const double e = 1.0 / (alpha + 1.0);
  double s = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    double v = oracle(rm, static_cast<int>(i));
    if (!std::isfinite(v)) return kInf;
    s += std::pow(ata(i, i) * v, e);
  }
  return std::pow(s, alpha + 1.0);
}

/// For diagonal generators: A = M^-1 with M built from p linearly independent
/// rows of the eigenvalue table <s|Lambda_i|s>, so each new parameter drives a
/// single pair of basis levels.
inline std::optional<RMatrix> inverse_generator_seed(const GeneratorSet& gens) {
  if (!gens.all_diagonal()) return std::nullopt;
  const int p = gens.size();
  RMatrix table(gens.dim(), p);
  for (int i = 0; i < p; ++i) table.col(i) = gens[i].diagonal_entries();
  Eigen::ColPivHouseholderQR<RMatrix> qr(table.transpose());
  if (qr.rank() < p) return std::nullopt;
  RMatrix m(p, p);
  for (int k = 0; k < p; ++k) m.row(k) = table.row(qr.colsPermutation().indices()(k));
  if (std::abs(m.determinant()) < 1e-12) return std::nullopt;
  return RMatrix(m.inverse());
}

/// Heuristic minimization of the separate-strategy cost over invertible A.
/// Seeds: identity, Walsh-Hadamard (p = 2^r), the inverse-generator construction
/// (diagonal generators) and seeded random matrices. Reported as an upper bound
/// on the true SEP+ optimum.
inline SepPlusResult sep_plus_optimize(const GeneratorSet& gens, const ResourceBudget& budget, const VarianceOracle& oracle,
                                       const SearchOptions& opt = {}, const std::vector<RMatrix>& extra_seeds = {}) {
  const int p = gens.size();
  const int alpha = scaling_alpha(budget.paradigm);
  std::vector<std::pair<std::string, RMatrix>> seeds{{"identity", RMatrix::Identity(p, p)}};
  for (std::size_t k = 0; k < extra_seeds.size(); ++k) {
    detail::require(extra_seeds[k].rows() == p && extra_seeds[k].cols() == p, "sep_plus_optimize: seed has wrong shape");
    seeds.emplace_back("user-" + std::to_string(k), extra_seeds[k]);
  }
  if (auto r = exact_log2(p); r && p > 1) seeds.emplace_back("walsh-hadamard", walsh_hadamard(*r).matrix());
  if (auto m = inverse_generator_seed(gens)) seeds.emplace_back("inverse-generator", *m);

  auto flat_objective = [&](const RVector& x) {
    return sep_plus_objective(Eigen::Map<const RMatrix>(x.data(), p, p), oracle, alpha);
  };

  // Each evaluation solves p inner problems; keep the outer search modest.
  SearchOptions outer = opt;
  outer.random_starts = std::min(opt.random_starts, 2);
  outer.max_evaluations = std::min(opt.max_evaluations, 1500);

  std::vector<RVector> starts;
  for (const auto& s : seeds) {
    RMatrix normalized = s.second;
    for (int j = 0; j < p; ++j) normalized.col(j).normalize();  // cost is invariant under column scaling
    starts.push_back(Eigen::Map<const RVector>(normalized.data(), p * p));
  }
  for (int s = 0; s < outer.random_starts; ++s) {
    RVector x(p * p);
    for (int i = 0; i < p * p; ++i) x(i) = counter_normal(opt.seed ^ 0x9e3779b9ULL, static_cast<std::uint64_t>(s) * 1024 + i);
    starts.push_back(x);
  }

  std::string best_label;
  RMatrix best_a;
  double best_value = kInf;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    double v = sep_plus_objective(seeds[i].second, oracle, alpha);
    if (v < best_value) {
      best_value = v;
      best_a = seeds[i].second;
      best_label = seeds[i].first;
    }
  }
  MultiStartResult r = multistart_minimize(flat_objective, starts, outer);
  if (r.best_start >= 0) {
    RMatrix a = Eigen::Map<const RMatrix>(r.x.data(), p, p);
    double v = sep_plus_objective(a, oracle, alpha);
    if (v < best_value * (1.0 - 1e-12)) {
      best_value = v;
      best_a = a;
      best_label = r.best_start < static_cast<int>(seeds.size()) ? seeds[r.best_start].first + "+search" : "search";
    }
  }
  if (!std::isfinite(best_value)) throw NumericalError("sep_plus_optimize: no feasible reparametrization found");

  SepPlusResult out;
  out.reparam = ReparamMatrix(best_a);
  out.estimate = make_estimate(budget.paradigm, Strategy::SEP_PLUS, best_value, alpha + 1, BoundStatus::upper_bound,
                               "reparametrization search (" + best_label + ")");
  out.best_seed = best_label;
  return out;
}

/// Default oracle choice: nuisance-aware.
inline SepPlusResult sep_plus_optimize(const GeneratorSet& gens, const ResourceBudget& budget, const SearchOptions& opt = {},
                                       const std::vector<RMatrix>& extra_seeds = {}) {
  return sep_plus_optimize(gens, budget, nuisance_variance_oracle(gens, budget.paradigm, opt), opt, extra_seeds);
}

// ---------------------------------------------------------------------------
// Two-parameter skewed model: orthogonal vs general reparametrization

/// General-A SEP+ constant (equal to the joint constant): 2/(a-b)^2 + 2/(a+b)^2.
inline double skewed_pair_general_constant(double alpha, double beta) {
  detail::require(alpha > 0.0 && beta > 0.0 && beta < alpha, "skewed_pair_general_constant: need 0 < beta < alpha");
  return 2.0 / ((alpha - beta) * (alpha - beta)) + 2.0 / ((alpha + beta) * (alpha + beta));
}

/// Separate-strategy CR constant restricted to rotations by phi:
/// (sum_i sqrt(min_probe o_i^T F^-1 o_i))^2, o_i the rows of O^-1.
inline double skewed_pair_rotation_cost(const GeneratorSet& gens, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  RVector o1(2), o2(2);
  o1 << c, -s;
  o2 << s, c;
  const double m1 = min_spread_on_hyperplane(gens, o1), m2 = min_spread_on_hyperplane(gens, o2);
  const double root = 1.0 / m1 + 1.0 / m2;
  return root * root;
}

/// Minimum over rotation angle of the orthogonal-only SEP+ constant (times 1/k):
/// uniform grid on [0, pi/2) followed by golden-section refinement.
inline double orthogonal_restricted_sep_plus(double alpha, double beta, int angle_grid) {
  detail::require(angle_grid >= 4, "orthogonal_restricted_sep_plus: angle grid must have >= 4 points");
  const GeneratorSet gens = build_skewed_pair_generators(alpha, beta);
  const double period = kPi / 2.0;  // swapping rows / flipping signs maps phi -> phi + pi/2
  const double dphi = period / angle_grid;
  double best = kInf, best_phi = 0.0;
  for (int g = 0; g < angle_grid; ++g) {
    double phi = g * dphi;
    double v = skewed_pair_rotation_cost(gens, phi);
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  }
  auto [phi, v] = golden_section_minimize([&](double x) { return skewed_pair_rotation_cost(gens, x); }, best_phi - dphi,
                                          best_phi + dphi, 1e-14);
  (void)phi;
  return std::min(best, v);
}

}  // namespace metrocost
