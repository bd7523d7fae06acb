#pragma once

// Searches over parameter-space directions and orthogonal rotations.
// Every reported value is the objective evaluated at a concrete candidate,
// so maxima are certified lower bounds on the true supremum.

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "metrocost/operators.hpp"
#include "metrocost/search.hpp"

namespace metrocost {

struct SphereMaximum {
  RVector direction;  // unit vector
  double value = 0.0;
};

namespace detail {

inline RVector normalized_or(const RVector& x, const RVector& fallback) {
  double n = x.norm();
  return n > 0.0 && std::isfinite(n) ? RVector(x / n) : fallback;
}

inline std::vector<RVector> sphere_starts(int p, const SearchOptions& opt) {
  std::vector<RVector> starts;
  for (int i = 0; i < p; ++i) starts.push_back(RVector::Unit(p, i));
  starts.push_back(RVector::Constant(p, 1.0 / std::sqrt(static_cast<double>(p))));
  for (int s = 0; s < opt.random_starts; ++s) {
    RVector x(p);
    for (int i = 0; i < p; ++i) x(i) = counter_normal(opt.seed, static_cast<std::uint64_t>(s) * 64 + i);
    starts.push_back(normalized_or(x, RVector::Unit(p, 0)));
  }
  return starts;
}

/// Packs a p x p skew-symmetric matrix into its strictly-upper entries.
inline RMatrix skew_from_params(const RVector& s, int p) {
  RMatrix k = RMatrix::Zero(p, p);
  int idx = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      k(i, j) = s(idx);
      k(j, i) = -s(idx);
      ++idx;
    }
  return k;
}

inline RMatrix orthogonal_from_params(const RVector& s, int p) {
  RMatrix k = skew_from_params(s, p);
  return k.exp();
}

}  // namespace detail

/// Maximum of spread(a . Lambda) over unit vectors a. Seeds: coordinate
/// vectors, the uniform vector, and seeded random directions.
inline SphereMaximum max_spread_over_sphere(const GeneratorSet& gens, const SearchOptions& opt = {}) {
  const int p = gens.size();
  const RVector fallback = RVector::Unit(p, 0);
  auto objective = [&](const RVector& x) {
    double n = x.norm();
    if (!(n > 1e-12)) return kInf;
    return -gens.combination_spread(x / n);
  };
  MultiStartResult r = multistart_minimize(objective, detail::sphere_starts(p, opt), opt);
  SphereMaximum out;
  out.direction = detail::normalized_or(r.x, fallback);
  if (out.direction(0) < 0) out.direction = -out.direction;  // spread is even in a
  out.value = gens.combination_spread(out.direction);
  return out;
}

/// Minimum of spread(w . Lambda) over the hyperplane w . r = 1.
/// Equivalently 1/sqrt(sup_w (w.r)^2 / spread(w.Lambda)^2).
inline double min_spread_on_hyperplane(const GeneratorSet& gens, const RVector& r, const SearchOptions& opt = {}) {
  const int p = gens.size();
  detail::require(r.size() == p, "min_spread_on_hyperplane: direction has wrong length");
  const double rn2 = r.squaredNorm();
  detail::require(rn2 > 0.0, "min_spread_on_hyperplane: zero direction");
  const RVector base = r / rn2;
  if (p == 1) return gens.combination_spread(base);

  // Orthonormal basis of the complement of r.
  Eigen::JacobiSVD<RMatrix> svd(RMatrix(r.transpose()), Eigen::ComputeFullV);
  const RMatrix perp = svd.matrixV().rightCols(p - 1);

  auto along = [&](const RVector& z) { return gens.combination_spread(base + perp * z); };
  if (p == 2) {
    // Convex in the single coordinate t: bracket then golden-section.
    auto f = [&](double t) { return along(RVector::Constant(1, t)); };
    const double f0 = f(0.0);
    double hi = 1.0 / std::sqrt(rn2);
    int guard = 0;
    while ((f(hi) < f0 || f(-hi) < f0) && guard++ < 200) hi *= 2.0;
    auto [t, v] = golden_section_minimize(f, -hi, hi, 1e-15, 400);
    (void)t;
    return std::min(v, f0);
  }
  std::vector<RVector> starts{RVector::Zero(p - 1)};
  for (int s = 0; s < opt.random_starts / 2; ++s) {
    RVector z(p - 1);
    for (int i = 0; i < p - 1; ++i)
      z(i) = counter_normal(opt.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(s) * 64 + i) / std::sqrt(rn2);
    starts.push_back(z);
  }
  MultiStartResult best = multistart_minimize(along, starts, opt);
  return along(best.x);
}

struct OrthogonalBound {
  ReparamMatrix rotation = ReparamMatrix::identity(1);
  double value = 0.0;
  std::string best_candidate;         // "identity", "walsh-hadamard" or "search"
  int discarded_candidates = 0;
  std::vector<std::string> warnings;
};

/// sum_i 1/spread([O^T Lambda]_i)^2, or +inf when a rotated generator degenerates.
inline double orthogonal_bound_value(const GeneratorSet& gens, const RMatrix& o) {
  double sum = 0.0;
  for (int i = 0; i < gens.size(); ++i) {
    double s = gens.combination_spread(o.col(i));
    if (s < 1e-9) return kInf;
    sum += 1.0 / (s * s);
  }
  return sum;
}

/// Maximizes sum_i 1/spread^2([O^T Lambda]_i) over orthogonal O.
/// Candidates: identity, Walsh-Hadamard when p = 2^r, and multi-start
/// searches over O = exp(K), K skew-symmetric. Rotations that make some
/// generator degenerate are discarded with a warning.
inline OrthogonalBound optimize_orthogonal_bound(const GeneratorSet& gens, const SearchOptions& opt = {}) {
  const int p = gens.size();
  detail::require(p >= 2, "optimize_orthogonal_bound: needs p >= 2");
  OrthogonalBound out;
  out.value = -kInf;

  auto consider = [&](const RMatrix& o, const std::string& label) {
    double v = orthogonal_bound_value(gens, o);
    if (!std::isfinite(v)) {
      ++out.discarded_candidates;
      out.warnings.push_back("discarded " + label + " candidate: a rotated generator has spread < 1e-9");
      return;
    }
    if (v > out.value) {
      out.value = v;
      out.rotation = ReparamMatrix(o);
      out.best_candidate = label;
    }
  };

  consider(RMatrix::Identity(p, p), "identity");
  if (auto r = exact_log2(p)) consider(walsh_hadamard(*r).matrix(), "walsh-hadamard");

  const int nparams = p * (p - 1) / 2;
  auto objective = [&](const RVector& s) { return -orthogonal_bound_value(gens, detail::orthogonal_from_params(s, p)); };
  std::vector<RVector> starts{RVector::Zero(nparams)};
  for (int s = 0; s < opt.random_starts; ++s) {
    RVector x(nparams);
    for (int i = 0; i < nparams; ++i)
      x(i) = kPi * (2.0 * counter_uniform(opt.seed ^ 0x2545f4914f6cdd1dULL, static_cast<std::uint64_t>(s) * 256 + i) - 1.0);
    starts.push_back(x);
  }
  MultiStartResult r = multistart_minimize(objective, starts, opt);
  if (r.best_start >= 0) {
    // Exact re-evaluation; only replace the structured candidates on a real gain.
    RMatrix o = detail::orthogonal_from_params(r.x, p);
    double v = orthogonal_bound_value(gens, o);
    if (std::isfinite(v) && v > out.value * (1.0 + 1e-12)) {
      out.value = v;
      out.rotation = ReparamMatrix(o);
      out.best_candidate = "search";
    }
  }
  if (!std::isfinite(out.value)) throw NumericalError("optimize_orthogonal_bound: every candidate was degenerate");
  return out;
}

}  // namespace metrocost
