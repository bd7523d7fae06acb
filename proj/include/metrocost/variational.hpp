#pragma once

// Joint minimax constants: Dirichlet ground energy of the cross-polytope
// sum_i |mu_i| <= 1/2, the Airy lower bound, the inscribed-ball upper bound,
// and covariant phase-measurement costs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "metrocost/search.hpp"
#include "metrocost/special_functions.hpp"
#include "metrocost/states.hpp"

namespace metrocost {

// ---------------------------------------------------------------------------
// Cross-polytope Dirichlet problem

struct SimplexSpectrum {
  int p = 0;
  double h = 0.0;
  double E = 0.0;
  int iterations = 0;
  double residual = 0.0;
  long nodes = 0;  // interior unknowns
};

struct SimplexGroundState {
  SimplexSpectrum spectrum;
  RMatrix coordinates;  // p x nodes, mu at each interior node
  RVector eigenvector;  // unit 2-norm, positive
};

struct SimplexSolverOptions {
  int max_iterations = 500;        // inverse-iteration steps
  double tolerance = 1e-10;        // eigen-residual / E
  double cg_tolerance = 1e-12;     // relative residual of each inner solve
  int max_cg_iterations = 20000;
};

inline constexpr double kMaxSimplexGridNodes = 2e7;

inline int default_simplex_grid(int p) {
  switch (p) {
    case 1: return 256;
    case 2: return 128;
    case 3: return 96;
    default: return 48;
  }
}

namespace detail {

/// Interior nodes of the cross-polytope on the grid mu = k h, h = 1/(2m),
/// with 2p neighbour indices each (-1 for boundary/exterior nodes).
struct CrossPolytopeGrid {
  int p = 0;
  int m = 0;
  double h = 0.0;
  std::vector<std::int32_t> offsets;  // p ints per node
  std::vector<std::int32_t> neighbours;
  long size() const { return static_cast<long>(offsets.size()) / p; }
};

inline CrossPolytopeGrid build_cross_polytope_grid(int p, int m) {
  CrossPolytopeGrid g;
  g.p = p;
  g.m = m;
  g.h = 1.0 / (2.0 * m);
  const int side = 2 * m - 1;
  long box = 1;
  for (int i = 0; i < p; ++i) box *= side;
  std::vector<std::int32_t> index(static_cast<std::size_t>(box), -1);

  std::vector<int> k(p, -(m - 1));
  for (long lin = 0; lin < box; ++lin) {
    int l1 = 0;
    for (int v : k) l1 += std::abs(v);
    if (l1 < m) {
      index[static_cast<std::size_t>(lin)] = static_cast<std::int32_t>(g.offsets.size() / p);
      g.offsets.insert(g.offsets.end(), k.begin(), k.end());
    }
    for (int i = p - 1; i >= 0; --i) {  // last axis fastest, matching lin
      if (++k[i] <= m - 1) break;
      k[i] = -(m - 1);
    }
  }

  const long n = g.size();
  g.neighbours.assign(static_cast<std::size_t>(n) * 2 * p, -1);
  std::vector<long> stride(p, 1);
  for (int i = p - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;
  for (long node = 0; node < n; ++node) {
    long lin = 0;
    for (int i = 0; i < p; ++i) lin += (g.offsets[node * p + i] + m - 1) * stride[i];
    for (int i = 0; i < p; ++i) {
      const int ki = g.offsets[node * p + i];
      if (ki + 1 <= m - 1) g.neighbours[node * 2 * p + 2 * i] = index[lin + stride[i]];
      if (ki - 1 >= -(m - 1)) g.neighbours[node * 2 * p + 2 * i + 1] = index[lin - stride[i]];
    }
  }
  return g;
}

/// y = (-Laplacian) x with homogeneous Dirichlet data.
inline void apply_negative_laplacian(const CrossPolytopeGrid& g, const RVector& x, RVector& y) {
  const long n = g.size();
  const int nb = 2 * g.p;
  const double inv_h2 = 1.0 / (g.h * g.h);
  y.resize(n);
  for (long i = 0; i < n; ++i) {
    double acc = nb * x(i);
    const std::int32_t* nbr = &g.neighbours[static_cast<std::size_t>(i) * nb];
    for (int j = 0; j < nb; ++j)
      if (nbr[j] >= 0) acc -= x(nbr[j]);
    y(i) = acc * inv_h2;
  }
}

/// Conjugate gradients for the SPD grid Laplacian, warm-started from x.
inline int conjugate_gradient(const CrossPolytopeGrid& g, const RVector& b, RVector& x, double rel_tol, int max_iter) {
  RVector r(b.size()), ap(b.size());
  apply_negative_laplacian(g, x, ap);
  r = b - ap;
  RVector d = r;
  double rr = r.squaredNorm();
  const double target = rel_tol * rel_tol * b.squaredNorm();
  int it = 0;
  for (; it < max_iter && rr > target; ++it) {
    apply_negative_laplacian(g, d, ap);
    const double alpha = rr / d.dot(ap);
    x += alpha * d;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    d = r + (rr_new / rr) * d;
    rr = rr_new;
  }
  if (rr > target) throw ConvergenceError("simplex_ground_energy: inner CG solve did not converge", std::sqrt(rr));
  return it;
}

}  // namespace detail

/// Smallest Dirichlet eigenvalue of -Laplacian on sum_i |mu_i| <= 1/2 and its
/// eigenvector, by inverse power iteration with matrix-free CG solves.
/// `grid_points_per_axis` intervals span [-1/2, 1/2]; odd values are rounded up.
inline SimplexGroundState simplex_ground_state(int p, int grid_points_per_axis, const SimplexSolverOptions& opt = {}) {
  detail::require(p >= 1 && p <= 4, "simplex_ground_energy: p must be in {1,2,3,4}");
  detail::require(grid_points_per_axis - 1 >= 8, "simplex_ground_energy: grid too coarse (need >= 8 interior points per axis)");
  const int m2 = grid_points_per_axis + (grid_points_per_axis % 2);
  const int m = m2 / 2;
  if (std::pow(static_cast<double>(m2 - 1), p) > kMaxSimplexGridNodes)
    throw ResourceLimitError("simplex_ground_energy: grid exceeds 2e7 nodes");

  const detail::CrossPolytopeGrid g = detail::build_cross_polytope_grid(p, m);
  const long n = g.size();

  // Positive start: distance to the boundary in lattice units.
  RVector x(n);
  for (long i = 0; i < n; ++i) {
    int l1 = 0;
    for (int j = 0; j < p; ++j) l1 += std::abs(g.offsets[i * p + j]);
    x(i) = static_cast<double>(m - l1);
  }
  x.normalize();

  RVector ax(n), y = x;
  detail::apply_negative_laplacian(g, x, ax);
  double rho = x.dot(ax);
  double residual = (ax - rho * x).norm();
  int iter = 0;
  while (residual > opt.tolerance * rho) {
    if (iter >= opt.max_iterations)
      throw ConvergenceError("simplex_ground_energy: inverse iteration did not converge", residual);
    y = x / rho;
    detail::conjugate_gradient(g, x, y, opt.cg_tolerance, opt.max_cg_iterations);
    x = y / y.norm();
    detail::apply_negative_laplacian(g, x, ax);
    rho = x.dot(ax);
    residual = (ax - rho * x).norm();
    ++iter;
  }
  if (x.sum() < 0) x = -x;

  SimplexGroundState out;
  out.spectrum = {p, g.h, rho, iter, residual, n};
  out.coordinates.resize(p, n);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) out.coordinates(j, i) = g.offsets[i * p + j] * g.h;
  out.eigenvector = std::move(x);
  return out;
}

inline SimplexSpectrum simplex_ground_energy(int p, int grid_points_per_axis, const SimplexSolverOptions& opt = {}) {
  return simplex_ground_state(p, grid_points_per_axis, opt).spectrum;
}

/// Two-grid Richardson estimate (4 E_fine - E_coarse)/3 for the O(h^2) stencil.
inline double simplex_richardson(int p, int coarse_grid, const SimplexSolverOptions& opt = {}) {
  const double coarse = simplex_ground_energy(p, coarse_grid, opt).E;
  const double fine = simplex_ground_energy(p, 2 * (coarse_grid + coarse_grid % 2), opt).E;
  return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------
// Airy lower bound

struct AiryBoundResult {
  double a_prime_zero = 0.0;
  double I_norm = 0.0;
  double I_mean = 0.0;
  double I_kinetic = 0.0;
  double constant = 0.0;  // coefficient of p^3 / N^2
};

/// 4 I_kin I_mean^2 / I_norm^3 with the integrals of |Ai(a + mu)|^2, mu|Ai|^2 and
/// |Ai'|^2 over mu in [0, tail_cutoff], a the first zero of Ai'.
inline AiryBoundResult airy_lower_bound(double tail_cutoff = 30.0) {
  detail::require(tail_cutoff >= 10.0, "airy_lower_bound: tail cutoff must be >= 10");
  AiryBoundResult out;
  const double a = airy_ai_prime_first_zero();
  out.a_prime_zero = a;

  auto integrate = [&](auto f, const char* what) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, tail_cutoff, 20, 1e-14, &err);
    if (!std::isfinite(v) || err > 1e-11 * std::max(1.0, std::abs(v)))
      throw NumericalError(std::string("airy_lower_bound: quadrature for ") + what + " did not converge");
    return v;
  };
  out.I_norm = integrate([a](double mu) { double v = airy_ai(a + mu); return v * v; }, "norm");
  out.I_mean = integrate([a](double mu) { double v = airy_ai(a + mu); return mu * v * v; }, "mean");
  out.I_kinetic = integrate([a](double mu) { double v = airy_ai_prime(a + mu); return v * v; }, "kinetic");
  out.constant = 4.0 * out.I_kinetic * out.I_mean * out.I_mean / (out.I_norm * out.I_norm * out.I_norm);
  return out;
}

// ---------------------------------------------------------------------------
// Inscribed-ball upper bound

/// E = p (2 j_{p/2-1,1})^2 from the Dirichlet ground state of the largest ball
/// (radius 1/(2 sqrt p)) inside the cross-polytope. Valid for 1 <= p <= 64.
inline double ball_upper_bound(int p) {
  detail::require(p >= 1, "ball_upper_bound: p must be >= 1");
  if (p > kMaxBallDimension) throw ResourceLimitError("ball_upper_bound: p exceeds 64");
  const double j = bessel_j_first_zero(p / 2.0 - 1.0);
  return p * 4.0 * j * j;
}

// ---------------------------------------------------------------------------
// Covariant phase measurement

/// Mean of 4 sin^2(u/2) under p(u) = |sum_m c_m e^{imu}|^2/(2 pi): 2 - 2 Re sum_m conj(c_{m+1}) c_m.
inline double phase_cost_analytic(const PhaseStateCoefficients& coeffs) {
  const CVector& c = coeffs.coefficients();
  Complex overlap = 0.0;
  for (Eigen::Index m = 0; m + 1 < c.size(); ++m) overlap += std::conj(c(m + 1)) * c(m);
  return 2.0 - 2.0 * overlap.real();
}

inline constexpr int kDefaultPhaseGrid = 1 << 14;

/// Density of u = estimate - theta on a uniform grid of cell midpoints over [-pi, pi).
class PhaseMeasurementModel {
 public:
  explicit PhaseMeasurementModel(PhaseStateCoefficients coeffs, int grid_points = kDefaultPhaseGrid)
      : coeffs_(std::move(coeffs)) {
    detail::require(grid_points > 2 * coeffs_.budget() + 1,
                    "PhaseMeasurementModel: grid must exceed 2N+1 points to resolve the density");
    const CVector& c = coeffs_.coefficients();
    du_ = 2.0 * kPi / grid_points;
    pdf_.resize(grid_points);
    const Complex I(0.0, 1.0);
    for (int j = 0; j < grid_points; ++j) {
      const double u = -kPi + (j + 0.5) * du_;
      Complex amp = 0.0;
      for (Eigen::Index m = 0; m < c.size(); ++m) amp += c(m) * std::exp(I * (static_cast<double>(m) * u));
      pdf_(j) = std::norm(amp) / (2.0 * kPi);
    }
    const double mass = pdf_.sum() * du_;
    if (!std::isfinite(mass) || !(mass > 0.0) || pdf_.minCoeff() < 0.0)
      throw NumericalError("PhaseMeasurementModel: density cannot be normalized");
    if (std::abs(mass - 1.0) > 1e-8) throw NumericalError("PhaseMeasurementModel: density does not integrate to 1");
    pdf_ /= mass;
    cdf_.resize(grid_points + 1);
    cdf_(0) = 0.0;
    for (int j = 0; j < grid_points; ++j) cdf_(j + 1) = cdf_(j) + pdf_(j) * du_;
    cdf_ /= cdf_(grid_points);
  }

  const PhaseStateCoefficients& coefficients() const { return coeffs_; }
  int grid_points() const { return static_cast<int>(pdf_.size()); }
  double cell_width() const { return du_; }
  const RVector& pdf() const { return pdf_; }
  double cell_center(int j) const { return -kPi + (j + 0.5) * du_; }

  /// Inverse CDF of the piecewise-constant density.
  double sample(double uniform) const {
    const double* begin = cdf_.data();
    const double* end = begin + cdf_.size();
    const double* it = std::upper_bound(begin, end, uniform);
    long j = std::clamp<long>(static_cast<long>(it - begin) - 1, 0, grid_points() - 1);
    const double width = cdf_(j + 1) - cdf_(j);
    const double frac = width > 0.0 ? (uniform - cdf_(j)) / width : 0.5;
    return -kPi + (j + std::clamp(frac, 0.0, 1.0)) * du_;
  }

 private:
  PhaseStateCoefficients coeffs_;
  double du_ = 0.0;
  RVector pdf_;
  RVector cdf_;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  long samples = 0;
};

/// Empirical mean and standard error of 4 sin^2(u/2), drawn from a
/// mt19937_64 stream seeded with `seed`.
inline MonteCarloEstimate phase_cost_monte_carlo(const PhaseMeasurementModel& model, long samples, std::uint64_t seed) {
  detail::require(samples >= 1000, "phase_cost_monte_carlo: need at least 1000 samples");
  std::mt19937_64 gen(seed);
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double u = model.sample(static_cast<double>(gen() >> 11) * 0x1.0p-53);
    const double s = std::sin(0.5 * u);
    const double cost = 4.0 * s * s;
    const double delta = cost - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (cost - mean);
  }
  MonteCarloEstimate out;
  out.mean = mean;
  out.standard_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  out.samples = samples;
  return out;
}

}  // namespace metrocost
