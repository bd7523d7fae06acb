#pragma once

// Derivative-free local search and a deterministic multi-start driver.
// Used for the sphere / orthogonal-group / reparametrization searches, which
// are small (a few to a few dozen parameters), nonsmooth and nonconvex.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "metrocost/core.hpp"

namespace metrocost {

struct SearchOptions {
  std::uint64_t seed = 20220401;
  int random_starts = 8;
  int max_evaluations = 4000;  // per local search
  double ftol = 1e-13;
  double initial_step = 0.25;
  int threads = 1;
};

/// Counter-based generator: value depends only on (seed, counter), so streams
/// split across threads reproduce the serial result.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0,1) from the top 53 bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counter draws.
inline double counter_normal(std::uint64_t seed, std::uint64_t counter) {
  double u1 = counter_uniform(seed, 2 * counter);
  double u2 = counter_uniform(seed, 2 * counter + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

struct LocalResult {
  RVector x;
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

/// Nelder-Mead simplex minimization. Non-finite objective values are treated
/// as +inf, so infeasible points are simply never accepted.
inline LocalResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                               double step, int max_evaluations, double ftol) {
  const Eigen::Index n = x0.size();
  LocalResult out;
  auto eval = [&](const RVector& x) {
    ++out.evaluations;
    double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  if (n == 0) {
    out.x = x0;
    out.value = eval(x0);
    return out;
  }

  std::vector<RVector> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts[i + 1](i) += step;
    vals[i + 1] = eval(pts[i + 1]);
  }

  std::vector<int> order(n + 1);
  while (out.evaluations < max_evaluations) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front(), worst = order.back(), second = order[n - 1];

    double spread = vals[worst] - vals[best];
    if (std::isfinite(vals[worst]) && std::abs(spread) <= ftol * (std::abs(vals[best]) + 1e-30) + 1e-300) {
      double diam = 0.0;
      for (int i = 0; i <= n; ++i) diam = std::max(diam, (pts[i] - pts[best]).lpNorm<Eigen::Infinity>());
      if (diam < 1e-10) break;
    }

    RVector centroid = RVector::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    RVector xr = centroid + (centroid - pts[worst]);
    double fr = eval(xr);
    if (fr < vals[best]) {
      RVector xe = centroid + 2.0 * (centroid - pts[worst]);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      bool outside = fr < vals[worst];
      RVector xc = outside ? RVector(centroid + 0.5 * (xr - centroid))
                           : RVector(centroid + 0.5 * (pts[worst] - centroid));
      double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }

  int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.x = pts[best];
  out.value = vals[best];
  return out;
}

/// Nelder-Mead restarted from its own optimum until it stops improving;
/// plain NM stalls on the kinked objectives used here.
inline LocalResult restarted_nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                                         const SearchOptions& opt) {
  LocalResult best;
  best.x = x0;
  RVector start = x0;
  double step = opt.initial_step;
  int used = 0;
  for (int round = 0; round < 6 && used < opt.max_evaluations; ++round) {
    LocalResult r = nelder_mead(f, start, step, opt.max_evaluations - used, opt.ftol);
    used += r.evaluations;
    bool improved = r.value < best.value - 1e-14 * std::abs(best.value);
    if (r.value < best.value) {
      best.x = r.x;
      best.value = r.value;
    }
    if (round > 0 && !improved) break;
    start = best.x;
    step *= 0.5;
  }
  best.evaluations = used;
  return best;
}

struct MultiStartResult {
  RVector x;
  double value = std::numeric_limits<double>::infinity();
  int best_start = -1;
};

/// Runs restarted Nelder-Mead from every start and keeps the lowest value;
/// ties go to the lowest start index, so the answer does not depend on threads.
inline MultiStartResult multistart_minimize(const std::function<double(const RVector&)>& f,
                                            const std::vector<RVector>& starts, const SearchOptions& opt) {
  std::vector<LocalResult> results(starts.size());
  auto run_range = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < starts.size(); i += stride) results[i] = restarted_nelder_mead(f, starts[i], opt);
  };
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(starts.size())));
  if (threads == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(run_range, static_cast<std::size_t>(t), threads);
    for (auto& th : pool) th.join();
  }

  MultiStartResult best;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].value < best.value) {
      best.value = results[i].value;
      best.x = results[i].x;
      best.best_start = static_cast<int>(i);
    }
  }
  if (best.best_start < 0 && !starts.empty()) best.x = starts.front();
  return best;
}

/// Golden-section minimization of a unimodal function on [a, b].
inline std::pair<double, double> golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                                         double tol = 1e-13, int max_iter = 300) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace metrocost
