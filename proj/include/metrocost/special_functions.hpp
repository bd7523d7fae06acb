#pragma once

// Airy and Bessel functions of the first kind, with the zeros needed by the
// minimax bounds.

#include <cmath>
#include <functional>
#include <utility>

#include "metrocost/core.hpp"

namespace metrocost {

struct AiryValue {
  double ai = 0.0;
  double ai_prime = 0.0;
};

namespace detail {

inline constexpr double kAiryPositiveSwitch = 5.0;
inline constexpr double kAiryNegativeSwitch = -8.0;

inline AiryValue airy_series(double x) {
  // Ai = c1 f - c2 g with the two Maclaurin solutions f, g.
  const long double c1 = 0.355028053887817239260L;
  const long double c2 = 0.258819403792806798405L;
  const long double xl = x, x3 = xl * xl * xl;
  long double tf = 1.0L, tg = xl, tfp = xl * xl / 2.0L, tgp = 1.0L;
  long double f = tf, g = tg, fp = tfp, gp = tgp;
  for (int k = 0; k < 200; ++k) {
    const long double kk = k;
    tf *= x3 / ((3 * kk + 2) * (3 * kk + 3));
    tg *= x3 / ((3 * kk + 3) * (3 * kk + 4));
    tfp *= x3 / ((3 * kk + 3) * (3 * kk + 5));
    tgp *= x3 / ((3 * kk + 1) * (3 * kk + 3));
    f += tf;
    g += tg;
    fp += tfp;
    gp += tgp;
    if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-22L * (std::abs(f) + std::abs(g) + 1.0L)) break;
  }
  return {static_cast<double>(c1 * f - c2 * g), static_cast<double>(c1 * fp - c2 * gp)};
}

/// u_k and v_k of the Airy asymptotic expansions, truncated at the smallest term.
struct AiryAsymptoticSums {
  double p = 0.0, q = 0.0;  // even / odd parts with alternating signs
  double r = 0.0, s = 0.0;
  double all_u = 0.0, all_v = 0.0;  // sum (-1)^k u_k / z^k, sum (-1)^k v_k / z^k
};

inline AiryAsymptoticSums airy_asymptotic_sums(double zeta) {
  AiryAsymptoticSums out;
  double u = 1.0, pw = 1.0, last = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
      pw /= zeta;
    }
    const double v = k == 0 ? 1.0 : -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    const double tu = u * pw, tv = v * pw;
    const double mag = std::abs(tu) + std::abs(tv);
    if (mag > last) break;
    last = mag;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out.all_u += sign * tu;
    out.all_v += sign * tv;
    const double pair_sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      out.p += pair_sign * tu;
      out.r += pair_sign * tv;
    } else {
      out.q += pair_sign * tu;
      out.s += pair_sign * tv;
    }
    if (mag < 1e-17) break;
  }
  return out;
}

inline AiryValue airy_asymptotic(double x) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  if (x > 0.0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const auto s = airy_asymptotic_sums(zeta);
    const double e = std::exp(-zeta), q = std::pow(x, 0.25);
    return {0.5 * inv_sqrt_pi * e / q * s.all_u, -0.5 * inv_sqrt_pi * e * q * s.all_v};
  }
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const auto s = airy_asymptotic_sums(zeta);
  const double ph = zeta + kPi / 4.0, q = std::pow(z, 0.25);
  return {inv_sqrt_pi / q * (std::sin(ph) * s.p - std::cos(ph) * s.q),
          -inv_sqrt_pi * q * (std::cos(ph) * s.r + std::sin(ph) * s.s)};
}

}  // namespace detail

/// Ai(x) and Ai'(x): Maclaurin series on [-8, 5], asymptotic expansions outside.
inline AiryValue airy(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("airy: argument must be finite");
  const bool series = x >= detail::kAiryNegativeSwitch && x <= detail::kAiryPositiveSwitch;
  return series ? detail::airy_series(x) : detail::airy_asymptotic(x);
}

inline double airy_ai(double x) { return airy(x).ai; }
inline double airy_ai_prime(double x) { return airy(x).ai_prime; }

/// Bisection on a sign-changing bracket [a, b].
inline double bisect_root(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw NumericalError("bisect_root: interval does not bracket a root");
  for (int it = 0; it < 400 && (b - a) > tol * std::max(1.0, std::abs(a)); ++it) {
    double m = 0.5 * (a + b), fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// First sign change of f on a uniform scan of [lo, hi], refined by bisection.
inline double first_root_on_grid(const std::function<double(double)>& f, double lo, double hi, int cells) {
  const double dx = (hi - lo) / cells;
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= cells; ++i) {
    double x1 = lo + i * dx, f1 = f(x1);
    if (f0 == 0.0) return x0;
    if ((f0 > 0.0) != (f1 > 0.0)) return bisect_root(f, x0, x1);
    x0 = x1;
    f0 = f1;
  }
  throw NumericalError("first_root_on_grid: no sign change found");
}

/// First (least negative) zero of Ai', about -1.0188.
inline double airy_ai_prime_first_zero() {
  // Scan downward from 0, where Ai' < 0.
  return -first_root_on_grid([](double t) { return airy_ai_prime(-t); }, 0.0, 3.0, 60);
}

inline constexpr int kMaxBesselOrderTwice = 62;  // nu <= 31
inline constexpr int kMaxBallDimension = kMaxBesselOrderTwice + 2;

/// J_nu(x) for real nu > -1 and x >= 0 from the ascending series in extended
/// precision. Absolute error below 1e-9 for x <= nu + 3 + 2|nu|^(1/3); cancellation
/// degrades it well beyond that.
inline double bessel_j(double nu, double x) {
  detail::require(nu > -1.0, "bessel_j: order must be > -1");
  detail::require(x >= 0.0 && std::isfinite(x), "bessel_j: argument must be finite and >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const long double half = static_cast<long double>(x) / 2.0L;
  const long double q = -half * half;
  long double term = std::exp(static_cast<long double>(nu) * std::log(half) - std::lgamma(static_cast<long double>(nu) + 1.0L));
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (static_cast<long double>(k) + nu));
    sum += term;
    if (std::abs(term) < 1e-21L * std::abs(sum) && static_cast<long double>(k) > half) return static_cast<double>(sum);
  }
  throw NumericalError("bessel_j: series did not converge");
}

/// First positive zero j_{nu,1}, bracketed on [max(nu, 1e-3), nu + 3 + 2|nu|^(1/3)].
inline double bessel_j_first_zero(double nu) {
  detail::require(nu > -1.0, "bessel_j_first_zero: order must be > -1");
  if (2.0 * nu > kMaxBesselOrderTwice) throw ResourceLimitError("bessel_j_first_zero: order exceeds the series cap");
  const double lo = std::max(nu, 1e-3);
  const double hi = nu + 3.0 + 2.0 * std::cbrt(std::abs(nu));
  return first_root_on_grid([nu](double x) { return bessel_j(nu, x); }, lo, hi, 400);
}

}  // namespace metrocost
