#pragma once

// Probe states in reduced (excitation-number / mode-occupation) bases and
// exact unitary evolution under theta . Lambda.

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "metrocost/operators.hpp"

namespace metrocost {

class PureState {
 public:
  /// Normalizes when `normalize` is set; otherwise the norm must already be 1.
  explicit PureState(CVector amplitudes, bool normalize = false) : amp_(std::move(amplitudes)) {
    detail::require(amp_.size() >= 1, "PureState: empty amplitude vector");
    double n = amp_.norm();
    if (normalize) {
      detail::require(n > 0.0, "PureState: zero vector cannot be normalized");
      amp_ /= n;
    } else {
      detail::require(std::abs(n * n - 1.0) <= 1e-12, "PureState: amplitudes are not normalized");
    }
  }

  static PureState basis(Eigen::Index dim, Eigen::Index index) {
    detail::require(index >= 0 && index < dim, "PureState::basis: index out of range");
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
  }

  Eigen::Index dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }

 private:
  CVector amp_;
};

/// Coefficients c_m, m = 0..N, of a two-mode phase-sensing state
/// sum_m c_m |N-m>|m>; the phase generator is the number operator diag(0..N).
class PhaseStateCoefficients {
 public:
  explicit PhaseStateCoefficients(CVector c) : c_(std::move(c)) {
    detail::require(c_.size() >= 1, "PhaseStateCoefficients: need at least one coefficient");
    detail::require(std::abs(c_.squaredNorm() - 1.0) <= 1e-12, "PhaseStateCoefficients: not normalized");
  }

  int budget() const { return static_cast<int>(c_.size()) - 1; }
  const CVector& coefficients() const { return c_; }
  Complex operator[](int m) const { return c_(m); }

  PureState as_state() const { return PureState(c_); }

  /// diag(0, 1, ..., N).
  HermitianOperator number_operator() const {
    return HermitianOperator::diagonal(RVector::LinSpaced(c_.size(), 0.0, static_cast<double>(budget())));
  }

 private:
  CVector c_;
};

/// (|0> + |n>)/sqrt(2) in the excitation-number basis.
inline PhaseStateCoefficients noon_coefficients(int n) {
  detail::require(n >= 1, "noon_coefficients: n must be >= 1");
  CVector c = CVector::Zero(n + 1);
  c(0) = c(n) = 1.0 / std::sqrt(2.0);
  return PhaseStateCoefficients(std::move(c));
}

/// Sine-profile state optimal for a completely unknown phase:
/// c_m = sqrt(2/(N+2)) sin((m+1) pi / (N+2)).
inline PhaseStateCoefficients sin_coefficients(int budget) {
  detail::require(budget >= 1, "sin_coefficients: N must be >= 1");
  const double norm = std::sqrt(2.0 / (budget + 2.0));
  CVector c(budget + 1);
  for (int m = 0; m <= budget; ++m) c(m) = norm * std::sin((m + 1) * kPi / (budget + 2.0));
  // Summation rounding leaves |c|^2 off by ~1e-16; renormalize exactly.
  c /= c.norm();
  return PhaseStateCoefficients(std::move(c));
}

/// exp(i theta . Lambda) |psi>, via eigendecomposition of the combination.
inline PureState evolve(const GeneratorSet& gens, const RVector& theta, const PureState& psi) {
  detail::require(psi.dim() == gens.dim(), "evolve: state dimension differs from generator dimension");
  HermitianOperator h = combine(gens, theta);
  const Complex I(0.0, 1.0);
  if (h.is_diagonal()) {
    RVector d = h.diagonal_entries();
    CVector out(psi.dim());
    for (Eigen::Index s = 0; s < psi.dim(); ++s) out(s) = std::exp(I * d(s)) * psi.amplitudes()(s);
    return PureState(std::move(out), true);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.dense());
  const CMatrix& v = es.eigenvectors();
  CVector coeffs = v.adjoint() * psi.amplitudes();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::exp(I * es.eigenvalues()(k));
  return PureState(v * coeffs, true);
}

/// Free-atom joint probe at theta = 0: equal superposition of the p
/// single-site n00n pairs, one amplitude 1/sqrt(2p) per mode |n>_{i,+-}.
inline PureState superposed_noon_state(int p, int n) {
  detail::require(p >= 1 && n >= 1, "superposed_noon_state: p and n must be >= 1");
  return PureState(CVector::Constant(2 * p, Complex(1.0 / std::sqrt(2.0 * p), 0.0)));
}

/// (|hi> + |lo>)/sqrt(2) over extreme eigenvectors of `op`: the probe that
/// maximizes the single-parameter QFI. For diagonal operators this is a
/// two-component basis superposition.
inline PureState extreme_eigenvector_probe(const HermitianOperator& op) {
  const Eigen::Index d = op.dim();
  detail::require(d >= 2, "extreme_eigenvector_probe: dimension must be >= 2");
  if (op.is_diagonal()) {
    RVector diag = op.diagonal_entries();
    Eigen::Index hi = 0, lo = 0;
    diag.maxCoeff(&hi);
    diag.minCoeff(&lo);
    CVector v = CVector::Zero(d);
    v(hi) += 1.0;
    v(lo) += 1.0;
    return PureState(std::move(v), true);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(op.dense());
  CVector v = es.eigenvectors().col(0) + es.eigenvectors().col(d - 1);
  return PureState(std::move(v), true);
}

}  // namespace metrocost
