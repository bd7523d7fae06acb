#pragma once

// Quantum Fisher information of pure probes under U = exp(i n theta . Lambda).

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "metrocost/states.hpp"

namespace metrocost {

/// Symmetric positive-semidefinite p x p Fisher information matrix.
class QfiMatrix {
 public:
  explicit QfiMatrix(RMatrix f) : f_(std::move(f)) {
    detail::require(f_.rows() >= 1 && f_.rows() == f_.cols(), "QfiMatrix: must be square and non-empty");
    detail::require((f_ - f_.transpose()).cwiseAbs().maxCoeff() <= 1e-10, "QfiMatrix: not symmetric");
    f_ = 0.5 * (f_ + f_.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(f_, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    detail::require(es.eigenvalues().minCoeff() >= -1e-10 * std::max(top, 1.0), "QfiMatrix: not positive semidefinite");
  }

  int size() const { return static_cast<int>(f_.rows()); }
  const RMatrix& matrix() const { return f_; }
  double operator()(int i, int j) const { return f_(i, j); }

 private:
  RMatrix f_;
};

struct SaturabilityReport {
  int p = 0;
  RMatrix imag_parts;  // Im tr(rho L_i L_j), antisymmetric
  double imag_max = 0.0;
  bool saturable = true;
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Central finite-difference derivatives d/dtheta_i of exp(i n theta . Lambda)|psi>.
inline std::vector<CVector> finite_difference_derivatives(const GeneratorSet& gens, const RVector& theta0,
                                                          const PureState& psi, int n,
                                                          double h = kFiniteDifferenceStep) {
  std::vector<CVector> out;
  for (int i = 0; i < gens.size(); ++i) {
    RVector plus = theta0, minus = theta0;
    plus(i) += h;
    minus(i) -= h;
    CVector a = evolve(gens, n * plus, psi).amplitudes();
    CVector b = evolve(gens, n * minus, psi).amplitudes();
    out.push_back((a - b) / (2.0 * h));
  }
  return out;
}

/// F_ij = 4 Re(<d_i|d_j> - <d_i|psi><psi|d_j>) for a normalized state and its derivatives.
inline QfiMatrix qfi_from_derivatives(const CVector& psi, const std::vector<CVector>& derivs) {
  const int p = static_cast<int>(derivs.size());
  std::vector<CVector> perp;
  for (const auto& d : derivs) perp.push_back(d - psi * psi.dot(d));  // dot() conjugates the left operand
  RMatrix f(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) f(i, j) = f(j, i) = 4.0 * perp[i].dot(perp[j]).real();
  return QfiMatrix(std::move(f));
}

namespace detail {

inline void check_qfi_inputs(const GeneratorSet& gens, const RVector& theta0, const PureState& psi, int n) {
  require(theta0.size() == gens.size(), "qfi: theta0 has wrong length");
  require(psi.dim() == gens.dim(), "qfi: state dimension differs from generator dimension");
  require(n >= 1, "qfi: n must be >= 1");
  if (!gens.commuting() && theta0.cwiseAbs().maxCoeff() != 0.0)
    throw UnsupportedConfiguration("qfi: noncommuting generators are only supported at theta0 = 0");
}

/// Output state and its derivatives; analytic i n Lambda_i psi for commuting sets,
/// finite differences otherwise.
inline std::pair<CVector, std::vector<CVector>> output_and_derivatives(const GeneratorSet& gens, const RVector& theta0,
                                                                       const PureState& psi, int n) {
  CVector out = evolve(gens, n * theta0, psi).amplitudes();
  if (gens.commuting()) {
    const Complex I(0.0, 1.0);
    std::vector<CVector> d;
    for (int i = 0; i < gens.size(); ++i) d.push_back(I * static_cast<double>(n) * gens[i].apply(out));
    return {std::move(out), std::move(d)};
  }
  return {std::move(out), finite_difference_derivatives(gens, theta0, psi, n)};
}

}  // namespace detail

/// QFI for n parallel uses, modelled as the generator scaling Lambda -> n Lambda.
/// Commuting sets use 4 n^2 (Re<Lambda_i Lambda_j> - <Lambda_i><Lambda_j>) at any
/// theta0; noncommuting sets are evaluated at theta0 = 0 from finite-difference
/// derivatives of the evolved state.
inline QfiMatrix qfi_pure(const GeneratorSet& gens, const RVector& theta0, const PureState& psi, int n = 1) {
  detail::check_qfi_inputs(gens, theta0, psi, n);
  if (gens.commuting()) {
    const CVector out = evolve(gens, n * theta0, psi).amplitudes();
    const int p = gens.size();
    std::vector<CVector> applied;
    RVector mean(p);
    for (int i = 0; i < p; ++i) {
      applied.push_back(gens[i].apply(out));
      mean(i) = out.dot(applied.back()).real();
    }
    const double n2 = static_cast<double>(n) * n;
    RMatrix f(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) f(i, j) = f(j, i) = 4.0 * n2 * (applied[i].dot(applied[j]).real() - mean(i) * mean(j));
    return QfiMatrix(std::move(f));
  }
  auto [out, derivs] = detail::output_and_derivatives(gens, theta0, psi, n);
  return qfi_from_derivatives(out, derivs);
}

/// Im tr(rho L_i L_j) from the pure-state SLDs L = 2(|d psi><psi| + |psi><d psi|).
inline SaturabilityReport saturability(const GeneratorSet& gens, const RVector& theta0, const PureState& psi, int n = 1) {
  detail::check_qfi_inputs(gens, theta0, psi, n);
  auto [out, derivs] = detail::output_and_derivatives(gens, theta0, psi, n);
  const int p = gens.size();
  std::vector<CVector> l_psi;  // L_i |psi>
  for (const auto& d : derivs) l_psi.push_back(2.0 * (d + out * d.dot(out)));
  SaturabilityReport rep;
  rep.p = p;
  rep.imag_parts = RMatrix::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) rep.imag_parts(i, j) = l_psi[i].dot(l_psi[j]).imag();
  rep.imag_parts = 0.5 * (rep.imag_parts - rep.imag_parts.transpose());
  rep.imag_max = rep.imag_parts.cwiseAbs().maxCoeff();
  rep.saturable = rep.imag_max <= 1e-9;
  return rep;
}

/// Eigenvalues at or below this count as zero in the epsilon -> 0+ limits.
inline double singularity_tolerance(const RVector& eigenvalues) {
  return 1e-10 * std::max(1.0, eigenvalues.maxCoeff());
}

/// lim_{eps->0+} tr((F + eps)^-1); +inf when F is singular.
inline double trace_inverse(const QfiMatrix& f) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(f.matrix(), Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const double tol = singularity_tolerance(ev);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) <= tol) return kInf;
    sum += 1.0 / ev(k);
  }
  return sum;
}

/// lim_{eps->0+} v^T (F + eps)^-1 v. Finite exactly when v has no component
/// in the null space of F.
inline double directional_variance(const QfiMatrix& f, const RVector& v) {
  detail::require(v.size() == f.size(), "directional_variance: vector has wrong length");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(f.matrix());
  const RVector& ev = es.eigenvalues();
  const double tol = singularity_tolerance(ev);
  const RVector proj = es.eigenvectors().transpose() * v;
  const double scale = std::max(1.0, v.squaredNorm());
  double sum = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) <= tol) {
      if (proj(k) * proj(k) > 1e-20 * scale) return kInf;
      continue;
    }
    sum += proj(k) * proj(k) / ev(k);
  }
  return sum;
}

/// [F^-1]_ii with the same epsilon-limit rule (other parameters as nuisance).
inline double nuisance_variance(const QfiMatrix& f, int i) {
  detail::require(i >= 0 && i < f.size(), "nuisance_variance: index out of range");
  return directional_variance(f, RVector::Unit(f.size(), i));
}

}  // namespace metrocost
