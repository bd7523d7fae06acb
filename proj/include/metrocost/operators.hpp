#pragma once

// Generator algebra for unitary models U = exp(i theta . Lambda).

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "metrocost/core.hpp"

namespace metrocost {

inline constexpr int kMaxTensorQubits = 12;  // dense tensor constructions stay at dim <= 2^12

/// Finite-dimensional Hermitian matrix. Diagonal operators keep only their
/// diagonal, which is what makes the 2^p-dimensional fixed-atom model cheap.
class HermitianOperator {
 public:
  static HermitianOperator from_matrix(CMatrix m, double tol = 1e-12) {
    detail::require(m.rows() >= 1 && m.rows() == m.cols(), "HermitianOperator: matrix must be square and non-empty");
    double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
    detail::require(err <= tol, "HermitianOperator: matrix is not Hermitian (deviation " + std::to_string(err) + ")");
    HermitianOperator op;
    op.dense_ = 0.5 * (m + m.adjoint());
    return op;
  }

  static HermitianOperator diagonal(RVector d) {
    detail::require(d.size() >= 1, "HermitianOperator: empty diagonal");
    HermitianOperator op;
    op.diag_ = std::move(d);
    return op;
  }

  static HermitianOperator zero(Eigen::Index dim) { return diagonal(RVector::Zero(dim)); }

  Eigen::Index dim() const { return diag_ ? diag_->size() : dense_.rows(); }
  bool is_diagonal() const { return diag_.has_value(); }

  /// Diagonal entries; for dense storage these are just the matrix diagonal.
  RVector diagonal_entries() const { return diag_ ? *diag_ : RVector(dense_.diagonal().real()); }

  CMatrix dense() const {
    if (diag_) return diag_->cast<Complex>().asDiagonal();
    return dense_;
  }

  /// Ascending eigenvalues.
  RVector eigenvalues() const {
    if (diag_) {
      RVector e = *diag_;
      std::sort(e.data(), e.data() + e.size());
      return e;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(dense_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  CVector apply(const CVector& v) const {
    detail::require(v.size() == dim(), "HermitianOperator::apply: dimension mismatch");
    if (diag_) return diag_->cast<Complex>().cwiseProduct(v);
    return dense_ * v;
  }

  HermitianOperator scaled(double s) const {
    HermitianOperator out = *this;
    if (out.diag_) *out.diag_ *= s;
    else out.dense_ *= s;
    return out;
  }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    detail::require(a.dim() == b.dim(), "HermitianOperator: dimension mismatch in sum");
    if (a.diag_ && b.diag_) return diagonal(*a.diag_ + *b.diag_);
    HermitianOperator out;
    out.dense_ = a.dense() + b.dense();
    return out;
  }

  /// Hilbert-Schmidt inner product tr(A B), real for Hermitian A, B.
  friend double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
    detail::require(a.dim() == b.dim(), "hs_inner: dimension mismatch");
    if (a.diag_ && b.diag_) return a.diag_->dot(*b.diag_);
    return (a.dense().adjoint() * b.dense()).trace().real();
  }

  /// Max-norm of the commutator [A, B].
  friend double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
    detail::require(a.dim() == b.dim(), "commutator_norm: dimension mismatch");
    if (a.diag_ && b.diag_) return 0.0;
    CMatrix da = a.dense(), db = b.dense();
    return (da * db - db * da).cwiseAbs().maxCoeff();
  }

 private:
  HermitianOperator() = default;
  std::optional<RVector> diag_;
  CMatrix dense_;
};

/// Difference between the largest and smallest eigenvalue.
inline double spread(const HermitianOperator& op) {
  if (op.is_diagonal()) {
    RVector d = op.diagonal_entries();
    return d.maxCoeff() - d.minCoeff();
  }
  RVector e = op.eigenvalues();
  return e(e.size() - 1) - e(0);
}

/// The generator vector of a p-parameter unitary model.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<HermitianOperator> generators) : gens_(std::move(generators)) {
    detail::require(!gens_.empty(), "GeneratorSet: need at least one generator");
    const Eigen::Index d = gens_.front().dim();
    for (const auto& g : gens_) detail::require(g.dim() == d, "GeneratorSet: generators differ in dimension");

    const int p = size();
    RMatrix gram(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) gram(i, j) = gram(j, i) = hs_inner(gens_[i], gens_[j]);
    Eigen::JacobiSVD<RMatrix> svd(gram);
    const RVector sv = svd.singularValues();
    detail::require(sv(0) > 0.0 && sv(p - 1) > 1e-10 * sv(0), "GeneratorSet: generators are linearly dependent");

    if (all_diagonal()) {
      RMatrix table(d, p);
      for (int i = 0; i < p; ++i) table.col(i) = gens_[i].diagonal_entries();
      table_ = std::move(table);
    }

    commuting_ = true;
    for (int i = 0; i < p && commuting_; ++i)
      for (int j = i + 1; j < p && commuting_; ++j)
        if (commutator_norm(gens_[i], gens_[j]) > 1e-10) commuting_ = false;
  }

  int size() const { return static_cast<int>(gens_.size()); }
  Eigen::Index dim() const { return gens_.front().dim(); }
  bool commuting() const { return commuting_; }
  bool all_diagonal() const {
    return std::all_of(gens_.begin(), gens_.end(), [](const auto& g) { return g.is_diagonal(); });
  }
  const HermitianOperator& operator[](int i) const { return gens_.at(static_cast<std::size_t>(i)); }
  const std::vector<HermitianOperator>& generators() const { return gens_; }

  /// dim x p table of <s|Lambda_i|s> when every generator is diagonal.
  const std::optional<RMatrix>& eigenvalue_table() const { return table_; }

  /// spread(sum_i a_i Lambda_i) without materializing the operator when the set is diagonal.
  double combination_spread(const RVector& a) const;

  /// Gram matrix of Hilbert-Schmidt inner products.
  RMatrix gram() const {
    const int p = size();
    RMatrix g(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) g(i, j) = hs_inner(gens_[i], gens_[j]);
    return g;
  }

 private:
  std::vector<HermitianOperator> gens_;
  std::optional<RMatrix> table_;
  bool commuting_ = true;
};

/// Real invertible p x p reparametrization theta = A theta'.
class ReparamMatrix {
 public:
  explicit ReparamMatrix(RMatrix a) : a_(std::move(a)) {
    detail::require(a_.rows() >= 1 && a_.rows() == a_.cols(), "ReparamMatrix: must be square and non-empty");
    double scale = 1.0;
    for (Eigen::Index j = 0; j < a_.cols(); ++j) scale *= a_.col(j).norm();
    detail::require(scale > 0.0 && std::abs(a_.determinant()) / scale > 1e-12, "ReparamMatrix: matrix is singular");
    orthogonal_ = (a_.transpose() * a_ - RMatrix::Identity(a_.rows(), a_.cols())).cwiseAbs().maxCoeff() <= 1e-10;
  }

  static ReparamMatrix identity(int p) { return ReparamMatrix(RMatrix::Identity(p, p)); }

  int size() const { return static_cast<int>(a_.rows()); }
  const RMatrix& matrix() const { return a_; }
  bool orthogonal() const { return orthogonal_; }

 private:
  RMatrix a_;
  bool orthogonal_ = false;
};

/// Returns sum_i a_i Lambda_i.
inline HermitianOperator combine(const GeneratorSet& gens, const RVector& a) {
  detail::require(a.size() == gens.size(), "combine: coefficient vector length differs from the number of generators");
  HermitianOperator acc = gens[0].scaled(a(0));
  for (int i = 1; i < gens.size(); ++i) acc = acc + gens[i].scaled(a(i));
  return acc;
}

inline double GeneratorSet::combination_spread(const RVector& a) const {
  if (table_) {
    detail::require(a.size() == size(), "combination_spread: coefficient vector has wrong length");
    RVector v = *table_ * a;
    return v.maxCoeff() - v.minCoeff();
  }
  return spread(combine(*this, a));
}

/// p spin-1/2 atoms at fixed sites: Lambda_i = 1^(i-1) (x) sigma_z/2 (x) 1^(p-i).
inline GeneratorSet build_fixed_atom_generators(int p) {
  detail::require(p >= 1, "build_fixed_atom_generators: p must be >= 1");
  if (p > kMaxTensorQubits)
    throw ResourceLimitError("build_fixed_atom_generators: p=" + std::to_string(p) + " exceeds the cap of " +
                             std::to_string(kMaxTensorQubits));
  const Eigen::Index dim = Eigen::Index{1} << p;
  std::vector<HermitianOperator> gens;
  for (int i = 1; i <= p; ++i) {
    const Eigen::Index bit = Eigen::Index{1} << (p - i);  // first tensor factor is the most significant bit
    RVector d(dim);
    for (Eigen::Index s = 0; s < dim; ++s) d(s) = (s & bit) ? -0.5 : 0.5;
    gens.push_back(HermitianOperator::diagonal(std::move(d)));
  }
  return GeneratorSet(std::move(gens));
}

/// One atom free to sit at any of p sites: basis |i,+>, |i,->, i = 1..p.
inline GeneratorSet build_free_atom_generators(int p) {
  detail::require(p >= 1, "build_free_atom_generators: p must be >= 1");
  std::vector<HermitianOperator> gens;
  for (int i = 0; i < p; ++i) {
    RVector d = RVector::Zero(2 * p);
    d(2 * i) = 0.5;
    d(2 * i + 1) = -0.5;
    gens.push_back(HermitianOperator::diagonal(std::move(d)));
  }
  return GeneratorSet(std::move(gens));
}

/// sigma_k / 2 for each requested component, in x, y, z order.
inline GeneratorSet build_pauli_generators(const std::string& components) {
  detail::require(!components.empty(), "build_pauli_generators: empty component set");
  bool want[3] = {false, false, false};
  for (char c : components) {
    int k = c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : -1;
    detail::require(k >= 0, std::string("build_pauli_generators: unknown component '") + c + "'");
    detail::require(!want[k], std::string("build_pauli_generators: repeated component '") + c + "'");
    want[k] = true;
  }
  const Complex I(0.0, 1.0);
  std::vector<HermitianOperator> gens;
  if (want[0]) {
    CMatrix m(2, 2);
    m << 0.0, 0.5, 0.5, 0.0;
    gens.push_back(HermitianOperator::from_matrix(m));
  }
  if (want[1]) {
    CMatrix m(2, 2);
    m << 0.0, -0.5 * I, 0.5 * I, 0.0;
    gens.push_back(HermitianOperator::from_matrix(m));
  }
  if (want[2]) gens.push_back(HermitianOperator::diagonal((RVector(2) << 0.5, -0.5).finished()));
  return GeneratorSet(std::move(gens));
}

/// Two-parameter diagonal model diag(+a,-a,+b,-b)/2, diag(+b,-b,+a,-a)/2,
/// whose optimal separate strategy needs a non-orthogonal reparametrization.
inline GeneratorSet build_skewed_pair_generators(double alpha, double beta) {
  detail::require(alpha > 0.0 && beta > 0.0 && beta < alpha, "build_skewed_pair_generators: need 0 < beta < alpha");
  RVector d1(4), d2(4);
  d1 << alpha, -alpha, beta, -beta;
  d2 << beta, -beta, alpha, -alpha;
  return GeneratorSet({HermitianOperator::diagonal(0.5 * d1), HermitianOperator::diagonal(0.5 * d2)});
}

/// Normalized Walsh-Hadamard matrix of size 2^r.
inline ReparamMatrix walsh_hadamard(int r) {
  detail::require(r >= 0, "walsh_hadamard: r must be >= 0");
  if (r > kMaxTensorQubits) throw ResourceLimitError("walsh_hadamard: 2^r exceeds the cap");
  const Eigen::Index p = Eigen::Index{1} << r;
  RMatrix o(p, p);
  const double norm = 1.0 / std::sqrt(static_cast<double>(p));
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) o(i, j) = (std::popcount(static_cast<unsigned long long>(i & j)) % 2) ? -norm : norm;
  return ReparamMatrix(std::move(o));
}

/// log2(p) when p is a power of two.
inline std::optional<int> exact_log2(int p) {
  if (p < 1 || (p & (p - 1)) != 0) return std::nullopt;
  int r = 0;
  while ((1 << r) < p) ++r;
  return r;
}

/// Generator i of the result is sum_j A_ji Lambda_j (i.e. [A^T Lambda]_i).
inline GeneratorSet rotate_generators(const GeneratorSet& gens, const ReparamMatrix& a) {
  detail::require(a.size() == gens.size(), "rotate_generators: reparametrization size differs from the number of generators");
  std::vector<HermitianOperator> out;
  for (int i = 0; i < gens.size(); ++i) out.push_back(combine(gens, a.matrix().col(i)));
  return GeneratorSet(std::move(out));
}

/// Spreads of all generators of the set.
inline RVector spreads(const GeneratorSet& gens) {
  RVector s(gens.size());
  for (int i = 0; i < gens.size(); ++i) s(i) = spread(gens[i]);
  return s;
}

}  // namespace metrocost
