#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <stdexcept>

#include "unmix/types.hpp"

namespace unmix {

/// Induced inf->inf operator norm: maximum absolute row sum.
/// Empty matrices (zero rows or columns) have norm 0.
template <typename Derived>
typename Derived::Scalar inf_op_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) return typename Derived::Scalar(0);
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Columns of `a` selected by `support`, in index order.
template <typename Scalar>
DenseMatrix<Scalar> restrict_columns(const DenseMatrix<Scalar>& a, const IndexSet& support) {
  if (support.ambient() != a.cols()) {
    throw std::invalid_argument("restrict_columns: support ambient dimension != cols");
  }
  DenseMatrix<Scalar> out(a.rows(), support.size());
  for (Index j = 0; j < support.size(); ++j) {
    out.col(j) = a.col(support[static_cast<std::size_t>(j)]);
  }
  return out;
}

/// (Id + A A^T / beta)^{-1} A. For infinite beta this is A itself.
/// The m-by-m system is symmetric positive definite for finite beta > 0.
template <typename Scalar>
DenseMatrix<Scalar> regularized_operator(const DenseMatrix<Scalar>& a,
                                         const BetaParam<Scalar>& beta) {
  if (!beta.finite()) return a;
  DenseMatrix<Scalar> s = a * a.transpose() / beta.value();
  s.diagonal().array() += Scalar(1);
  Eigen::LLT<DenseMatrix<Scalar>> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("regularized_operator: Cholesky factorization failed");
  }
  return llt.solve(a);
}

/// Single-penalty problem equivalent to the two-penalty functional:
/// minimizing 0.5*|b u - y|_2^2 + alpha*|u|_1 yields the u component of the
/// joint minimizer.
template <typename Scalar>
struct ReducedProblem {
  DenseMatrix<Scalar> b;  ///< (Id + A A^T / beta)^{-1/2} A
  DenseVector<Scalar> y;  ///< (Id + A A^T / beta)^{-1/2} y
};

/// Builds the reduced single-penalty problem via a symmetric
/// eigendecomposition of Id + A A^T / beta. Eigenvalues are clamped below at
/// 1e-15 before forming the inverse square root.
template <typename Scalar>
ReducedProblem<Scalar> reduced_problem(const DenseMatrix<Scalar>& a,
                                       const DenseVector<Scalar>& y,
                                       const BetaParam<Scalar>& beta) {
  if (y.size() != a.rows()) {
    throw std::invalid_argument("reduced_problem: data length != rows");
  }
  if (!beta.finite()) return {a, y};  // limiting case
  DenseMatrix<Scalar> s = a * a.transpose() / beta.value();
  s.diagonal().array() += Scalar(1);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(s);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("reduced_problem: eigendecomposition did not converge");
  }
  DenseVector<Scalar> inv_sqrt =
      eig.eigenvalues().cwiseMax(Scalar(1e-15)).cwiseSqrt().cwiseInverse();
  DenseMatrix<Scalar> root = eig.eigenvectors() * inv_sqrt.asDiagonal() *
                             eig.eigenvectors().transpose();
  return {root * a, root * y};
}

namespace detail {

/// Condition gate for an LDLT-factored symmetric PSD system. Combines the
/// 1-norm rcond estimate with the pivot ratio; the latter catches exact rank
/// deficiency, where Eigen's solve silently falls back to a pseudo-inverse.
template <typename Scalar>
bool gram_factorization_acceptable(const Eigen::LDLT<DenseMatrix<Scalar>>& ldlt,
                                   Scalar cond_limit) {
  if (ldlt.info() != Eigen::Success) return false;
  const Scalar pivot_min = ldlt.vectorD().minCoeff();
  const Scalar pivot_max = ldlt.vectorD().maxCoeff();
  if (!(pivot_min > Scalar(0)) || !(pivot_max < std::numeric_limits<Scalar>::infinity())) {
    return false;
  }
  if (pivot_max / pivot_min > cond_limit) return false;
  const Scalar rcond = ldlt.rcond();
  return rcond > Scalar(0) && Scalar(1) / rcond <= cond_limit;
}

/// Factorization of the restricted Gram system A_{beta,I}^* A_I, with a
/// condition-number gate. The matrix equals A_I^T (Id + A A^T/beta)^{-1} A_I,
/// hence is symmetric positive semidefinite.
template <typename Scalar>
class GramSolver {
 public:
  GramSolver(const DenseMatrix<Scalar>& gram, Scalar cond_limit) {
    DenseMatrix<Scalar> sym = (gram + gram.transpose()) / Scalar(2);
    ldlt_.compute(sym);
    singular_ = !gram_factorization_acceptable(ldlt_, cond_limit);
  }

  bool singular() const { return singular_; }

  DenseMatrix<Scalar> solve(const DenseMatrix<Scalar>& rhs) const {
    return ldlt_.solve(rhs);
  }

 private:
  Eigen::LDLT<DenseMatrix<Scalar>> ldlt_;
  bool singular_ = false;
};

}  // namespace detail

inline constexpr double kGramConditionLimit = 1e12;

/// Applies (A_{beta,I}^* A_I)^{-1} to `rhs` by factorize-then-solve.
/// Throws SingularGramError when the estimated condition number exceeds
/// `cond_limit`; callers treat the subset as failing the recovery condition.
template <typename Scalar>
DenseMatrix<Scalar> gram_inverse_apply(const DenseMatrix<Scalar>& a,
                                       const BetaParam<Scalar>& beta,
                                       const IndexSet& support,
                                       const DenseMatrix<Scalar>& rhs,
                                       Scalar cond_limit = Scalar(kGramConditionLimit)) {
  if (support.empty()) {
    throw std::invalid_argument("gram_inverse_apply: empty support");
  }
  if (rhs.rows() != support.size()) {
    throw std::invalid_argument("gram_inverse_apply: rhs rows != support size");
  }
  const DenseMatrix<Scalar> a_beta_i = restrict_columns(regularized_operator(a, beta), support);
  const DenseMatrix<Scalar> a_i = restrict_columns(a, support);
  detail::GramSolver<Scalar> solver(a_beta_i.transpose() * a_i, cond_limit);
  if (solver.singular()) {
    throw SingularGramError("gram_inverse_apply: restricted Gram system is singular");
  }
  return solver.solve(rhs);
}

}  // namespace unmix
