#pragma once

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <vector>

#include "unmix/linalg.hpp"
#include "unmix/types.hpp"

namespace unmix {

template <typename Scalar>
Scalar soft_threshold(Scalar x, Scalar tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return Scalar(0);
}

/// Componentwise soft thresholding, expression-friendly.
template <typename Derived>
auto soft_threshold(const Eigen::ArrayBase<Derived>& x, typename Derived::Scalar tau) {
  return x.sign() * (x.abs() - tau).max(typename Derived::Scalar(0));
}

/// Power-iteration estimate of |B|_2^2, the Lipschitz constant of the
/// least-squares gradient. Deterministic start vector.
template <typename Scalar>
Scalar spectral_norm_sq_estimate(const DenseMatrix<Scalar>& b, int iters = 100) {
  const Index n = b.cols();
  if (b.rows() == 0 || n == 0) return Scalar(0);
  DenseVector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = Scalar(1) + Scalar(i) / Scalar(2 * n);  // breaks symmetry of structured inputs
  }
  v /= v.norm();
  DenseVector<Scalar> w(n);
  for (int it = 0; it < iters; ++it) {
    w.noalias() = b.transpose() * (b * v);
    const Scalar norm = w.norm();
    if (!(norm > Scalar(0))) return Scalar(0);
    v = w / norm;
  }
  return (b * v).squaredNorm();
}

namespace detail {

/// Residual of the l1 stationarity condition B^T(Bu - y) in -alpha*sgn(u),
/// given the gradient g = B^T(Bu - y).
template <typename Scalar>
Scalar l1_stationarity_residual(const DenseVector<Scalar>& g, const DenseVector<Scalar>& u,
                                Scalar alpha) {
  Scalar res = 0;
  for (Index i = 0; i < u.size(); ++i) {
    if (u(i) != Scalar(0)) {
      res = std::max(res, std::abs(g(i) + (u(i) > Scalar(0) ? alpha : -alpha)));
    } else {
      res = std::max(res, std::max(std::abs(g(i)) - alpha, Scalar(0)));
    }
  }
  return res;
}

template <typename Scalar>
Scalar ista_step_size(Scalar lipschitz) {
  return lipschitz > Scalar(0) ? Scalar(0.95) / lipschitz : Scalar(1);
}

}  // namespace detail

/// Zero iff u minimizes 0.5*|Bu - y|_2^2 + alpha*|u|_1.
template <typename Scalar>
Scalar optimality_residual(const DenseMatrix<Scalar>& b, const DenseVector<Scalar>& y,
                           Scalar alpha, const DenseVector<Scalar>& u) {
  const DenseVector<Scalar> g = b.transpose() * (b * u - y);
  return detail::l1_stationarity_residual(g, u, alpha);
}

template <typename Scalar>
struct PenaltyParams {
  PenaltyParams(Scalar alpha_in, BetaParam<Scalar> beta_in)
      : alpha(alpha_in), beta(beta_in) {
    if (!(alpha > Scalar(0))) throw std::invalid_argument("PenaltyParams: alpha must be positive");
  }
  Scalar alpha;
  BetaParam<Scalar> beta;
};

template <typename Scalar>
struct SolveResult {
  DenseVector<Scalar> u;
  DenseVector<Scalar> v;
  Index iterations = 0;  ///< thresholding steps; outer sweeps for the alternating scheme
  std::vector<Scalar> objective_trace;
  Scalar optimality_residual = std::numeric_limits<Scalar>::infinity();
};

/// Iterative soft thresholding for 0.5*|Bu - y|_2^2 + alpha*|u|_1 from u = 0.
/// Stops when the stationarity residual drops to `tol` or after `max_iters`
/// thresholding steps. objective_trace holds the objective at every iterate.
template <typename Scalar>
SolveResult<Scalar> ista_l1(const DenseMatrix<Scalar>& b, const DenseVector<Scalar>& y,
                            Scalar alpha, Index max_iters, Scalar tol) {
  if (y.size() != b.rows()) throw std::invalid_argument("ista_l1: data length != rows");
  if (!(alpha > Scalar(0))) throw std::invalid_argument("ista_l1: alpha must be positive");
  const Index n = b.cols();
  const Scalar step = detail::ista_step_size(spectral_norm_sq_estimate(b));

  SolveResult<Scalar> res;
  res.u = DenseVector<Scalar>::Zero(n);
  res.v = DenseVector<Scalar>::Zero(n);
  res.objective_trace.reserve(static_cast<std::size_t>(std::min<Index>(max_iters, 4096)) + 1);

  DenseVector<Scalar> r(b.rows()), g(n);
  for (Index it = 0;; ++it) {
    r.noalias() = b * res.u;
    r -= y;
    g.noalias() = b.transpose() * r;
    const Scalar objective = Scalar(0.5) * r.squaredNorm() + alpha * res.u.template lpNorm<1>();
    if (!std::isfinite(objective)) {
      throw NonFiniteIterateError("ista_l1: non-finite iterate");
    }
    res.objective_trace.push_back(objective);
    res.optimality_residual = detail::l1_stationarity_residual(g, res.u, alpha);
    res.iterations = it;
    if (res.optimality_residual <= tol || it >= max_iters) break;
    res.u = soft_threshold((res.u - step * g).array(), step * alpha).matrix();
  }
  return res;
}

/// Two-penalty objective 0.5*|A(u+v) - y|^2 + alpha*|u|_1 + beta/2*|v|^2.
/// For infinite beta the value is +inf unless v = 0.
template <typename Scalar>
Scalar multi_objective(const DenseMatrix<Scalar>& a, const DenseVector<Scalar>& y, Scalar alpha,
                       const BetaParam<Scalar>& beta, const DenseVector<Scalar>& u,
                       const DenseVector<Scalar>& v) {
  if (!beta.finite() && !v.isZero(Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  Scalar value = Scalar(0.5) * (a * (u + v) - y).squaredNorm() + alpha * u.template lpNorm<1>();
  if (beta.finite()) value += Scalar(0.5) * beta.value() * v.squaredNorm();
  return value;
}

/// Joint stationarity residual of the pair (u, v): the l1 condition on u and
/// the linear condition A^T(A(u+v) - y) + beta*v = 0, combined by max.
template <typename Scalar>
Scalar pair_optimality_residual(const DenseMatrix<Scalar>& a, const DenseVector<Scalar>& y,
                                Scalar alpha, const BetaParam<Scalar>& beta,
                                const DenseVector<Scalar>& u, const DenseVector<Scalar>& v) {
  const DenseVector<Scalar> g = a.transpose() * (a * (u + v) - y);
  const Scalar u_res = detail::l1_stationarity_residual(g, u, alpha);
  if (!beta.finite()) {
    return std::max(u_res, v.template lpNorm<Eigen::Infinity>());
  }
  const Scalar v_res = (g + beta.value() * v).template lpNorm<Eigen::Infinity>();
  return std::max(u_res, v_res);
}

/// Exact reduction: solve the equivalent single-penalty problem for u, then
/// recover v in closed form through the m-by-m system beta*Id + A A^T.
/// Infinite beta degenerates to plain ista_l1 with v = 0.
template <typename Scalar>
SolveResult<Scalar> solve_multi_reduced(const DenseMatrix<Scalar>& a,
                                        const DenseVector<Scalar>& y,
                                        const PenaltyParams<Scalar>& params, Index max_iters,
                                        Scalar tol) {
  if (!params.beta.finite()) {
    return ista_l1(a, y, params.alpha, max_iters, tol);
  }
  const ReducedProblem<Scalar> reduced = reduced_problem(a, y, params.beta);
  SolveResult<Scalar> res = ista_l1(reduced.b, reduced.y, params.alpha, max_iters, tol);

  DenseMatrix<Scalar> kernel = a * a.transpose();
  kernel.diagonal().array() += params.beta.value();
  Eigen::LLT<DenseMatrix<Scalar>> llt(kernel);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("solve_multi_reduced: Cholesky factorization failed");
  }
  res.v.noalias() = a.transpose() * llt.solve(y - a * res.u);
  return res;
}

/// Alternating scheme: per outer sweep, `inner_iters` thresholding steps on u
/// with v frozen, then the exact v update. objective_trace records the
/// two-penalty objective once per outer sweep (plus the starting value).
/// With tol = 0 the scheme runs the full iteration budget.
template <typename Scalar>
SolveResult<Scalar> solve_multi_alternating(const DenseMatrix<Scalar>& a,
                                            const DenseVector<Scalar>& y,
                                            const PenaltyParams<Scalar>& params,
                                            Index outer_iters, Index inner_iters,
                                            Scalar tol = Scalar(0)) {
  if (y.size() != a.rows()) throw std::invalid_argument("solve_multi_alternating: data length != rows");
  if (!params.beta.finite()) {
    return ista_l1(a, y, params.alpha, outer_iters * inner_iters, tol);
  }
  const Scalar alpha = params.alpha;
  const Scalar beta = params.beta.value();
  const Index n = a.cols();
  const Scalar step = detail::ista_step_size(spectral_norm_sq_estimate(a));

  DenseMatrix<Scalar> kernel = a * a.transpose();
  kernel.diagonal().array() += beta;
  const Eigen::LLT<DenseMatrix<Scalar>> llt(kernel);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("solve_multi_alternating: Cholesky factorization failed");
  }

  SolveResult<Scalar> res;
  res.u = DenseVector<Scalar>::Zero(n);
  res.v = DenseVector<Scalar>::Zero(n);
  res.objective_trace.push_back(Scalar(0.5) * y.squaredNorm());

  DenseVector<Scalar> data_u(y.size()), g(n), r(y.size());
  for (Index outer = 1; outer <= outer_iters; ++outer) {
    data_u.noalias() = y - a * res.v;
    for (Index inner = 0; inner < inner_iters; ++inner) {
      g.noalias() = a.transpose() * (a * res.u - data_u);
      res.u = soft_threshold((res.u - step * g).array(), step * alpha).matrix();
    }
    if (!res.u.allFinite()) throw NonFiniteIterateError("solve_multi_alternating: non-finite iterate");
    res.v.noalias() = a.transpose() * llt.solve(y - a * res.u);

    r.noalias() = a * (res.u + res.v);
    r -= y;
    const Scalar objective = Scalar(0.5) * r.squaredNorm() +
                             alpha * res.u.template lpNorm<1>() +
                             Scalar(0.5) * beta * res.v.squaredNorm();
    if (!std::isfinite(objective)) {
      throw NonFiniteIterateError("solve_multi_alternating: non-finite objective");
    }
    res.objective_trace.push_back(objective);

    g.noalias() = a.transpose() * r;
    const Scalar u_res = detail::l1_stationarity_residual(g, res.u, alpha);
    const Scalar v_res = (g + beta * res.v).template lpNorm<Eigen::Infinity>();
    res.optimality_residual = std::max(u_res, v_res);
    res.iterations = outer;
    if (res.optimality_residual <= tol) break;
  }
  return res;
}

/// Indices with |u_i| > zero_tol. Thresholding produces exact zeros, so any
/// tiny positive tolerance identifies the support of solver output.
template <typename Scalar>
IndexSet support(const DenseVector<Scalar>& u, Scalar zero_tol = Scalar(1e-10)) {
  std::vector<Index> idx;
  for (Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > zero_tol) idx.push_back(i);
  }
  return IndexSet(std::move(idx), u.size());
}

}  // namespace unmix
