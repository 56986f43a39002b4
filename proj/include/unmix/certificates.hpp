#pragma once

#include <Eigen/Cholesky>

#include <cstdint>
#include <limits>
#include <vector>

#include "unmix/linalg.hpp"
#include "unmix/types.hpp"

namespace unmix {

/// Infinity-norm quantities attached to one candidate support I for a fixed
/// (A, beta). With G = A_{beta,I}^* A_I:
///   condition_value   |A_{beta,J}^* A_I G^{-1}|_inf     (must be < 1)
///   inverse_gram_norm |G^{-1}|_inf                      (parameter sensitivity)
///   signal_gain       |G^{-1} A_{beta,I}^* A|_inf
///   noise_gain        |A_{beta,J}^* (A_I G^{-1} A_{beta,I}^* - Id) A|_inf
/// A singular Gram system sets all four to +inf and flags `singular`.
template <typename Scalar>
struct SupportQuantities {
  Scalar condition_value;
  Scalar inverse_gram_norm;
  Scalar signal_gain;
  Scalar noise_gain;
  bool singular;
};

/// Evaluates SupportQuantities for many supports against a fixed (A, beta).
/// Precomputes the symmetric regularized Gram matrix A_beta^T A once; each
/// query then costs O(k^3 + k N^2) with no heap traffic after warm-up.
template <typename Scalar>
class SupportEvaluator {
 public:
  SupportEvaluator(const DenseMatrix<Scalar>& a, const BetaParam<Scalar>& beta,
                   Scalar cond_limit = Scalar(kGramConditionLimit))
      : cond_limit_(cond_limit), ambient_(a.cols()) {
    const DenseMatrix<Scalar> a_beta = regularized_operator(a, beta);
    gram_full_ = a_beta.transpose() * a;
    gram_full_ = ((gram_full_ + gram_full_.transpose()) / Scalar(2)).eval();
  }

  Index ambient() const { return ambient_; }

  SupportQuantities<Scalar> quantities(const std::vector<Index>& support) {
    const Index k = static_cast<Index>(support.size());
    const Index n = ambient_;
    if (k == 0 || k > n) {
      throw std::invalid_argument("SupportEvaluator: support size out of range");
    }
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

    resize_workspace(k);
    for (Index l = 0; l < k; ++l) {
      rows_i_.row(l) = gram_full_.row(support[static_cast<std::size_t>(l)]);
      cols_i_.col(l) = gram_full_.col(support[static_cast<std::size_t>(l)]);
    }
    for (Index l = 0; l < k; ++l) {
      for (Index r = 0; r < k; ++r) {
        gram_i_(r, l) = rows_i_(r, support[static_cast<std::size_t>(l)]);
      }
    }

    ldlt_.compute(gram_i_);
    if (!detail::gram_factorization_acceptable(ldlt_, cond_limit_)) {
      return {inf, inf, inf, inf, true};
    }

    gram_inv_ = ldlt_.solve(identity_);
    gram_inv_ = ((gram_inv_ + gram_inv_.transpose()) / Scalar(2)).eval();
    w_.noalias() = gram_inv_ * rows_i_;

    SupportQuantities<Scalar> out;
    out.singular = false;
    out.inverse_gram_norm = inf_op_norm(gram_inv_);
    out.signal_gain = inf_op_norm(w_);

    // |A_{beta,J}^* A_I G^{-1}|_inf: by symmetry of the full Gram matrix and
    // of G^{-1}, row sums over J equal absolute column sums of W off I.
    Scalar q = 0;
    col_sums_ = w_.cwiseAbs().colwise().sum();
    std::size_t p = 0;
    for (Index j = 0; j < n; ++j) {
      if (p < support.size() && support[p] == j) {
        ++p;
        continue;
      }
      q = std::max(q, col_sums_(j));
    }
    out.condition_value = q;

    v_.noalias() = cols_i_ * w_;
    v_ -= gram_full_;
    row_sums_ = v_.cwiseAbs().rowwise().sum();
    Scalar ngain = 0;
    p = 0;
    for (Index j = 0; j < n; ++j) {
      if (p < support.size() && support[p] == j) {
        ++p;
        continue;
      }
      ngain = std::max(ngain, row_sums_(j));
    }
    out.noise_gain = ngain;
    return out;
  }

  SupportQuantities<Scalar> quantities(const IndexSet& support) {
    if (support.ambient() != ambient_) {
      throw std::invalid_argument("SupportEvaluator: support ambient mismatch");
    }
    return quantities(support.indices());
  }

 private:
  void resize_workspace(Index k) {
    if (rows_i_.rows() == k) return;
    const Index n = ambient_;
    rows_i_.resize(k, n);
    cols_i_.resize(n, k);
    gram_i_.resize(k, k);
    gram_inv_.resize(k, k);
    identity_ = DenseMatrix<Scalar>::Identity(k, k);
    w_.resize(k, n);
    v_.resize(n, n);
    col_sums_.resize(n);
    row_sums_.resize(n);
  }

  DenseMatrix<Scalar> gram_full_;  // A_beta^T A, symmetric N x N
  Scalar cond_limit_;
  Index ambient_;

  DenseMatrix<Scalar> rows_i_, cols_i_, gram_i_, gram_inv_, identity_, w_, v_;
  Eigen::LDLT<DenseMatrix<Scalar>> ldlt_;
  DenseVector<Scalar> col_sums_, row_sums_;
};

/// Exact-support-recovery certificate for a fixed (A, beta, I).
/// `alpha_min_per_d` scales with the noise level d; together with the pair
/// (s_value, sigma_value) it encodes the admissible interval
///   d*alpha_min_per_d <= alpha < (c - d*s_value) / sigma_value.
template <typename Scalar>
struct Certificate {
  IndexSet support;
  BetaParam<Scalar> beta;
  Scalar condition_value;  // must be < 1 for the certificate to hold
  Scalar cd_bound;         // least signal-to-noise ratio c/d; +inf if unsatisfiable
  Scalar alpha_min_per_d;  // lower interval endpoint per unit of noise
  Scalar s_value;          // signal_gain
  Scalar sigma_value;      // inverse_gram_norm
  bool satisfiable;        // condition_value < 1
};

namespace detail {

template <typename Scalar>
Certificate<Scalar> make_certificate(IndexSet support, const BetaParam<Scalar>& beta,
                                     const SupportQuantities<Scalar>& quant) {
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  Certificate<Scalar> cert{std::move(support),
                           beta,
                           quant.condition_value,
                           /*cd_bound=*/inf,
                           /*alpha_min_per_d=*/inf,
                           quant.signal_gain,
                           quant.inverse_gram_norm,
                           /*satisfiable=*/false};
  if (!quant.singular && quant.condition_value < Scalar(1)) {
    cert.satisfiable = true;
    cert.alpha_min_per_d = quant.noise_gain / (Scalar(1) - quant.condition_value);
    cert.cd_bound = cert.alpha_min_per_d * quant.inverse_gram_norm + quant.signal_gain;
  }
  return cert;
}

}  // namespace detail

template <typename Scalar>
Certificate<Scalar> certificate(const DenseMatrix<Scalar>& a, const BetaParam<Scalar>& beta,
                                const IndexSet& support,
                                Scalar cond_limit = Scalar(kGramConditionLimit)) {
  SupportEvaluator<Scalar> eval(a, beta, cond_limit);
  return detail::make_certificate(support, beta, eval.quantities(support));
}

/// |A_{beta,J}^* A_I (A_{beta,I}^* A_I)^{-1}|_inf; +inf when the Gram system
/// is singular (the subset counts as failing the condition).
template <typename Scalar>
Scalar condition_value(const DenseMatrix<Scalar>& a, const BetaParam<Scalar>& beta,
                       const IndexSet& support) {
  return certificate(a, beta, support).condition_value;
}

/// Least signal-to-noise ratio c/d for which the admissible alpha interval is
/// nonempty; +inf when the condition fails.
template <typename Scalar>
Scalar cd_bound(const DenseMatrix<Scalar>& a, const BetaParam<Scalar>& beta,
                const IndexSet& support) {
  return certificate(a, beta, support).cd_bound;
}

/// Half-open interval [lo, hi) of admissible regularization weights.
template <typename Scalar>
struct AlphaInterval {
  Scalar lo;
  Scalar hi;
  bool empty;
};

template <typename Scalar>
AlphaInterval<Scalar> alpha_interval(const Certificate<Scalar>& cert, Scalar c, Scalar d) {
  if (!(c > d && d > Scalar(0))) {
    throw std::invalid_argument("alpha_interval: requires c > d > 0");
  }
  if (!cert.satisfiable) return {Scalar(0), Scalar(0), true};
  const Scalar lo = d * cert.alpha_min_per_d;
  const Scalar hi = (c - d * cert.s_value) / cert.sigma_value;
  if (!(lo < hi)) return {Scalar(0), Scalar(0), true};
  return {lo, hi, false};
}

template <typename Scalar>
AlphaInterval<Scalar> alpha_interval(const DenseMatrix<Scalar>& a,
                                     const BetaParam<Scalar>& beta, const IndexSet& support,
                                     Scalar c, Scalar d) {
  return alpha_interval(certificate(a, beta, support), c, d);
}

struct RegionOptions {
  bool include_smaller = false;    // enumerate |I| in 1..k instead of exactly k
  double enumeration_cap = 1e7;    // refuse enumerations larger than this
  double cond_limit = kGramConditionLimit;
};

/// Worst-case certificate geometry over candidate supports of size k:
/// R = max cd_bound, Sigma = max inverse Gram norm, theta_min = max lower
/// alpha endpoint per unit noise. r_value and theta_min are +inf as soon as
/// one subset fails the condition.
template <typename Scalar>
struct RegionSummary {
  BetaParam<Scalar> beta;
  Index k;
  Scalar r_value;
  Scalar sigma_value;
  Scalar theta_min;
  IndexSet worst_support;
  double failure_fraction;
  std::uint64_t subsets;
};

namespace detail {

inline double subset_count(Index n, Index k, bool include_smaller) {
  double total = 0;
  for (Index size = include_smaller ? 1 : k; size <= k; ++size) {
    double c = 1;
    for (Index i = 0; i < size; ++i) c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    total += c;
  }
  return total;
}

/// Lexicographic enumeration of all size-`size` subsets of {0..n-1}.
template <typename Visitor>
void for_each_subset(Index n, Index size, Visitor&& visit) {
  std::vector<Index> comb(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) comb[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(comb);
    Index i = size - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - size + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < size; ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

template <typename Visitor>
void enumerate_supports(Index n, Index k, const RegionOptions& opts, Visitor&& visit) {
  if (k < 1 || k > n) throw std::invalid_argument("enumerate_supports: invalid k");
  if (subset_count(n, k, opts.include_smaller) > opts.enumeration_cap) {
    throw EnumerationTooLargeError("subset enumeration exceeds the configured cap");
  }
  for (Index size = opts.include_smaller ? 1 : k; size <= k; ++size) {
    for_each_subset(n, size, visit);
  }
}

}  // namespace detail

template <typename Scalar>
RegionSummary<Scalar> region_summary(const DenseMatrix<Scalar>& a,
                                     const BetaParam<Scalar>& beta, Index k,
                                     const RegionOptions& opts = {}) {
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  SupportEvaluator<Scalar> eval(a, beta, Scalar(opts.cond_limit));
  RegionSummary<Scalar> out{beta, k, -inf, -inf, -inf, IndexSet(), 0.0, 0};
  std::uint64_t failures = 0;
  detail::enumerate_supports(a.cols(), k, opts, [&](const std::vector<Index>& support) {
    const auto quant = eval.quantities(support);
    ++out.subsets;
    Scalar r_i, theta_i;
    if (quant.singular || !(quant.condition_value < Scalar(1))) {
      ++failures;
      r_i = inf;
      theta_i = inf;
    } else {
      theta_i = quant.noise_gain / (Scalar(1) - quant.condition_value);
      r_i = theta_i * quant.inverse_gram_norm + quant.signal_gain;
    }
    if (r_i > out.r_value) {
      out.r_value = r_i;
      out.worst_support = IndexSet(support, a.cols());
    }
    out.sigma_value = std::max(out.sigma_value, quant.inverse_gram_norm);
    out.theta_min = std::max(out.theta_min, theta_i);
  });
  out.failure_fraction = static_cast<double>(failures) / static_cast<double>(out.subsets);
  return out;
}

/// Upper admissible-ratio boundary at signal-to-noise ratio `theta_arg`:
/// min over supports of (theta_arg - signal_gain) / inverse_gram_norm.
/// Piecewise linear and concave in theta_arg. A singular subset makes the
/// admissible region empty, contributing -inf.
template <typename Scalar>
std::vector<Scalar> theta_max_samples(const DenseMatrix<Scalar>& a,
                                      const BetaParam<Scalar>& beta, Index k,
                                      const std::vector<Scalar>& theta_args,
                                      const RegionOptions& opts = {}) {
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  SupportEvaluator<Scalar> eval(a, beta, Scalar(opts.cond_limit));
  std::vector<Scalar> mins(theta_args.size(), inf);
  detail::enumerate_supports(a.cols(), k, opts, [&](const std::vector<Index>& support) {
    const auto quant = eval.quantities(support);
    for (std::size_t t = 0; t < theta_args.size(); ++t) {
      const Scalar value = quant.singular
                               ? -inf
                               : (theta_args[t] - quant.signal_gain) / quant.inverse_gram_norm;
      mins[t] = std::min(mins[t], value);
    }
  });
  return mins;
}

template <typename Scalar>
Scalar theta_max(const DenseMatrix<Scalar>& a, const BetaParam<Scalar>& beta, Index k,
                 Scalar theta_arg, const RegionOptions& opts = {}) {
  return theta_max_samples(a, beta, k, std::vector<Scalar>{theta_arg}, opts).front();
}

}  // namespace unmix
