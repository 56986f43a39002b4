#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace unmix {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

/// Thrown when a restricted Gram system is numerically singular
/// (estimated condition number above the configured limit).
struct SingularGramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a subset enumeration would exceed the configured cap.
struct EnumerationTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an iterative solver produces a non-finite iterate.
struct NonFiniteIterateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by statistics helpers on empty input.
struct EmptyInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadratic-penalty weight. Holds either a finite positive value or the
/// infinite sentinel, which selects plain l1 regularization.
template <typename Scalar = double>
class BetaParam {
 public:
  explicit BetaParam(Scalar value) : value_(value) {
    if (!(value > Scalar(0))) {
      throw std::invalid_argument("BetaParam: value must be positive (or infinite)");
    }
  }

  static BetaParam infinite() {
    return BetaParam(std::numeric_limits<Scalar>::infinity());
  }

  bool finite() const { return value_ != std::numeric_limits<Scalar>::infinity(); }
  Scalar value() const { return value_; }

  friend bool operator==(const BetaParam& a, const BetaParam& b) {
    return a.value_ == b.value_;
  }

 private:
  Scalar value_;
};

using Beta = BetaParam<double>;

/// Sorted set of column indices in [0, ambient). Candidate supports and their
/// complements are represented this way.
class IndexSet {
 public:
  IndexSet() : ambient_(0) {}

  IndexSet(std::vector<Index> indices, Index ambient)
      : indices_(std::move(indices)), ambient_(ambient) {
    if (ambient_ < 0) throw std::invalid_argument("IndexSet: negative ambient dimension");
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] < 0 || indices_[i] >= ambient_) {
        throw std::invalid_argument("IndexSet: index out of range");
      }
      if (i > 0 && indices_[i] == indices_[i - 1]) {
        throw std::invalid_argument("IndexSet: duplicate index");
      }
    }
  }

  Index size() const { return static_cast<Index>(indices_.size()); }
  Index ambient() const { return ambient_; }
  bool empty() const { return indices_.empty(); }
  const std::vector<Index>& indices() const { return indices_; }
  Index operator[](std::size_t i) const { return indices_[i]; }

  bool contains(Index i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }

  IndexSet complement() const {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(ambient_ - size()));
    std::size_t p = 0;
    for (Index i = 0; i < ambient_; ++i) {
      if (p < indices_.size() && indices_[p] == i) {
        ++p;
      } else {
        out.push_back(i);
      }
    }
    return IndexSet(std::move(out), ambient_);
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(indices_[i]);
    }
    return s;
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.ambient_ == b.ambient_ && a.indices_ == b.indices_;
  }

 private:
  std::vector<Index> indices_;
  Index ambient_;
};

}  // namespace unmix
