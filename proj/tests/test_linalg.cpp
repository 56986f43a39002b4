#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "test_helpers.hpp"
#include "unmix/linalg.hpp"

using namespace unmix;
using test_helpers::random_matrix;
using test_helpers::random_vector;

TEST_CASE("inf_op_norm: direct row-sum arithmetic") {
  Matrix a(2, 2);
  a << 1, -2, 3, -4;
  CHECK(inf_op_norm(a) == doctest::Approx(7.0).epsilon(1e-15));
  for (Index n : {1, 3, 5}) {
    CHECK(inf_op_norm(Matrix(Matrix::Identity(n, n))) == doctest::Approx(1.0));
  }
  CHECK(inf_op_norm(Matrix(Matrix::Zero(3, 4))) == 0.0);
  CHECK(inf_op_norm(Matrix(2, 0)) == 0.0);
}

TEST_CASE("inf_op_norm equals the exhaustive maximum over sign vectors") {
  Rng rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    const Index rows = 4, cols = 6;
    const Matrix a = random_matrix(rng, rows, cols);
    double best = 0;
    for (int mask = 0; mask < (1 << cols); ++mask) {
      Vector x(cols);
      for (Index j = 0; j < cols; ++j) x(j) = (mask >> j) & 1 ? 1.0 : -1.0;
      best = std::max(best, (a * x).cwiseAbs().maxCoeff());
    }
    CHECK(inf_op_norm(a) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("restrict_columns selects columns in index order") {
  const Matrix id = Matrix::Identity(3, 3);
  const Matrix sel = restrict_columns(id, IndexSet({0, 2}, 3));
  CHECK(sel.col(0) == id.col(0));
  CHECK(sel.col(1) == id.col(2));

  Rng rng(7);
  const Matrix a = random_matrix(rng, 2, 4);
  CHECK(restrict_columns(a, IndexSet({0, 1, 2, 3}, 4)) == a);
  const Matrix two = restrict_columns(a, IndexSet({1, 3}, 4));
  CHECK(two.col(0) == a.col(1));
  CHECK(two.col(1) == a.col(3));

  CHECK_THROWS_AS(IndexSet({4}, 4), std::invalid_argument);
  CHECK_THROWS_AS(IndexSet({1, 1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(restrict_columns(a, IndexSet({0}, 5)), std::invalid_argument);
}

TEST_CASE("restrict_columns with a support and its complement partitions A") {
  Rng rng(8);
  const Matrix a = random_matrix(rng, 3, 7);
  const IndexSet support = test_helpers::random_support(rng, 7, 3);
  const IndexSet rest = support.complement();
  const Matrix a_i = restrict_columns(a, support);
  const Matrix a_j = restrict_columns(a, rest);
  REQUIRE(a_i.cols() + a_j.cols() == a.cols());
  for (Index j = 0; j < support.size(); ++j) {
    CHECK(a_i.col(j) == a.col(support[static_cast<std::size_t>(j)]));
  }
  for (Index j = 0; j < rest.size(); ++j) {
    CHECK(a_j.col(j) == a.col(rest[static_cast<std::size_t>(j)]));
  }
}

TEST_CASE("regularized_operator identity and limiting cases") {
  const Matrix id = Matrix::Identity(4, 4);
  const Matrix half = regularized_operator(id, Beta(1.0));
  CHECK((half - 0.5 * id).cwiseAbs().maxCoeff() < 1e-14);

  Rng rng(9);
  const Matrix a = random_matrix(rng, 3, 5);
  CHECK(regularized_operator(a, Beta::infinite()) == a);
}

TEST_CASE("regularized_operator matches the explicit-inverse oracle") {
  Rng rng(10);
  const Matrix a = random_matrix(rng, 3, 5);
  const double beta = 2.0;
  Matrix s = a * a.transpose() / beta;
  s.diagonal().array() += 1.0;
  const Matrix oracle = s.inverse() * a;  // independent dense route
  const Matrix got = regularized_operator(a, Beta(beta));
  CHECK((got - oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("regularized_operator satisfies (Id + AA^T/beta) A_beta = A") {
  Rng rng(11);
  for (double beta : {0.1, 1.0, 10.0}) {
    const Matrix a = random_matrix(rng, 5, 9);
    Matrix s = a * a.transpose() / beta;
    s.diagonal().array() += 1.0;
    const Matrix a_beta = regularized_operator(a, Beta(beta));
    CHECK((s * a_beta - a).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("reduced_problem identity case") {
  const Matrix id = Matrix::Identity(3, 3);
  Vector y(3);
  y << 1.0, -2.0, 0.5;
  const auto reduced = reduced_problem(id, y, Beta(1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK((reduced.b - inv_sqrt2 * id).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((reduced.y - inv_sqrt2 * y).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("reduced_problem reproduces the regularized Gram matrix") {
  Rng rng(12);
  const Matrix a = random_matrix(rng, 4, 6);
  const Vector y = random_vector(rng, 4);
  const double beta = 0.5;
  const auto reduced = reduced_problem(a, y, Beta(beta));
  const Matrix lhs = reduced.b.transpose() * reduced.b;
  const Matrix rhs = regularized_operator(a, Beta(beta)).transpose() * a;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("reduced_problem approaches (A, y) for large beta") {
  Rng rng(13);
  const Matrix a = random_matrix(rng, 4, 6);
  const Vector y = random_vector(rng, 4);
  const auto reduced = reduced_problem(a, y, Beta(1e8));
  CHECK((reduced.b - a).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff() < 1e-6);
  CHECK((reduced.y - y).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("gram_inverse_apply identity cases") {
  const Matrix id = Matrix::Identity(5, 5);
  const IndexSet support({1, 3}, 5);
  Rng rng(14);
  const Matrix rhs = random_matrix(rng, 2, 3);
  CHECK((gram_inverse_apply(id, Beta::infinite(), support, rhs) - rhs).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((gram_inverse_apply(id, Beta(1.0), support, rhs) - 2.0 * rhs).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("gram_inverse_apply residual check on random data") {
  Rng rng(15);
  const Matrix a = random_matrix(rng, 6, 8);
  const IndexSet support({0, 4, 7}, 8);
  const Matrix rhs = random_matrix(rng, 3, 2);
  const double beta = 0.7;
  const Matrix solved = gram_inverse_apply(a, Beta(beta), support, rhs);
  const Matrix gram = restrict_columns(regularized_operator(a, Beta(beta)), support).transpose() *
                      restrict_columns(a, support);
  CHECK((gram * solved - rhs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("gram_inverse_apply reports singular restricted systems") {
  Matrix a(4, 5);
  Rng rng(16);
  a = random_matrix(rng, 4, 5);
  a.col(2) = a.col(0);  // duplicated column makes the restricted Gram singular
  const IndexSet support({0, 2}, 5);
  const Matrix rhs = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(gram_inverse_apply(a, Beta::infinite(), support, rhs), SingularGramError);
}

TEST_CASE("core routines compile and agree for float") {
  DenseMatrix<float> a(2, 3);
  a << 1.f, -2.f, 0.5f, 3.f, -4.f, 1.f;
  CHECK(inf_op_norm(a) == doctest::Approx(8.0f));
  const auto a_beta = regularized_operator(a, BetaParam<float>(1.f));
  CHECK(a_beta.rows() == 2);
}
