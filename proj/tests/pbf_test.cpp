#include "cbo/quadratic_pbf.hpp"

#include <array>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

using cbo::BinaryVector;
using cbo::PairTerm;
using cbo::QuadraticPbf;

namespace {

QuadraticPbf two_var(double a12, double b1, double b2, double c) {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, a12, a12, 0.0;
  Eigen::VectorXd b(2);
  b << b1, b2;
  return QuadraticPbf(a, b, c);
}

}  // namespace

TEST_CASE("evaluate: linear-only case") {
  const QuadraticPbf f = two_var(0.0, 1.0, -2.0, 0.5);
  CHECK(f.evaluate(BinaryVector{1, 1}) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("evaluate: a single symmetric pair counts twice") {
  const QuadraticPbf f = two_var(1.5, 0.0, 0.0, 0.0);
  CHECK(f.evaluate(BinaryVector{1, 1}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("evaluate: dimension mismatch is rejected") {
  const QuadraticPbf f = two_var(1.0, 0.0, 0.0, 0.0);
  CHECK_THROWS_AS(f.evaluate(BinaryVector{1, 0, 1}), std::invalid_argument);
}

TEST_CASE("evaluate agrees with the term-by-term oracle on all inputs") {
  const int n = 10;
  const QuadraticPbf f = oracle::random_pbf(n, 42);
  oracle::for_each_point(n, [&](const BinaryVector& x) {
    const double expected = oracle::quadratic_value(f.interactions(), f.linear(), f.constant(), x);
    CHECK(f.evaluate(x) == doctest::Approx(expected).epsilon(1e-12));
  });
}

TEST_CASE("construction folds diagonals and symmetrizes without changing values") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 6;
  Eigen::MatrixXd raw(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) raw(i, j) = normal(rng);
  }
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = normal(rng);

  const QuadraticPbf f(raw, b, 0.25);
  CHECK(f.interactions().diagonal().isZero(0.0));
  CHECK(f.interactions().isApprox(f.interactions().transpose()));
  oracle::for_each_point(n, [&](const BinaryVector& x) {
    CHECK(f.evaluate(x) == doctest::Approx(oracle::quadratic_value(raw, b, 0.25, x)).epsilon(1e-12));
  });
}

TEST_CASE("from_alpha: coefficients read off the second-order model") {
  Eigen::VectorXd lin(2);
  lin << 1.0, -2.0;
  const std::array<PairTerm, 1> quad = {PairTerm{0, 1, 3.0}};
  const QuadraticPbf f = cbo::from_alpha(0.5, lin, quad, 0.1);
  CHECK(f.linear()(0) == doctest::Approx(1.1));
  CHECK(f.linear()(1) == doctest::Approx(-1.9));
  CHECK(f.interactions()(0, 1) == doctest::Approx(1.5));
  CHECK(f.interactions()(1, 0) == doctest::Approx(1.5));
  CHECK(f.constant() == doctest::Approx(0.5));
}

TEST_CASE("from_alpha: all-zero coefficients give the zero function") {
  const QuadraticPbf f = cbo::from_alpha(0.0, Eigen::VectorXd::Zero(3), {}, 0.0);
  oracle::for_each_point(3, [&](const BinaryVector& x) { CHECK(f.evaluate(x) == 0.0); });
}

TEST_CASE("from_alpha: invalid pair indices are rejected") {
  const Eigen::VectorXd lin = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(cbo::from_alpha(0.0, lin, std::array{PairTerm{0, 1, 1.0}, PairTerm{0, 1, 2.0}},
                                  0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cbo::from_alpha(0.0, lin, std::array{PairTerm{1, 1, 1.0}}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cbo::from_alpha(0.0, lin, std::array{PairTerm{2, 1, 1.0}}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cbo::from_alpha(0.0, lin, std::array{PairTerm{0, 3, 1.0}}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("from_alpha reproduces the model value pointwise") {
  const int n = 8;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> penalty_dist(0.0, 0.5);

  for (int draw = 0; draw < 50; ++draw) {
    const double alpha0 = normal(rng);
    Eigen::VectorXd lin(n);
    for (int i = 0; i < n; ++i) lin(i) = normal(rng);
    std::vector<PairTerm> quad;
    Eigen::MatrixXd pair_values = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = normal(rng);
        quad.push_back({i, j, v});
        pair_values(i, j) = v;
      }
    }
    const double penalty = penalty_dist(rng);
    const QuadraticPbf f = cbo::from_alpha(alpha0, lin, quad, penalty);

    oracle::for_each_point(n, [&](const BinaryVector& x) {
      double expected = alpha0;
      for (int i = 0; i < n; ++i) {
        if (x.bit(i)) expected += lin(i) + penalty;
        for (int j = i + 1; j < n; ++j) {
          if (x.bit(i) && x.bit(j)) expected += pair_values(i, j);
        }
      }
      CHECK(f.evaluate(x) == doctest::Approx(expected).epsilon(1e-12));
    });
  }
}

TEST_CASE("sign_split: positive-only and nonpositive-only matrices") {
  Eigen::MatrixXd all_pos(2, 2);
  all_pos << 0.0, 2.0, 2.0, 0.0;
  const cbo::SignSplit sp = cbo::split_signs(all_pos);
  CHECK(sp.positive.isApprox(all_pos));
  CHECK(sp.nonpositive.isZero(0.0));

  Eigen::MatrixXd all_neg(2, 2);
  all_neg << 0.0, -1.0, -1.0, 0.0;
  const cbo::SignSplit sn = cbo::split_signs(all_neg);
  CHECK(sn.positive.isZero(0.0));
  CHECK(sn.nonpositive.isApprox(all_neg));
}

TEST_CASE("sign_split: piecewise definition on a raw asymmetric matrix") {
  Eigen::MatrixXd raw(2, 2);
  raw << 0.0, 2.0, -1.0, 0.0;
  const cbo::SignSplit s = cbo::split_signs(raw);
  CHECK(s.positive(0, 1) == 2.0);
  CHECK(s.positive(1, 0) == 0.0);
  CHECK(s.nonpositive(0, 1) == 0.0);
  CHECK(s.nonpositive(1, 0) == -1.0);
}

TEST_CASE("sign_split reconstruction: the parts sum back exactly") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd m(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) m(i, j) = normal(rng);
    }
    const cbo::SignSplit s = cbo::split_signs(m);
    CHECK((s.positive + s.nonpositive - m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.positive.array() >= 0.0).all());
    CHECK((s.nonpositive.array() <= 0.0).all());
  }
}

TEST_CASE("brute force: ties break to the lexicographically smallest input") {
  const QuadraticPbf f = two_var(-0.5, 1.0, -2.0, 0.0);
  const cbo::PointValue result = cbo::brute_force_minimize(f);
  CHECK(result.value == doctest::Approx(-2.0));
  CHECK(result.x == BinaryVector{0, 1});
}

TEST_CASE("brute force: zero function returns the all-zeros input") {
  const cbo::PointValue result = cbo::brute_force_minimize(QuadraticPbf::zero(5));
  CHECK(result.value == 0.0);
  CHECK(result.x == BinaryVector(5));
}

TEST_CASE("brute force matches the enumeration oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const QuadraticPbf f = oracle::random_pbf(9, seed);
    const auto [x, value] = oracle::minimize(9, [&](const BinaryVector& p) { return f.evaluate(p); });
    const cbo::PointValue result = cbo::brute_force_minimize(f);
    CHECK(result.value == doctest::Approx(value).epsilon(1e-12));
    CHECK(result.x == x);
  }
}

TEST_CASE("brute force dominates random sampling") {
  const int n = 12;
  const QuadraticPbf f = oracle::random_pbf(n, 99);
  const cbo::PointValue result = cbo::brute_force_minimize(f);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    CHECK(result.value <= f.evaluate(oracle::random_point(n, rng)) + 1e-12);
  }
}

TEST_CASE("brute force rejects dimensions beyond the enumeration budget") {
  CHECK_THROWS_AS(cbo::brute_force_minimize(QuadraticPbf::zero(25)), std::invalid_argument);
}

TEST_CASE("evaluate is linear in the coefficients") {
  const int n = 8;
  const QuadraticPbf f = oracle::random_pbf(n, 21);
  const QuadraticPbf g = oracle::random_pbf(n, 22);
  const QuadraticPbf sum = f + g;
  oracle::for_each_point(n, [&](const BinaryVector& x) {
    CHECK(sum.evaluate(x) == doctest::Approx(f.evaluate(x) + g.evaluate(x)).epsilon(1e-12));
  });
}
