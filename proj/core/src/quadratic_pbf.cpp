#include "cbo/quadratic_pbf.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>

namespace cbo {

namespace {

constexpr int kEnumerationBudgetBits = 24;

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string("QuadraticPbf: non-finite ") + what);
  }
}

}  // namespace

QuadraticPbf::QuadraticPbf(Eigen::MatrixXd interactions, Eigen::VectorXd linear, double constant)
    : linear_(std::move(linear)), constant_(constant) {
  const int n = static_cast<int>(linear_.size());
  if (interactions.rows() != n || interactions.cols() != n) {
    throw std::invalid_argument("QuadraticPbf: interaction matrix must be n x n");
  }
  require_finite(interactions, "interaction coefficients");
  require_finite(linear_, "linear coefficients");
  if (!std::isfinite(constant_)) {
    throw std::invalid_argument("QuadraticPbf: non-finite constant");
  }
  // x_i^2 == x_i, so the diagonal lives in the linear part.
  linear_ += interactions.diagonal();
  interactions_ = 0.5 * (interactions + interactions.transpose());
  interactions_.diagonal().setZero();
}

QuadraticPbf QuadraticPbf::zero(int dimension) {
  return QuadraticPbf(Eigen::MatrixXd::Zero(dimension, dimension),
                      Eigen::VectorXd::Zero(dimension), 0.0);
}

double QuadraticPbf::evaluate(const BinaryVector& x) const {
  if (x.dimension() != dimension()) {
    throw std::invalid_argument("QuadraticPbf::evaluate: dimension mismatch");
  }
  const Eigen::VectorXd v = to_real_vector(x);
  return v.dot(interactions_ * v) + linear_.dot(v) + constant_;
}

QuadraticPbf QuadraticPbf::operator+(const QuadraticPbf& other) const {
  if (other.dimension() != dimension()) {
    throw std::invalid_argument("QuadraticPbf: cannot add functions of different dimension");
  }
  return QuadraticPbf(interactions_ + other.interactions_, linear_ + other.linear_,
                      constant_ + other.constant_);
}

QuadraticPbf from_alpha(double alpha0, const Eigen::VectorXd& alpha_lin,
                        std::span<const PairTerm> alpha_quad, double l1_penalty) {
  const int n = static_cast<int>(alpha_lin.size());
  if (l1_penalty < 0.0) {
    throw std::invalid_argument("from_alpha: l1 penalty must be non-negative");
  }
  Eigen::MatrixXd interactions = Eigen::MatrixXd::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (const PairTerm& term : alpha_quad) {
    if (term.i < 0 || term.j <= term.i || term.j >= n) {
      throw std::invalid_argument("from_alpha: pair indices must satisfy 0 <= i < j < n");
    }
    if (!seen.insert({term.i, term.j}).second) {
      throw std::invalid_argument("from_alpha: duplicate pair index");
    }
    interactions(term.i, term.j) = 0.5 * term.value;
    interactions(term.j, term.i) = 0.5 * term.value;
  }
  const Eigen::VectorXd linear =
      alpha_lin + Eigen::VectorXd::Constant(n, l1_penalty);
  return QuadraticPbf(std::move(interactions), linear, alpha0);
}

SignSplit split_signs(const Eigen::MatrixXd& m) {
  SignSplit out;
  out.positive = m.cwiseMax(0.0);
  out.nonpositive = m.cwiseMin(0.0);
  return out;
}

SignSplit sign_split(const QuadraticPbf& f) { return split_signs(f.interactions()); }

PointValue brute_force_minimize(const QuadraticPbf& f) {
  const int n = f.dimension();
  if (n > kEnumerationBudgetBits) {
    throw std::invalid_argument("brute_force_minimize: dimension exceeds the 2^24 enumeration budget");
  }

  BinaryVector current(n);
  BinaryVector best = current;
  double value = f.evaluate(current);
  double best_value = value;
  if (n == 0) {
    return {best, best_value};
  }

  // Gray-code walk: one bit flip per step, with the value updated in O(n)
  // through the cached row sums g = A x.
  Eigen::VectorXd row_activity = Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd& a = f.interactions();
  const Eigen::VectorXd& b = f.linear();

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int i = std::countr_zero(step);
    const double sign = current.bit(i) ? -1.0 : 1.0;
    value += sign * (b(i) + 2.0 * row_activity(i));
    current.flip_bit(i);
    row_activity += sign * a.col(i);

    if (value < best_value || (value == best_value && current < best)) {
      best_value = value;
      best = current;
    }
  }
  return {best, best_value};
}

Eigen::VectorXd to_real_vector(const BinaryVector& x) {
  Eigen::VectorXd v(x.dimension());
  for (int i = 0; i < x.dimension(); ++i) {
    v(i) = static_cast<double>(x.bit(i));
  }
  return v;
}

}  // namespace cbo
