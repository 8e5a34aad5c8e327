#pragma once

#include <Eigen/Core>
#include <span>

#include "cbo/binary_vector.hpp"

namespace cbo {

/// One pairwise coefficient, indexed with i < j.
struct PairTerm {
  int i;
  int j;
  double value;
};

/// Quadratic pseudo-Boolean function x -> x^T A x + b^T x + c over {0,1}^n.
///
/// A is kept symmetric with a zero diagonal: asymmetric input is averaged
/// with its transpose (which leaves the quadratic form unchanged) and any
/// diagonal entries are folded into the linear part, since x_i^2 == x_i on
/// binary inputs. Each unordered pair {i,j} therefore contributes
/// 2 * A_ij * x_i * x_j.
class QuadraticPbf {
 public:
  QuadraticPbf(Eigen::MatrixXd interactions, Eigen::VectorXd linear, double constant);

  static QuadraticPbf zero(int dimension);

  int dimension() const { return static_cast<int>(linear_.size()); }
  const Eigen::MatrixXd& interactions() const { return interactions_; }
  const Eigen::VectorXd& linear() const { return linear_; }
  double constant() const { return constant_; }

  /// Evaluates x^T A x + b^T x + c. Throws std::invalid_argument on a
  /// dimension mismatch.
  double evaluate(const BinaryVector& x) const;

  /// Coefficient-wise sum of two functions of equal dimension.
  QuadraticPbf operator+(const QuadraticPbf& other) const;

 private:
  Eigen::MatrixXd interactions_;
  Eigen::VectorXd linear_;
  double constant_ = 0.0;
};

/// Builds the acquisition quadratic of a sampled second-order model:
/// b_j = alpha_lin[j] + l1_penalty, A_ij = A_ji = alpha_quad(i,j)/2 so that
/// x^T A x recovers sum_{i<j} alpha_quad(i,j) x_i x_j, and c = alpha0.
/// Pair indices must satisfy 0 <= i < j < n; duplicate pairs are rejected.
QuadraticPbf from_alpha(double alpha0, const Eigen::VectorXd& alpha_lin,
                        std::span<const PairTerm> alpha_quad, double l1_penalty);

/// Elementwise split of a matrix into its strictly positive part and its
/// non-positive part; the two parts always sum back to the input.
struct SignSplit {
  Eigen::MatrixXd positive;
  Eigen::MatrixXd nonpositive;
};

SignSplit split_signs(const Eigen::MatrixXd& m);
SignSplit sign_split(const QuadraticPbf& f);

struct PointValue {
  BinaryVector x;
  double value;
};

/// Enumerates all 2^n inputs and returns an argmin with its value. Ties break
/// toward the lexicographically smallest bit sequence. Dimensions above 24
/// exceed the enumeration budget and are rejected.
PointValue brute_force_minimize(const QuadraticPbf& f);

/// Dense real vector with entry i equal to bit i of x.
Eigen::VectorXd to_real_vector(const BinaryVector& x);

}  // namespace cbo
