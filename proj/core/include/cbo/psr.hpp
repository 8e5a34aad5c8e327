#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "cbo/flow_network.hpp"
#include "cbo/quadratic_pbf.hpp"

namespace cbo {

/// Relaxation parameter matrix with every entry in [0, 1].
struct LambdaMatrix {
  Eigen::MatrixXd values;

  /// All entries 1/2.
  static LambdaMatrix half(int dimension);
  /// Entries drawn independently from U[0, 1].
  static LambdaMatrix uniform_random(int dimension, std::uint64_t seed);
};

/// Affine function x -> weights . x + constant.
struct LinearForm {
  Eigen::VectorXd weights;
  double constant = 0.0;

  double value_at(const BinaryVector& x) const;
};

/// Affine lower bound on x^T A+ x. With M = positive-part .* lambda, the form
/// is x^T M 1 + 1^T M x - 1^T M 1: weight i collects the i-th row and column
/// sums of M and the constant is minus the total sum. The bound is tight at
/// the all-ones point.
LinearForm affine_lower_bound(const SignSplit& split, const LambdaMatrix& lambda);

/// The submodular relaxation of f at a fixed lambda: an affine part (the
/// lower bound on the positive interactions plus f's own linear and constant
/// terms) and the non-positive interaction matrix.
struct RelaxedObjective {
  LinearForm affine;
  Eigen::MatrixXd nonpositive;

  double value_at(const BinaryVector& x) const;
};

RelaxedObjective relaxed_objective(const QuadraticPbf& f, const LambdaMatrix& lambda);

/// An s-t network whose cuts reproduce a relaxed objective: for every x, the
/// value of the cut that puts v_i on the sink side exactly when x_i = 1
/// equals the relaxed objective at x minus `offset`.
struct CutReduction {
  FlowNetwork network;
  double offset = 0.0;
};

/// Standard reduction of a submodular quadratic to a cut problem. Positive
/// net unary weights become source edges, negative ones become sink edges
/// with their value moved into the offset, and each non-positive pairwise
/// coefficient theta x_i x_j is rewritten as theta x_i + (-theta) x_i (1-x_j).
/// Any positive entry in `nonpositive` is rejected.
CutReduction build_cut_network(const LinearForm& affine, const Eigen::MatrixXd& nonpositive);

struct RelaxationSolution {
  BinaryVector x;
  double lower_bound = 0.0;
};

/// Exact minimizer of the relaxed objective at a fixed lambda, via a single
/// minimum cut. Variable nodes untouched by any network edge do not affect
/// the objective and are reported as 0.
RelaxationSolution solve_relaxation(const QuadraticPbf& f, const LambdaMatrix& lambda);

/// Subgradient of the negated outer objective at the inner minimizer:
/// positive-part .* (11^T - x 1^T - 1 x^T).
Eigen::MatrixXd subgradient(const SignSplit& split, const BinaryVector& x_hat);

/// Elementwise clamp onto [0, 1].
LambdaMatrix project_unit_box(const Eigen::MatrixXd& m);

enum class LambdaInit {
  kHalf,
  kUniformRandom,
};

struct PsrParams {
  int max_outer_iters = 10;
  double step_size_0 = 1.0;           // eta_i = step_size_0 / sqrt(i + 1)
  double tolerance = 1e-6;            // stop once the best bound improves by less
  LambdaInit lambda_init = LambdaInit::kHalf;
};

struct PsrResult {
  BinaryVector best_x;
  double best_value = 0.0;        // true objective at best_x
  double best_lower_bound = 0.0;  // largest relaxation value seen
  int iterations_used = 0;
  std::vector<double> bound_trace;  // per-iteration relaxation minima
};

/// Minimizes f by alternating exact min-cut solves of the submodular
/// relaxation with projected subgradient steps on lambda. The returned point
/// is the best inner minimizer under the true objective; the lower bound is
/// the largest relaxation value encountered, so best_lower_bound <=
/// best_value always holds and the two coincide when f has no positive
/// interactions.
PsrResult psr_minimize(const QuadraticPbf& f, const PsrParams& params = {},
                       std::uint64_t rng_seed = 0);

}  // namespace cbo
