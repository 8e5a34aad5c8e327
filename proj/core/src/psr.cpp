#include "cbo/psr.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace cbo {

LambdaMatrix LambdaMatrix::half(int dimension) {
  return {Eigen::MatrixXd::Constant(dimension, dimension, 0.5)};
}

LambdaMatrix LambdaMatrix::uniform_random(int dimension, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd values(dimension, dimension);
  for (int i = 0; i < dimension; ++i) {
    for (int j = 0; j < dimension; ++j) {
      values(i, j) = unit(rng);
    }
  }
  return {std::move(values)};
}

double LinearForm::value_at(const BinaryVector& x) const {
  double out = constant;
  for (int i = 0; i < x.dimension(); ++i) {
    if (x.bit(i)) out += weights(i);
  }
  return out;
}

LinearForm affine_lower_bound(const SignSplit& split, const LambdaMatrix& lambda) {
  if (lambda.values.rows() != split.positive.rows() ||
      lambda.values.cols() != split.positive.cols()) {
    throw std::invalid_argument("affine_lower_bound: lambda dimension mismatch");
  }
  const Eigen::MatrixXd masked = split.positive.cwiseProduct(lambda.values);
  LinearForm form;
  form.weights = masked.rowwise().sum() + masked.colwise().sum().transpose();
  form.constant = -masked.sum();
  return form;
}

double RelaxedObjective::value_at(const BinaryVector& x) const {
  const Eigen::VectorXd v = to_real_vector(x);
  return affine.value_at(x) + v.dot(nonpositive * v);
}

RelaxedObjective relaxed_objective(const QuadraticPbf& f, const LambdaMatrix& lambda) {
  const SignSplit split = sign_split(f);
  RelaxedObjective out;
  out.affine = affine_lower_bound(split, lambda);
  out.affine.weights += f.linear();
  out.affine.constant += f.constant();
  out.nonpositive = split.nonpositive;
  return out;
}

CutReduction build_cut_network(const LinearForm& affine, const Eigen::MatrixXd& nonpositive) {
  const int n = static_cast<int>(affine.weights.size());
  if (nonpositive.rows() != n || nonpositive.cols() != n) {
    throw std::invalid_argument("build_cut_network: dimension mismatch");
  }
  if ((nonpositive.array() > 0.0).any()) {
    throw std::invalid_argument("build_cut_network: pairwise matrix must be non-positive");
  }

  CutReduction out{FlowNetwork(n), affine.constant};
  Eigen::VectorXd unary = affine.weights;

  // theta x_i x_j  ==  theta x_i + (-theta) x_i (1 - x_j); the second term is
  // cut exactly when v_j sits on the source side and v_i on the sink side.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        unary(i) += nonpositive(i, i);  // x_i^2 == x_i
        continue;
      }
      const double theta = nonpositive(i, j);
      if (theta == 0.0) continue;
      unary(i) += theta;
      out.network.add_edge(j, i, -theta);
    }
  }

  for (int i = 0; i < n; ++i) {
    const double w = unary(i);
    if (w > 0.0) {
      out.network.add_edge(out.network.source(), i, w);
    } else if (w < 0.0) {
      out.offset += w;
      out.network.add_edge(i, out.network.sink(), -w);
    }
  }
  return out;
}

RelaxationSolution solve_relaxation(const QuadraticPbf& f, const LambdaMatrix& lambda) {
  const RelaxedObjective relaxed = relaxed_objective(f, lambda);
  const CutReduction reduction = build_cut_network(relaxed.affine, relaxed.nonpositive);
  const CutResult cut = solve_min_cut(reduction.network);

  // Sink-side nodes carry bit 1. Nodes without any incident edge never enter
  // a cut, so their bit is pinned to 0.
  RelaxationSolution out;
  out.x = BinaryVector(f.dimension());
  for (int i = 0; i < f.dimension(); ++i) {
    if (reduction.network.touches_any_edge(i)) out.x.set_bit(i, true);
  }
  for (int v : cut.source_side) {
    out.x.set_bit(v, false);
  }
  out.lower_bound = cut.cut_value + reduction.offset;
  return out;
}

Eigen::MatrixXd subgradient(const SignSplit& split, const BinaryVector& x_hat) {
  const int n = static_cast<int>(split.positive.rows());
  if (x_hat.dimension() != n) {
    throw std::invalid_argument("subgradient: dimension mismatch");
  }
  const Eigen::VectorXd v = to_real_vector(x_hat);
  const Eigen::MatrixXd inner = Eigen::MatrixXd::Ones(n, n) - v * Eigen::RowVectorXd::Ones(n) -
                                Eigen::VectorXd::Ones(n) * v.transpose();
  return split.positive.cwiseProduct(inner);
}

LambdaMatrix project_unit_box(const Eigen::MatrixXd& m) {
  return {m.cwiseMax(0.0).cwiseMin(1.0)};
}

PsrResult psr_minimize(const QuadraticPbf& f, const PsrParams& params, std::uint64_t rng_seed) {
  if (params.max_outer_iters < 1) {
    throw std::invalid_argument("psr_minimize: max_outer_iters must be at least 1");
  }
  if (!(params.step_size_0 > 0.0)) {
    throw std::invalid_argument("psr_minimize: step_size_0 must be positive");
  }
  if (params.tolerance < 0.0) {
    throw std::invalid_argument("psr_minimize: tolerance must be non-negative");
  }

  const int n = f.dimension();
  const SignSplit split = sign_split(f);
  LambdaMatrix lambda = params.lambda_init == LambdaInit::kHalf
                            ? LambdaMatrix::half(n)
                            : LambdaMatrix::uniform_random(n, rng_seed);

  PsrResult result;
  bool have_point = false;
  for (int iter = 0; iter < params.max_outer_iters; ++iter) {
    const RelaxationSolution inner = solve_relaxation(f, lambda);
    const double true_value = f.evaluate(inner.x);

    result.bound_trace.push_back(inner.lower_bound);
    ++result.iterations_used;

    if (!have_point || true_value < result.best_value) {
      result.best_x = inner.x;
      result.best_value = true_value;
    }
    const double previous_best_bound = result.best_lower_bound;
    if (!have_point || inner.lower_bound > result.best_lower_bound) {
      result.best_lower_bound = inner.lower_bound;
    }
    if (have_point && result.best_lower_bound - previous_best_bound < params.tolerance) {
      break;
    }
    have_point = true;

    const double step = params.step_size_0 / std::sqrt(static_cast<double>(iter) + 1.0);
    lambda = project_unit_box(lambda.values - step * subgradient(split, inner.x));
  }
  return result;
}

}  // namespace cbo
