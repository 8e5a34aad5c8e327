#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cbo/binary_vector.hpp"
#include "cbo/quadratic_pbf.hpp"

namespace cbo {

/// Number of second-order monomials over n binary inputs:
/// 1 + n + n(n-1)/2 for [1, x_1..x_n, x_1 x_2, x_1 x_3, ..., x_{n-1} x_n].
int feature_dimension(int n);

/// Position of the monomial x_i x_j (i < j) inside the feature vector.
int pair_feature_index(int i, int j, int n);

/// Second-order monomial expansion of x in the fixed ordering above.
Eigen::VectorXd feature_map(const BinaryVector& x);

/// A posterior draw of the second-order model coefficients. `pairwise` holds
/// the coefficients of x_i x_j (i < j) in the feature-map pair ordering.
struct AlphaSample {
  double alpha0 = 0.0;
  Eigen::VectorXd linear;
  Eigen::VectorXd pairwise;

  std::vector<PairTerm> pair_terms() const;
};

/// Splits a flat coefficient vector (feature-map ordering) for inputs of
/// dimension n into intercept, linear, and pairwise blocks.
AlphaSample unpack_alpha(const Eigen::VectorXd& coefficients, int n);

/// Acquisition quadratic of a posterior draw; see from_alpha above.
QuadraticPbf from_alpha(const AlphaSample& alpha, double l1_penalty);

struct SurrogateOptions {
  /// Prior variance of the intercept, which is not shrunk by the horseshoe.
  double intercept_prior_variance = 100.0;
  /// Coefficient vectors up to this length are drawn jointly through the
  /// posterior precision system; longer ones fall back to per-coordinate
  /// updates.
  int joint_draw_max_dim = 2000;
};

/// Gibbs-chain state of the sparse Bayesian second-order regression
///   y = phi(x)^T alpha + eps,  eps ~ N(0, sigma2),
/// with a horseshoe prior on every non-intercept coefficient
/// (alpha_k ~ N(0, sigma2 tau^2 lambda_k^2), lambda_k and tau half-Cauchy)
/// and an improper 1/sigma2 prior on the noise variance. Each half-Cauchy
/// scale is represented through an inverse-gamma auxiliary, so every full
/// conditional has closed form.
class GibbsState {
 public:
  GibbsState(const std::vector<std::pair<BinaryVector, double>>& data, std::uint64_t seed,
             const SurrogateOptions& options = {});

  /// One full Gibbs sweep: coefficients, noise variance, local scales with
  /// their auxiliaries, then the global scale with its auxiliary.
  void advance_one_sweep();

  int input_dimension() const { return input_dimension_; }
  int feature_count() const { return static_cast<int>(coefficients_.size()); }

  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  double sigma2() const { return sigma2_; }
  /// Per-coefficient scales lambda_k (entry 0 is the unshrunk intercept slot).
  Eigen::VectorXd local_scales() const;
  double global_scale() const;

 private:
  void draw_coefficients_joint();
  void draw_coefficients_coordinatewise();
  void draw_noise_variance();
  void draw_scales();

  double prior_precision(int k) const;

  int input_dimension_ = 0;
  Eigen::MatrixXd features_;   // N x p design matrix
  Eigen::VectorXd targets_;    // N
  Eigen::MatrixXd gram_;       // phi^T phi
  Eigen::VectorXd phi_t_y_;    // phi^T y
  Eigen::VectorXd column_sq_norms_;

  Eigen::VectorXd coefficients_;  // p
  double sigma2_ = 1.0;
  Eigen::VectorXd lambda_sq_;  // p, entry 0 fixed at 1
  Eigen::VectorXd nu_;         // p, entry 0 unused
  double tau_sq_ = 1.0;
  double xi_ = 1.0;

  SurrogateOptions options_;
  std::mt19937_64 rng_;
};

/// Runs `burn_in` full sweeps from a fresh chain and returns the state.
/// Identical (data, burn_in, seed, options) reproduce the state exactly.
/// Empty data and non-finite targets are rejected.
GibbsState gibbs_fit(const std::vector<std::pair<BinaryVector, double>>& data, int burn_in,
                     std::uint64_t seed, const SurrogateOptions& options = {});

/// Advances the chain one sweep and returns the resulting coefficients,
/// unpacked into the second-order model blocks.
AlphaSample thompson_draw(GibbsState& state);

}  // namespace cbo
