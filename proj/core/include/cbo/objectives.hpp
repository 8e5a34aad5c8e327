#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cbo/binary_vector.hpp"

namespace cbo {

/// Binary quadratic programming instance. The payoff matrix is the Hadamard
/// product Q = M .* K of a standard-normal matrix M (drawn row-major from the
/// seed) and the correlation kernel K_ij = exp(-(i-j)^2 / corr_len^2). The
/// objective is reported in minimization form: -(x^T Q x - l1 * |x|_1).
struct BqpInstance {
  int dimension = 0;
  Eigen::MatrixXd payoff;  // Q
  double correlation_length = 1.0;
  double l1_penalty = 0.0;
  std::uint64_t seed = 0;

  static BqpInstance make(int dimension, double correlation_length, double l1_penalty,
                          std::uint64_t seed);
};

double bqp_correlation_kernel(int i, int j, double correlation_length);
double bqp_objective(const BqpInstance& instance, const BinaryVector& x);

/// Multi-stage contamination control. Trajectories are presampled once per
/// instance (common random numbers), so the objective is a deterministic
/// function of x: prevention at stage i costs stage_cost and damps the
/// contamination fraction by the restore rate, while skipping it lets the
/// spread rate push the fraction toward 1. The objective charges the
/// prevention cost plus the per-stage rate of trajectories exceeding the
/// upper limit, plus an l1 term.
struct ContaminationInstance {
  int stages = 0;
  Eigen::VectorXd stage_costs;    // c_i
  Eigen::VectorXd upper_limits;   // U_i
  double violation_penalty = 1.0;  // rho
  int trajectory_count = 100;      // T
  double epsilon = 0.05;
  double l1_penalty = 0.0;
  std::uint64_t seed = 0;

  Eigen::VectorXd initial_fractions;  // T draws, Beta(1, 30)
  Eigen::MatrixXd spread_rates;       // T x n, Beta(1, 17/3)
  Eigen::MatrixXd restore_rates;      // T x n, Beta(1, 3/7)

  static ContaminationInstance make(int stages, double l1_penalty, std::uint64_t seed,
                                    double violation_penalty = 1.0, int trajectory_count = 100,
                                    double epsilon = 0.05, double upper_limit = 0.1,
                                    double stage_cost = 1.0);
};

double contamination_objective(const ContaminationInstance& instance, const BinaryVector& x);

/// Sparsification of a zero-field Ising model. Each decision bit keeps or
/// drops one edge of the reference graph; the objective is the KL divergence
/// from the reference distribution to the sparsified one plus an l1 term.
/// Partition functions and edge moments come from exhaustive enumeration, so
/// the node count is capped at 16.
struct IsingInstance {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  Eigen::VectorXd couplings;  // J_e aligned with edges
  double l1_penalty = 0.0;

  double log_partition = 0.0;      // log Z_p
  Eigen::VectorXd edge_moments;    // E_p[z_i z_j] per edge

  int dimension() const { return static_cast<int>(edges.size()); }

  static IsingInstance make(int node_count, std::vector<std::pair<int, int>> edges,
                            Eigen::VectorXd couplings, double l1_penalty);
  /// side x side grid with nearest-neighbour edges and couplings drawn
  /// uniformly from [coupling_min, coupling_max].
  static IsingInstance make_grid(int side, double l1_penalty, std::uint64_t seed,
                                 double coupling_min = 0.05, double coupling_max = 5.0);
};

/// log sum_z exp(sum_e J_e z_i z_j) over z in {-1,1}^node_count.
double ising_log_partition(int node_count, const std::vector<std::pair<int, int>>& edges,
                           const Eigen::VectorXd& couplings);

double ising_objective(const IsingInstance& instance, const BinaryVector& x);

/// Low-autocorrelation binary sequences: bits map to +-1 symbols and the
/// objective is minus the merit factor n^2 / E(S), where E(S) sums the
/// squared aperiodic autocorrelations.
struct LabsInstance {
  int length = 0;

  static LabsInstance make(int length);
};

double labs_objective(const LabsInstance& instance, const BinaryVector& x);

/// Type-erased benchmark handle used by the experiment driver.
struct Benchmark {
  std::string name;
  int dimension = 0;
  double l1_penalty = 0.0;
  std::function<double(const BinaryVector&)> objective;
};

}  // namespace cbo
