#include "cbo/objectives.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace cbo {

namespace {

void require_dimension(int expected, const BinaryVector& x, const char* what) {
  if (x.dimension() != expected) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

// Beta(1, b) by inverse CDF: F(x) = 1 - (1 - x)^b.
double beta_one_draw(std::mt19937_64& rng, double b) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return 1.0 - std::pow(1.0 - unit(rng), 1.0 / b);
}

}  // namespace

BqpInstance BqpInstance::make(int dimension, double correlation_length, double l1_penalty,
                              std::uint64_t seed) {
  if (dimension < 1) {
    throw std::invalid_argument("BqpInstance: dimension must be positive");
  }
  if (!(correlation_length > 0.0)) {
    throw std::invalid_argument("BqpInstance: correlation length must be positive");
  }
  if (l1_penalty < 0.0) {
    throw std::invalid_argument("BqpInstance: l1 penalty must be non-negative");
  }
  BqpInstance out;
  out.dimension = dimension;
  out.correlation_length = correlation_length;
  out.l1_penalty = l1_penalty;
  out.seed = seed;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  out.payoff.resize(dimension, dimension);
  for (int i = 0; i < dimension; ++i) {
    for (int j = 0; j < dimension; ++j) {
      out.payoff(i, j) =
          standard_normal(rng) * bqp_correlation_kernel(i, j, correlation_length);
    }
  }
  return out;
}

double bqp_correlation_kernel(int i, int j, double correlation_length) {
  const double d = static_cast<double>(i - j);
  return std::exp(-d * d / (correlation_length * correlation_length));
}

double bqp_objective(const BqpInstance& instance, const BinaryVector& x) {
  require_dimension(instance.dimension, x, "bqp_objective");
  double quad = 0.0;
  for (int i = 0; i < instance.dimension; ++i) {
    if (!x.bit(i)) continue;
    for (int j = 0; j < instance.dimension; ++j) {
      if (x.bit(j)) quad += instance.payoff(i, j);
    }
  }
  return -(quad - instance.l1_penalty * x.ones_count());
}

ContaminationInstance ContaminationInstance::make(int stages, double l1_penalty,
                                                  std::uint64_t seed, double violation_penalty,
                                                  int trajectory_count, double epsilon,
                                                  double upper_limit, double stage_cost) {
  if (stages < 1) {
    throw std::invalid_argument("ContaminationInstance: stages must be positive");
  }
  if (trajectory_count < 1) {
    throw std::invalid_argument("ContaminationInstance: trajectory count must be positive");
  }
  ContaminationInstance out;
  out.stages = stages;
  out.stage_costs = Eigen::VectorXd::Constant(stages, stage_cost);
  out.upper_limits = Eigen::VectorXd::Constant(stages, upper_limit);
  out.violation_penalty = violation_penalty;
  out.trajectory_count = trajectory_count;
  out.epsilon = epsilon;
  out.l1_penalty = l1_penalty;
  out.seed = seed;

  std::mt19937_64 rng(seed);
  out.initial_fractions.resize(trajectory_count);
  out.spread_rates.resize(trajectory_count, stages);
  out.restore_rates.resize(trajectory_count, stages);
  for (int k = 0; k < trajectory_count; ++k) {
    out.initial_fractions(k) = beta_one_draw(rng, 30.0);
  }
  for (int k = 0; k < trajectory_count; ++k) {
    for (int i = 0; i < stages; ++i) {
      out.spread_rates(k, i) = beta_one_draw(rng, 17.0 / 3.0);
    }
  }
  for (int k = 0; k < trajectory_count; ++k) {
    for (int i = 0; i < stages; ++i) {
      out.restore_rates(k, i) = beta_one_draw(rng, 3.0 / 7.0);
    }
  }
  return out;
}

double contamination_objective(const ContaminationInstance& instance, const BinaryVector& x) {
  require_dimension(instance.stages, x, "contamination_objective");
  Eigen::VectorXd violations = Eigen::VectorXd::Zero(instance.stages);
  for (int k = 0; k < instance.trajectory_count; ++k) {
    double z = instance.initial_fractions(k);
    for (int i = 0; i < instance.stages; ++i) {
      // Z_i = Lambda_i (1 - x_i)(1 - Z_{i-1}) + (1 - Gamma_i x_i) Z_{i-1}
      if (x.bit(i)) {
        z = (1.0 - instance.restore_rates(k, i)) * z;
      } else {
        z = instance.spread_rates(k, i) * (1.0 - z) + z;
      }
      if (z > instance.upper_limits(i)) violations(i) += 1.0;
    }
  }

  double total = 0.0;
  const double per_trajectory = instance.violation_penalty / instance.trajectory_count;
  for (int i = 0; i < instance.stages; ++i) {
    if (x.bit(i)) total += instance.stage_costs(i);
    total += per_trajectory * violations(i);
  }
  return total + instance.l1_penalty * x.ones_count();
}

IsingInstance IsingInstance::make(int node_count, std::vector<std::pair<int, int>> edges,
                                  Eigen::VectorXd couplings, double l1_penalty) {
  if (node_count < 1 || node_count > 16) {
    throw std::invalid_argument("IsingInstance: node count must lie in [1, 16]");
  }
  if (couplings.size() != static_cast<Eigen::Index>(edges.size())) {
    throw std::invalid_argument("IsingInstance: one coupling per edge required");
  }
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count || a == b) {
      throw std::invalid_argument("IsingInstance: invalid edge");
    }
  }

  IsingInstance out;
  out.node_count = node_count;
  out.edges = std::move(edges);
  out.couplings = std::move(couplings);
  out.l1_penalty = l1_penalty;
  out.log_partition = ising_log_partition(out.node_count, out.edges, out.couplings);

  // E_p[z_i z_j] for every reference edge, by the same enumeration.
  const int edge_count = out.dimension();
  Eigen::VectorXd weighted_moments = Eigen::VectorXd::Zero(edge_count);
  double total_weight = 0.0;
  const std::uint32_t states = std::uint32_t{1} << out.node_count;
  for (std::uint32_t state = 0; state < states; ++state) {
    double energy = 0.0;
    for (int e = 0; e < edge_count; ++e) {
      const auto& [a, b] = out.edges[static_cast<std::size_t>(e)];
      const double za = (state >> a) & 1 ? 1.0 : -1.0;
      const double zb = (state >> b) & 1 ? 1.0 : -1.0;
      energy += out.couplings(e) * za * zb;
    }
    const double w = std::exp(energy - out.log_partition);
    total_weight += w;
    for (int e = 0; e < edge_count; ++e) {
      const auto& [a, b] = out.edges[static_cast<std::size_t>(e)];
      const double za = (state >> a) & 1 ? 1.0 : -1.0;
      const double zb = (state >> b) & 1 ? 1.0 : -1.0;
      weighted_moments(e) += w * za * zb;
    }
  }
  out.edge_moments = weighted_moments / total_weight;
  return out;
}

IsingInstance IsingInstance::make_grid(int side, double l1_penalty, std::uint64_t seed,
                                       double coupling_min, double coupling_max) {
  if (side < 2 || side * side > 16) {
    throw std::invalid_argument("IsingInstance: grid side must be 2, 3, or 4");
  }
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int node = r * side + c;
      if (c + 1 < side) edges.emplace_back(node, node + 1);
      if (r + 1 < side) edges.emplace_back(node, node + side);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coupling(coupling_min, coupling_max);
  Eigen::VectorXd couplings(static_cast<Eigen::Index>(edges.size()));
  for (Eigen::Index e = 0; e < couplings.size(); ++e) {
    couplings(e) = coupling(rng);
  }
  return make(side * side, std::move(edges), std::move(couplings), l1_penalty);
}

double ising_log_partition(int node_count, const std::vector<std::pair<int, int>>& edges,
                           const Eigen::VectorXd& couplings) {
  const std::uint32_t states = std::uint32_t{1} << node_count;
  // Max-shifted log-sum-exp over all spin assignments.
  double max_energy = -std::numeric_limits<double>::infinity();
  std::vector<double> energies(states);
  for (std::uint32_t state = 0; state < states; ++state) {
    double energy = 0.0;
    for (Eigen::Index e = 0; e < couplings.size(); ++e) {
      const auto& [a, b] = edges[static_cast<std::size_t>(e)];
      const double za = (state >> a) & 1 ? 1.0 : -1.0;
      const double zb = (state >> b) & 1 ? 1.0 : -1.0;
      energy += couplings(e) * za * zb;
    }
    energies[state] = energy;
    max_energy = std::max(max_energy, energy);
  }
  double sum = 0.0;
  for (double energy : energies) {
    sum += std::exp(energy - max_energy);
  }
  return max_energy + std::log(sum);
}

double ising_objective(const IsingInstance& instance, const BinaryVector& x) {
  require_dimension(instance.dimension(), x, "ising_objective");
  Eigen::VectorXd sparsified = instance.couplings;
  double dropped_term = 0.0;
  for (int e = 0; e < instance.dimension(); ++e) {
    if (!x.bit(e)) {
      sparsified(e) = 0.0;
      dropped_term += instance.couplings(e) * instance.edge_moments(e);
    }
  }
  const double log_zq = ising_log_partition(instance.node_count, instance.edges, sparsified);
  const double kl = dropped_term + log_zq - instance.log_partition;
  return kl + instance.l1_penalty * x.ones_count();
}

LabsInstance LabsInstance::make(int length) {
  if (length < 2) {
    throw std::invalid_argument("LabsInstance: length must be at least 2");
  }
  return {length};
}

double labs_objective(const LabsInstance& instance, const BinaryVector& x) {
  require_dimension(instance.length, x, "labs_objective");
  const int n = instance.length;
  std::vector<double> symbols(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    symbols[static_cast<std::size_t>(i)] = x.bit(i) ? 1.0 : -1.0;
  }
  double energy = 0.0;
  for (int k = 1; k < n; ++k) {
    double autocorrelation = 0.0;
    for (int i = 0; i + k < n; ++i) {
      autocorrelation += symbols[static_cast<std::size_t>(i)] * symbols[static_cast<std::size_t>(i + k)];
    }
    energy += autocorrelation * autocorrelation;
  }
  // The lag n-1 term is (s_1 s_n)^2 = 1, so energy >= 1 and the ratio is safe.
  return -static_cast<double>(n) * static_cast<double>(n) / energy;
}

}  // namespace cbo
