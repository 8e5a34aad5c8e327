#include "cbo/flow_network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace cbo {

FlowNetwork::FlowNetwork(int variable_count) : variable_count_(variable_count) {
  if (variable_count < 0) {
    throw std::invalid_argument("FlowNetwork: variable count must be non-negative");
  }
  incident_.assign(static_cast<std::size_t>(variable_count), 0);
}

void FlowNetwork::add_edge(int from, int to, double capacity) {
  if (from < 0 || from >= node_count() || to < 0 || to >= node_count()) {
    throw std::invalid_argument("FlowNetwork::add_edge: node id out of range");
  }
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
    throw std::invalid_argument("FlowNetwork::add_edge: capacity must be finite and non-negative");
  }
  if (to == source()) {
    throw std::invalid_argument("FlowNetwork::add_edge: no edge may enter the source");
  }
  if (from == sink()) {
    throw std::invalid_argument("FlowNetwork::add_edge: no edge may leave the sink");
  }
  if (from == to) {
    throw std::invalid_argument("FlowNetwork::add_edge: self-loops are not allowed");
  }
  edges_.push_back({from, to, capacity});
  if (from < variable_count_) incident_[static_cast<std::size_t>(from)] = 1;
  if (to < variable_count_) incident_[static_cast<std::size_t>(to)] = 1;
}

bool FlowNetwork::touches_any_edge(int variable) const {
  return incident_[static_cast<std::size_t>(variable)] != 0;
}

namespace {

// Residual graph in the usual paired-arc layout: arc 2k is the k-th input
// edge, arc 2k+1 its reverse.
struct Residual {
  struct Arc {
    int to;
    double remaining;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adjacency;

  explicit Residual(const FlowNetwork& g) : adjacency(g.node_count()) {
    arcs.reserve(2 * g.edges().size());
    for (const FlowNetwork::Edge& e : g.edges()) {
      adjacency[e.from].push_back(static_cast<int>(arcs.size()));
      arcs.push_back({e.to, e.capacity});
      adjacency[e.to].push_back(static_cast<int>(arcs.size()));
      arcs.push_back({e.from, 0.0});
    }
  }
};

class DinicSolver {
 public:
  explicit DinicSolver(const FlowNetwork& g)
      : residual_(g), source_(g.source()), sink_(g.sink()),
        level_(g.node_count()), next_arc_(g.node_count()) {}

  double run() {
    double total = 0.0;
    while (build_levels()) {
      std::fill(next_arc_.begin(), next_arc_.end(), 0);
      while (true) {
        const double pushed = augment(source_, std::numeric_limits<double>::infinity());
        if (pushed <= 0.0) break;
        total += pushed;
      }
    }
    return total;
  }

  /// Nodes reachable from the source through arcs with remaining capacity.
  std::vector<char> residual_reachable() const {
    std::vector<char> seen(level_.size(), 0);
    std::queue<int> frontier;
    seen[static_cast<std::size_t>(source_)] = 1;
    frontier.push(source_);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int arc : residual_.adjacency[u]) {
        const auto& a = residual_.arcs[static_cast<std::size_t>(arc)];
        if (a.remaining > 0.0 && !seen[static_cast<std::size_t>(a.to)]) {
          seen[static_cast<std::size_t>(a.to)] = 1;
          frontier.push(a.to);
        }
      }
    }
    return seen;
  }

  /// Flow on the k-th input edge: reverse-arc remaining capacity.
  double edge_flow(std::size_t k) const { return residual_.arcs[2 * k + 1].remaining; }

 private:
  bool build_levels() {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> frontier;
    level_[static_cast<std::size_t>(source_)] = 0;
    frontier.push(source_);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int arc : residual_.adjacency[u]) {
        const auto& a = residual_.arcs[static_cast<std::size_t>(arc)];
        if (a.remaining > 0.0 && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          frontier.push(a.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink_)] >= 0;
  }

  double augment(int u, double limit) {
    if (u == sink_) return limit;
    auto& cursor = next_arc_[static_cast<std::size_t>(u)];
    for (; cursor < static_cast<int>(residual_.adjacency[u].size()); ++cursor) {
      const int arc = residual_.adjacency[u][static_cast<std::size_t>(cursor)];
      auto& forward = residual_.arcs[static_cast<std::size_t>(arc)];
      if (forward.remaining <= 0.0) continue;
      if (level_[static_cast<std::size_t>(forward.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
      const double pushed = augment(forward.to, std::min(limit, forward.remaining));
      if (pushed > 0.0) {
        forward.remaining -= pushed;
        residual_.arcs[static_cast<std::size_t>(arc ^ 1)].remaining += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  Residual residual_;
  int source_;
  int sink_;
  std::vector<int> level_;
  std::vector<int> next_arc_;
};

}  // namespace

MaxFlowCertificate solve_max_flow(const FlowNetwork& g) {
  DinicSolver solver(g);
  MaxFlowCertificate out;
  out.value = solver.run();
  out.edge_flows.reserve(g.edges().size());
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    out.edge_flows.push_back(solver.edge_flow(k));
  }
  return out;
}

CutResult solve_min_cut(const FlowNetwork& g) {
  DinicSolver solver(g);
  solver.run();
  const std::vector<char> reachable = solver.residual_reachable();

  CutResult out;
  for (int v = 0; v < g.variable_count(); ++v) {
    if (reachable[static_cast<std::size_t>(v)]) {
      out.source_side.push_back(v);
    }
  }
  // Summing crossing capacities directly keeps the reported value consistent
  // with the returned partition.
  for (const FlowNetwork::Edge& e : g.edges()) {
    if (reachable[static_cast<std::size_t>(e.from)] && !reachable[static_cast<std::size_t>(e.to)]) {
      out.cut_value += e.capacity;
    }
  }
  return out;
}

}  // namespace cbo
