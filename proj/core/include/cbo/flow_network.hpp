#pragma once

#include <vector>

namespace cbo {

/// Capacitated directed s-t network over a fixed set of variable nodes.
/// Node ids 0..variable_count-1 are the variable nodes; source() and sink()
/// are the two terminals. Parallel edges are allowed and behave as if their
/// capacities were summed. Edges into the source or out of the sink are
/// rejected, as are negative capacities.
class FlowNetwork {
 public:
  struct Edge {
    int from;
    int to;
    double capacity;
  };

  explicit FlowNetwork(int variable_count);

  int variable_count() const { return variable_count_; }
  int node_count() const { return variable_count_ + 2; }
  int source() const { return variable_count_; }
  int sink() const { return variable_count_ + 1; }

  void add_edge(int from, int to, double capacity);

  const std::vector<Edge>& edges() const { return edges_; }

  /// True when at least one edge touches the given variable node.
  bool touches_any_edge(int variable) const;

 private:
  int variable_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<char> incident_;
};

struct CutResult {
  double cut_value = 0.0;
  /// Variable nodes reachable from the source in the residual graph of a
  /// maximum flow, in ascending order.
  std::vector<int> source_side;
};

struct MaxFlowCertificate {
  double value = 0.0;
  /// Per-edge flow, aligned with FlowNetwork::edges().
  std::vector<double> edge_flows;
};

/// Exact maximum s-t flow (Dinic's algorithm; strongly polynomial, so real
/// capacities are fine). The certificate satisfies conservation at every
/// variable node and 0 <= flow <= capacity on every edge.
MaxFlowCertificate solve_max_flow(const FlowNetwork& g);

/// Exact minimum s-t cut via max-flow/min-cut duality. cut_value is the sum
/// of capacities of edges leaving source_side union {s}, which equals the
/// maximum flow value.
CutResult solve_min_cut(const FlowNetwork& g);

}  // namespace cbo
