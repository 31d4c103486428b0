#pragma once

#include <vector>

#include "responsum/taylor.hpp"
#include "responsum/types.hpp"

namespace responsum {

/// Which diagram family applies: Autonomous trees (vector-forced kind)
/// forbid unary internal nodes and carry mode labels only on end nodes;
/// Forced trees (potential-forced kind) allow unary nodes and label every
/// node.
enum class TreeFamily { Autonomous, Forced };

inline constexpr int kTreeOrderCeilingAutonomous = 6;
inline constexpr int kTreeOrderCeilingForced = 5;

/// Rooted tree with ordered children, node 0 being the node the root line
/// exits; nodes are stored in preorder. Children are kept in enumeration
/// order so that the sum over trees matches the recursion's ordered sums
/// term by term.
struct TreeTopology {
  TreeFamily family = TreeFamily::Autonomous;
  std::vector<int> parent;                 // -1 for the root node
  std::vector<std::vector<int>> children;  // ordered

  int order() const { return static_cast<int>(parent.size()); }
  bool is_end(int v) const { return children[v].empty(); }
  int degree(int v) const { return static_cast<int>(children[v].size()); }
};

/// Topology plus admissible mode labels; momentum[v] is the momentum of the
/// line exiting node v (the root line for v = 0), equal to the label sum
/// over the subtree rooted at v.
struct LabelledTree {
  TreeTopology topology;
  std::vector<Mode> node_mode;
  std::vector<Mode> momentum;

  const Mode& root_momentum() const { return momentum[0]; }
};

/// Maximal run of connected unary internal nodes, listed root-side first.
struct Chain {
  std::vector<int> nodes;
  int length() const { return static_cast<int>(nodes.size()); }
};

struct CountingReport {
  TreeFamily family = TreeFamily::Autonomous;
  int k = 0;
  int n_end = 0;
  int n_unary = 0;
  int n_chains = 0;
  // Autonomous: lhs = 2|E|, rhs = k+1; Forced: lhs = 4|E| + 2|V1| - 2|chains|,
  // rhs = k+2.
  int lhs = 0;
  int rhs = 0;
  bool ok = false;
};

struct OracleResult {
  CVec value;
  long tree_count = 0;       // labelled trees with the requested root momentum
  long labelled_total = 0;   // labelled trees enumerated at this order
  long counting_failures = 0;
};

/// All ordered rooted trees with k nodes under the family's degree rule.
/// Throws OrderTooLarge beyond the family ceiling.
std::vector<TreeTopology> enumerate_topologies(int k, TreeFamily family);

/// All admissible labellings of one topology. mode_support lists the driving
/// modes (the zero mode is filtered per node class); zeta_allowed admits
/// zero-labelled end nodes.
std::vector<LabelledTree> enumerate_labelled(const TreeTopology& topology,
                                             const std::vector<Mode>& mode_support,
                                             bool zeta_allowed);

/// Contract node factors and line propagators over the tree; returns the
/// m-vector carried by the root line.
CVec tree_value(const LabelledTree& tree, double eps, const Vec& zeta,
                const TaylorTensors& tensors, const SystemSpec& spec);

/// Sum of tree_value over every labelled tree of order k with root momentum
/// nu, plus enumeration statistics. Throws OrderTooLarge beyond the ceiling.
OracleResult oracle_sum(int k, const Mode& nu, double eps, const Vec& zeta,
                        const TaylorTensors& tensors, const SystemSpec& spec);

/// Convenience wrapper returning only the coefficient.
CVec oracle_coefficient(int k, const Mode& nu, double eps, const Vec& zeta,
                        const TaylorTensors& tensors, const SystemSpec& spec);

std::vector<Chain> find_chains(const LabelledTree& tree);

CountingReport check_counting(const LabelledTree& tree);

/// Product of exit-line propagators and unary node factors along a chain,
/// root-side factor first.
CMat chain_value(const LabelledTree& tree, const Chain& chain, double eps,
                 const TaylorTensors& tensors, const SystemSpec& spec);

}  // namespace responsum
