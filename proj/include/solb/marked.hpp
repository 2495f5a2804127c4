#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "solb/ctree.hpp"
#include "solb/graph.hpp"
#include "solb/labelings.hpp"

namespace solb {

// A tree of maximum degree delta whose nodes carry a label and a mark. Node
// ids are persistent: operations only append nodes and never renumber.
class MarkedTree {
 public:
  MarkedTree() = default;
  explicit MarkedTree(int delta) : delta_(delta) {}

  // The two-node graph 1 - 2, unmarked, port 1 at both ends.
  static MarkedTree seed(int delta);

  int delta() const { return delta_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const Label& label(int v) const { return labels_[v]; }
  bool marked(int v) const { return marked_[v] != 0; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<Half>& neighbors(int v) const { return adj_[v]; }
  const PortAdjacency& adjacency() const { return adj_; }

  // A 2-node (1-node) has symbol 2 (1) at position 0 of its label.
  bool is_two_node(int v) const { return labels_[v].at(0) == '2'; }
  bool is_one_node(int v) const { return labels_[v].at(0) == '1'; }
  bool is_leaf(int v) const { return adj_[v].size() == 1; }
  bool is_two_leaf(int v) const { return is_leaf(v) && is_two_node(v); }

  std::optional<int> find(const std::string& label) const;
  int marked_count() const;

  // Nodes of the maximal unmarked connected component containing v (v first),
  // empty if v is marked.
  std::vector<int> component(int v) const;
  // Every unmarked component, each listed from its smallest node id.
  std::vector<std::vector<int>> components() const;

  int add_node(Label label, bool marked = false);
  void add_edge(int u, int pu, int v, int pv);
  void set_label(int v, Label l);
  // Renumbers v's end of the edge {v, to}.
  void set_port(int v, int to, int port);
  void set_marked(int v, bool m) { marked_[v] = m; }

 private:
  int delta_ = 0;
  std::vector<Label> labels_;
  std::vector<char> marked_;
  PortAdjacency adj_;
  std::unordered_map<std::string, int> index_;
};

// Reflection at the unmarked leaf v. v must be a 2-leaf, except that the
// 1-leaf of the two-node seed is also accepted. Copy i of v's unmarked
// component gets fresh ids (the original is copy 1); every copied node other
// than v gets symbol i prepended, v gets *, and port i at v leads into copy i.
// Copies keep the original's ports. Throws usage_error on a violated
// precondition.
void reflect(MarkedTree& G, int v);

// Marks the unmarked node v. Throws usage_error if v is already marked.
void split(MarkedTree& G, int v);

enum class Op { reflect, split };
const char* to_string(Op op);

// An unmarked component and the tail of the construction-tree edge it stands for.
struct ComponentMatch {
  int tail = -1;
  int representative = -1;  // smallest node id in the component
  int size = 0;
};

struct BuildStep {
  int index = 0;   // 1-based
  int tnode = -1;  // node of T processed at this step
  Op op = Op::reflect;
  int target = -1;  // node of G^(i-1) the operation acts on
  Label target_label;
  int component_size = 0;  // size of the target's unmarked component before the op
  // Minimum distance from the target to a 2-leaf of its component, for split
  // steps; -1 if the component holds no 2-leaf.
  int two_leaf_distance = -1;
  std::vector<ComponentMatch> components;  // after the op, when invariants are checked
};

struct BuildOptions {
  bool check_invariants = true;
  bool keep_snapshots = false;  // store G^(0..N) in the trace
  std::uint64_t node_budget = std::uint64_t{1} << 27;
};

struct BuildTrace {
  int delta = 0;
  std::vector<int> order;  // processing order of T's nodes
  std::vector<BuildStep> steps;
  std::vector<int> mirror;  // [T node] -> reflection center id, -1 for split nodes
  MarkedTree final;
  std::vector<MarkedTree> snapshots;  // G^(0), ..., G^(N) when requested
};

// Breadth-first order of T (layer by layer, children in stored order).
std::vector<int> layer_order(const ConstructionTree& T);
// Depth-first pre-order of T.
std::vector<int> preorder(const ConstructionTree& T);

// Runs T's reflect/split program from the seed. With invariant checking on,
// every step asserts: a unique node carries the target label; the target has
// the right class; labels are distinct and independent; unmarked components
// correspond one-to-one to the frontier edges of T with 2-leaf labels equal to
// psi and the other labels equal to pi; 2-nodes are leaves or have full degree
// inside their component and 1-nodes and 2-nodes alternate. A failure throws
// invariant_error naming the step and the clause. Throws usage_error if the
// order is not ancestor-first and capacity_error past the node budget.
BuildTrace build_input_tree(const ConstructionTree& T, const std::vector<int>& order = {},
                            const BuildOptions& opt = {});

// Digit agreement test: v and w are predicted to be adjacent iff their labels
// agree at every position 1..len-1 where both carry a digit. Positions beyond
// the shorter label are not compared. Throws usage_error unless v != w and
// both are unmarked.
bool neighbor_oracle(const MarkedTree& G, int v, int w);

enum class DistanceMode { full, path_only };

struct DistanceReport {
  int minimum = -1;  // -1 when no split step had a 2-leaf in its component
  int splits_checked = 0;
  int witness_step = 0;
  Label witness_label;  // split target attaining the minimum
  long max_component = 0;
};

// Minimum over split steps of the distance from the split target to the
// nearest 2-leaf of its unmarked component. Path-only mode follows the
// root-leaf path through first children and keeps only the component the path
// continues in.
DistanceReport check_distance_correct(const ConstructionTree& T, DistanceMode mode,
                                      std::uint64_t node_budget = std::uint64_t{1} << 27);

enum class CanonicalOrder {
  deepest_first,   // reflect layers from the deepest up, lexicographic within a layer
  layer_ascending  // reflect layers from the root down, lexicographic within a layer
};

// Reflect nodes of T in the given order.
std::vector<int> canonical_reflect_order(const ConstructionTree& T, CanonicalOrder order);

// Mirror nodes of the final graph matched to the reflect nodes in the given
// order: w_i is the unique mirror node whose label ends with the label of u_i.
// Throws invariant_error if a match is missing or not unique, or disagrees
// with the trace's mirror map.
std::vector<int> canonical_sequence(const ConstructionTree& T, const BuildTrace& trace,
                                    CanonicalOrder order = CanonicalOrder::deepest_first);

struct SymmetricViewFailure {
  int index = 0;  // 1-based position in W
  int port_a = 0;
  int port_b = 0;
};

struct SymmetricViewReport {
  int pairs_checked = 0;
  std::vector<SymmetricViewFailure> failures;
  std::vector<int> view_sizes;  // |W_i| for i = 1..|W|-1
  bool ok() const { return failures.empty(); }
};

// The node set W_i seen from w_i with locality D - 1, restricted to nodes
// whose path from w_i avoids w_1..w_(i-1). i is 1-based.
std::vector<int> symmetric_view_set(const MarkedTree& G, const std::vector<int>& W, int i, int D);

// For every i < |W| and every pair of edges at w_i, compares the parts of
// G[W_i] behind the two edges by ported canonical forms (ports at w_i ignored).
SymmetricViewReport check_symmetric_view(const MarkedTree& G, const std::vector<int>& W, int D);

}  // namespace solb
