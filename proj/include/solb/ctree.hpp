#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solb/label.hpp"

namespace solb {

enum class NodeKind { reflect, split };
enum class LayerKind { reflect, internal_split, leaf_split };

const char* to_string(NodeKind k);
const char* to_string(LayerKind k);

// Rooted, ordered, labeled tree. Node ids are dense indices 0..n-1; children
// are stored in one contiguous array (CSR) so that multi-million node trees
// stay compact.
class ConstructionTree {
 public:
  ConstructionTree() = default;
  // Throws usage_error on structural problems: not exactly one root, parent
  // and child lists disagreeing, cycles.
  ConstructionTree(int b, std::vector<int> parent, std::vector<Label> labels,
                   const std::vector<std::vector<int>>& children);
  // CSR form: children of v are child_ids[child_begin[v] .. child_begin[v+1]).
  ConstructionTree(int b, std::vector<int> parent, std::vector<Label> labels,
                   std::vector<std::uint32_t> child_begin, std::vector<int> child_ids);

  int b() const { return b_; }
  int size() const { return static_cast<int>(parent_.size()); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  std::span<const int> children(int v) const {
    return {child_ids_.data() + child_begin_[v], child_ids_.data() + child_begin_[v + 1]};
  }
  int child_count(int v) const { return static_cast<int>(child_begin_[v + 1] - child_begin_[v]); }
  const Label& label(int v) const { return labels_[v]; }
  // 1-based layer index (1 + distance from the root).
  int layer(int v) const { return depth_[v]; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const std::vector<int>& layer_members(int i) const { return layers_[i - 1]; }
  NodeKind kind(int v) const { return child_count(v) == 1 ? NodeKind::reflect : NodeKind::split; }

  void set_label(int v, Label l) { labels_[v] = std::move(l); }

 private:
  void finish();

  int b_ = 0;
  int root_ = -1;
  std::vector<int> parent_;
  std::vector<Label> labels_;
  std::vector<std::uint32_t> child_begin_;
  std::vector<int> child_ids_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> layers_;
};

struct PhiResult {
  bool ok = false;
  std::map<int, int> phi;  // reflect layer index -> split layer index
  std::string violated;    // first violated clause when !ok
};

// Layer kinds as reflect=true/split=false, layer 1 first.
PhiResult compute_phi(const std::vector<bool>& is_reflect_layer);

// Layer-level annotations of a well-nested tree.
struct Skeleton {
  std::vector<LayerKind> kinds;     // [layer-1]
  std::map<int, int> phi;           // reflect layer -> split layer
  std::vector<int> reflect_index;   // [layer-1], 0 for split layers
  std::vector<int> split_index;     // [layer-1], 0 for reflect layers
  std::vector<int> reflect_layer;   // [reflect index - 1] -> layer index
  int reflect_count() const { return static_cast<int>(reflect_layer.size()); }
};

// Throws usage_error when T is not b-balanced and well-nested.
Skeleton skeleton(const ConstructionTree& T);

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string witness;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  const CheckResult* find(const std::string& name) const;
  std::string first_failure() const;
};

ValidationReport validate(const ConstructionTree& T);

// T_2 for any delta >= 3 with b = delta: reflect groups d = 1..delta with
// labels x_d..x_2 d 2, each followed by its split layer, then the leaves.
ConstructionTree build_t2(int delta);
// Reflect labels of the delta = 3 scheme with delta substituted verbatim
// (1, 12, j22, kj32). Not clearing for delta > 3.
std::vector<Label> literal_t2_reflect_labels(int delta);

// Child of an internal split node whose label has symbol j at v's split index.
int jth_child(const ConstructionTree& T, const Skeleton& sk, int v, int j);

// Labels of all reflect nodes, in node order.
std::vector<Label> reflect_labels(const ConstructionTree& T);

// Number of reflect nodes strictly above v.
int reflect_ancestors(const ConstructionTree& T, int v);

}  // namespace solb
