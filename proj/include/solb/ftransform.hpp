#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "solb/ctree.hpp"
#include "solb/tower.hpp"

namespace solb {

struct DfsEntry {
  int node = -1;       // reflect node of T
  bool late = false;   // second appearance
  int lambda = 0;      // late entries strictly before this one
  int early_rank = 0;  // of the node, shared by both appearances
};

struct DfsSequence {
  std::vector<DfsEntry> entries;
  int reflect_count() const { return static_cast<int>(entries.size() / 2); }
};

// Depth-first traversal visiting the j-th child of a split node before the
// (j+1)-th; each reflect node is recorded when first entered and when left.
DfsSequence dfs_sequence(const ConstructionTree& T);

struct FLayer {
  int source = -1;     // reflect node of T
  bool late = false;
  int early_rank = 0;
  LayerKind kind = LayerKind::reflect;
  // Padded label of the source (star-prefixed for split layers).
  PaddedLabel pattern;
  // Free positions in the order they became free; node digits follow this order.
  std::vector<int> free_order;
  BigInt size;         // b^|free positions|
  int split_index = 0;  // star position for split layers
};

// A node of an implicit tree: layer (1-based) plus one digit in 1..b per free
// position, oldest free position first.
struct FAddress {
  int layer = 0;
  std::vector<int> digits;
  friend bool operator==(const FAddress&, const FAddress&) = default;
};

class ImplicitFTree {
 public:
  ImplicitFTree(int b, DfsSequence q, std::vector<FLayer> layers);

  int b() const { return b_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const FLayer& layer(int i) const { return layers_.at(i - 1); }
  const DfsSequence& sequence() const { return q_; }
  BigInt total_nodes() const;

  Label label(const FAddress& a) const;
  std::optional<FAddress> parent(const FAddress& a) const;
  std::vector<FAddress> children(const FAddress& a) const;

  // Position of a within its layer in mixed radix b, oldest digit most significant.
  BigInt index_of(const FAddress& a) const;
  FAddress address_at(int layer, const BigInt& index) const;

 private:
  void check(const FAddress& a) const;
  int b_;
  DfsSequence q_;
  std::vector<FLayer> layers_;
};

ImplicitFTree f_implicit(const ConstructionTree& T);

struct FNode {
  Label label;
  std::optional<FAddress> parent;
  std::vector<FAddress> children;
};

// Throws usage_error on an out-of-range layer or assignment.
FNode implicit_node(const ImplicitFTree& I, int layer, const std::vector<int>& digits);

constexpr std::uint64_t kDefaultNodeBudget = std::uint64_t{1} << 27;

// Node id order is layer by layer, and within a layer by index_of. With a layer
// limit only the first layers are produced. Throws capacity_error when the node
// count exceeds the budget.
ConstructionTree f_materialize(const ImplicitFTree& I, std::optional<int> layer_limit = std::nullopt,
                               std::uint64_t budget = kDefaultNodeBudget);

// First node id of each layer in f_materialize's numbering (size layer_count + 1).
std::vector<std::uint64_t> layer_offsets(const ImplicitFTree& I);

}  // namespace solb
