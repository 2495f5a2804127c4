#pragma once

#include <vector>

#include "solb/ctree.hpp"

namespace solb {

// psi and pi of one edge, each sorted.
struct EdgeSets {
  std::vector<Label> psi;
  std::vector<Label> pi;
  friend bool operator==(const EdgeSets&, const EdgeSets&) = default;
};

// Edges are named by their tail (the child endpoint); the entry of the root is
// empty because the root has no parent edge.
struct EdgeLabeling {
  std::vector<EdgeSets> by_tail;
  const EdgeSets& at(int tail) const { return by_tail.at(tail); }
};

// The sets on the edge whose head is the root: psi = {i2}, pi = {*1}.
EdgeSets root_edge_sets(int delta);

// Sets on edge (tail, head) from the sets on the edge leaving head upwards.
EdgeSets child_edge_sets(const ConstructionTree& T, const EdgeSets& up, int tail);

EdgeLabeling compute_labelings(const ConstructionTree& T);

// Sets on the parent edge of tail, computed along the root path only.
EdgeSets labelings_on_path(const ConstructionTree& T, int tail);

}  // namespace solb
