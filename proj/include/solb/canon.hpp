#pragma once

#include <map>
#include <vector>

#include "solb/graph.hpp"

namespace solb {

struct FormOptions {
  // Restrict to the nodes with keep[v] set; every node when empty.
  std::vector<char> keep;
  // Ports at these nodes are ignored; the node's children are compared as a
  // multiset instead.
  std::vector<char> port_free;
  // False ignores all ports, giving plain unordered rooted-tree forms.
  bool ported = true;
};

// Interning table for canonical forms of rooted trees, in the manner of the
// Aho-Hopcroft-Ullman tuple encoding. A node's form is the sorted list of
// (port at node, port at child, form of child) triples. Ids are only
// comparable within one table.
class FormTable {
 public:
  // Form of the subtree at root when the tree is hung from root; `from` is the
  // excluded parent side, -1 to use the whole tree.
  int rooted(const PortAdjacency& g, int root, int from = -1, const FormOptions& opt = {});

  // Form of the whole tree up to isomorphism: the smaller form over the one or
  // two centres. Throws usage_error if the kept nodes are not connected.
  int unrooted(const PortAdjacency& g, const FormOptions& opt = {});

  std::size_t size() const { return ids_.size(); }

 private:
  int intern(std::vector<int> key);
  std::map<std::vector<int>, int> ids_;
};

// Port-preserving isomorphism test for two rooted trees given as (graph, root,
// excluded parent) with all ports significant.
bool same_ported_subtree(const PortAdjacency& g, int a, int a_from, const PortAdjacency& h, int b, int b_from);

}  // namespace solb
