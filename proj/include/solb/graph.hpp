#pragma once

#include <vector>

namespace solb {

// One end of an undirected edge: the neighbour and the port number this node
// assigns to the edge.
struct Half {
  int to = -1;
  int port = 0;
  friend bool operator==(const Half&, const Half&) = default;
};

// Adjacency lists of a port-numbered graph; node ids are dense indices.
using PortAdjacency = std::vector<std::vector<Half>>;

// Port that u assigns to the edge {u, v}, or -1 when they are not adjacent.
int port_of(const PortAdjacency& g, int u, int v);

// Neighbour of u behind port p, or -1.
int neighbor_at(const PortAdjacency& g, int u, int p);

// Breadth-first distances from src over nodes with keep[v] set (all nodes when
// keep is empty); unreachable nodes get -1. A positive limit stops expansion
// beyond that distance.
std::vector<int> bfs_distances(const PortAdjacency& g, int src, const std::vector<char>& keep = {}, int limit = -1);

// True when g is a tree with pairwise distinct ports in 1..max_port at every
// node; with dense set, the ports at every node must be exactly 1..deg.
bool is_ported_tree(const PortAdjacency& g, int max_port, bool dense);

}  // namespace solb
