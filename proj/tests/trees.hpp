#pragma once
// Small ported trees for tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "solb/graph.hpp"

namespace trees {

// Tree on n nodes from random parents, ports shuffled within 1..deg.
inline solb::PortAdjacency random_tree(int n, std::mt19937_64& rng, int max_degree = 1 << 20) {
  solb::PortAdjacency g(n);
  for (int v = 1; v < n; ++v) {
    int p;
    do p = static_cast<int>(rng() % v);
    while (static_cast<int>(g[p].size()) >= max_degree);
    g[p].push_back({v, 0});
    g[v].push_back({p, 0});
  }
  for (auto& list : g) {
    std::vector<int> ports(list.size());
    std::iota(ports.begin(), ports.end(), 1);
    std::shuffle(ports.begin(), ports.end(), rng);
    for (std::size_t k = 0; k < list.size(); ++k) list[k].port = ports[k];
  }
  return g;
}

// Path 0 - 1 - ... - (n-1); port 1 points towards node 0 except at node 0.
inline solb::PortAdjacency path(int n) {
  solb::PortAdjacency g(n);
  for (int v = 0; v + 1 < n; ++v) {
    g[v].push_back({v + 1, v == 0 ? 1 : 2});
    g[v + 1].push_back({v, 1});
  }
  return g;
}

// All-pairs distances by repeated breadth-first search, written out plainly.
inline std::vector<std::vector<int>> distances(const solb::PortAdjacency& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::vector<int> frontier{s};
    d[s][s] = 0;
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int u : frontier)
        for (const auto& h : g[u])
          if (d[s][h.to] < 0) {
            d[s][h.to] = d[s][u] + 1;
            next.push_back(h.to);
          }
      frontier = std::move(next);
    }
  }
  return d;
}

}  // namespace trees
