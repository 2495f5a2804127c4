#include "solb/graph.hpp"

#include <algorithm>
#include <deque>

namespace solb {

int port_of(const PortAdjacency& g, int u, int v) {
  for (const Half& h : g[u])
    if (h.to == v) return h.port;
  return -1;
}

int neighbor_at(const PortAdjacency& g, int u, int p) {
  for (const Half& h : g[u])
    if (h.port == p) return h.to;
  return -1;
}

std::vector<int> bfs_distances(const PortAdjacency& g, int src, const std::vector<char>& keep, int limit) {
  std::vector<int> dist(g.size(), -1);
  dist[src] = 0;
  std::deque<int> queue{src};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (limit >= 0 && dist[u] >= limit) continue;
    for (const Half& h : g[u]) {
      if (dist[h.to] >= 0 || (!keep.empty() && !keep[h.to])) continue;
      dist[h.to] = dist[u] + 1;
      queue.push_back(h.to);
    }
  }
  return dist;
}

bool is_ported_tree(const PortAdjacency& g, int max_port, bool dense) {
  std::size_t ends = 0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    std::vector<int> ports;
    for (const Half& h : g[u]) {
      if (h.to < 0 || static_cast<std::size_t>(h.to) >= g.size() || h.to == static_cast<int>(u)) return false;
      if (port_of(g, h.to, static_cast<int>(u)) < 0) return false;
      ports.push_back(h.port);
    }
    std::sort(ports.begin(), ports.end());
    for (std::size_t k = 0; k < ports.size(); ++k) {
      if (ports[k] < 1 || ports[k] > max_port || (k > 0 && ports[k] == ports[k - 1])) return false;
      if (dense && ports[k] != static_cast<int>(k) + 1) return false;
    }
    ends += g[u].size();
  }
  if (g.empty()) return true;
  if (ends != 2 * (g.size() - 1)) return false;
  auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

}  // namespace solb
