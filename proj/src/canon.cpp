#include "solb/canon.hpp"

#include <algorithm>
#include <array>

#include "solb/errors.hpp"

namespace solb {

namespace {

bool kept(const FormOptions& opt, int v) { return opt.keep.empty() || opt.keep[v]; }
bool free_at(const FormOptions& opt, int v) { return !opt.ported || (!opt.port_free.empty() && opt.port_free[v]); }

}  // namespace

int FormTable::intern(std::vector<int> key) {
  auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<int>(ids_.size()));
  return it->second;
}

int FormTable::rooted(const PortAdjacency& g, int root, int from, const FormOptions& opt) {
  if (!kept(opt, root)) throw usage_error("root is outside the kept node set");
  // Iterative post-order: (node, parent, next neighbour index).
  std::vector<std::array<int, 3>> stack{{root, from, 0}};
  std::vector<int> form(g.size(), -1);
  while (!stack.empty()) {
    auto& [v, parent, next] = stack.back();
    if (next < static_cast<int>(g[v].size())) {
      const Half& h = g[v][next++];
      if (h.to != parent && kept(opt, h.to)) stack.push_back({h.to, v, 0});
      continue;
    }
    std::vector<std::array<int, 3>> entries;
    for (const Half& h : g[v]) {
      if (h.to == parent || !kept(opt, h.to)) continue;
      int pv = free_at(opt, v) ? 0 : h.port;
      int pc = free_at(opt, h.to) ? 0 : port_of(g, h.to, v);
      entries.push_back({pv, pc, form[h.to]});
    }
    std::sort(entries.begin(), entries.end());
    std::vector<int> key;
    key.reserve(entries.size() * 3);
    for (const auto& e : entries) key.insert(key.end(), e.begin(), e.end());
    form[v] = intern(std::move(key));
    stack.pop_back();
  }
  return form[root];
}

int FormTable::unrooted(const PortAdjacency& g, const FormOptions& opt) {
  const int n = static_cast<int>(g.size());
  std::vector<int> degree(n, 0);
  std::vector<int> leaves;
  int alive = 0;
  for (int v = 0; v < n; ++v) {
    if (!kept(opt, v)) continue;
    ++alive;
    for (const Half& h : g[v])
      if (kept(opt, h.to)) ++degree[v];
    if (degree[v] <= 1) leaves.push_back(v);
  }
  if (alive == 0) throw usage_error("empty tree has no canonical form");
  int start = leaves.empty() ? 0 : leaves[0];
  auto reach = bfs_distances(g, start, opt.keep);
  int reached = 0;
  for (int v = 0; v < n; ++v)
    if (kept(opt, v) && reach[v] >= 0) ++reached;
  if (reached != alive) throw usage_error("kept nodes do not form a connected tree");

  // Strip leaves layer by layer; the last one or two survivors are the centres.
  int remaining = alive;
  while (remaining > 2) {
    std::vector<int> next;
    for (int v : leaves) {
      --remaining;
      degree[v] = -1;
      for (const Half& h : g[v])
        if (kept(opt, h.to) && degree[h.to] > 0 && --degree[h.to] == 1) next.push_back(h.to);
    }
    leaves = std::move(next);
  }
  int best = -1;
  for (int v = 0; v < n; ++v) {
    if (!kept(opt, v) || degree[v] < 0) continue;
    int f = rooted(g, v, -1, opt);
    best = best < 0 ? f : std::min(best, f);
  }
  return best;
}

bool same_ported_subtree(const PortAdjacency& g, int a, int a_from, const PortAdjacency& h, int b, int b_from) {
  FormTable t;
  return t.rooted(g, a, a_from) == t.rooted(h, b, b_from);
}

}  // namespace solb
