#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "solb/canon.hpp"
#include "solb/errors.hpp"

using namespace solb;

namespace {

// Random tree on n nodes (random parent for each node) with random port
// numbers 1..deg at every node.
PortAdjacency random_tree(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(static_cast<int>(rng() % v), v);
  PortAdjacency g(n);
  for (auto [a, b] : edges) {
    g[a].push_back({b, 0});
    g[b].push_back({a, 0});
  }
  for (auto& list : g) {
    std::vector<int> ports(list.size());
    std::iota(ports.begin(), ports.end(), 1);
    std::shuffle(ports.begin(), ports.end(), rng);
    for (std::size_t k = 0; k < list.size(); ++k) list[k].port = ports[k];
  }
  return g;
}

PortAdjacency relabel(const PortAdjacency& g, const std::vector<int>& perm) {
  PortAdjacency h(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    for (const Half& e : g[v]) h[perm[v]].push_back({perm[e.to], e.port});
  return h;
}

bool has_edge(const PortAdjacency& g, int a, int b) { return port_of(g, a, b) >= 0; }

// Oracle: try every bijection.
bool brute_isomorphic(const PortAdjacency& g, const PortAdjacency& h, bool ported) {
  const int n = static_cast<int>(g.size());
  if (h.size() != g.size()) return false;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (has_edge(g, a, b) != has_edge(h, p[a], p[b])) ok = false;
        else if (ported && has_edge(g, a, b) && port_of(g, a, b) != port_of(h, p[a], p[b])) ok = false;
      }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

}  // namespace

TEST_CASE("unrooted forms agree with brute-force isomorphism") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    int n = 1 + static_cast<int>(rng() % 7);
    auto g = random_tree(n, rng);
    auto h = rng() % 3 == 0 ? random_tree(n, rng) : [&] {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      return relabel(g, perm);
    }();
    for (bool ported : {false, true}) {
      FormTable t;
      FormOptions opt;
      opt.ported = ported;
      CHECK((t.unrooted(g, opt) == t.unrooted(h, opt)) == brute_isomorphic(g, h, ported));
    }
  }
}

TEST_CASE("rooted forms, kept sets and free ports") {
  // Star with centre 0 and leaves 1, 2, 3 behind ports 1, 2, 3.
  PortAdjacency star(4);
  for (int leaf = 1; leaf <= 3; ++leaf) {
    star[0].push_back({leaf, leaf});
    star[leaf].push_back({0, 1});
  }
  FormTable t;
  CHECK(t.rooted(star, 1, 0) == t.rooted(star, 2, 0));
  CHECK(t.rooted(star, 0) != t.rooted(star, 1));
  FormOptions opt;
  opt.keep = {1, 1, 1, 0};
  CHECK(t.rooted(star, 0, -1, opt) != t.rooted(star, 0));
  CHECK_THROWS_AS(t.rooted(star, 3, -1, opt), usage_error);

  // Hang a node below leaf 1, then swap the centre ports of leaves 1 and 2:
  // the trees agree once the centre's ports are ignored.
  star.emplace_back();
  star[1].push_back({4, 2});
  star[4].push_back({1, 1});
  PortAdjacency other = star;
  std::swap(other[0][0].port, other[0][1].port);
  FormOptions free;
  free.port_free = {1, 0, 0, 0, 0};
  CHECK(t.rooted(star, 0) != t.rooted(other, 0));
  CHECK(t.rooted(star, 0, -1, free) == t.rooted(other, 0, -1, free));
  CHECK(same_ported_subtree(star, 2, 0, other, 3, 0));
  CHECK_FALSE(same_ported_subtree(star, 1, 0, other, 2, 0));

  PortAdjacency split(2);
  FormOptions none;
  CHECK_THROWS_AS(t.unrooted(split, none), usage_error);
}
