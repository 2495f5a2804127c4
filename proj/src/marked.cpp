#include "solb/marked.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "solb/canon.hpp"
#include "solb/errors.hpp"

namespace solb {

const char* to_string(Op op) { return op == Op::reflect ? "reflect" : "split"; }

MarkedTree MarkedTree::seed(int delta) {
  if (delta < 3) throw usage_error("delta must be at least 3");
  MarkedTree G(delta);
  int a = G.add_node(Label::raw("1", delta));
  int b = G.add_node(Label::raw("2", delta));
  G.add_edge(a, 1, b, 1);
  return G;
}

std::optional<int> MarkedTree::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int MarkedTree::marked_count() const { return static_cast<int>(std::count(marked_.begin(), marked_.end(), 1)); }

std::vector<int> MarkedTree::component(int v) const {
  if (marked(v)) return {};
  std::vector<int> out{v};
  std::vector<char> seen(size(), 0);
  seen[v] = 1;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const Half& h : adj_[out[k]])
      if (!seen[h.to] && !marked(h.to)) {
        seen[h.to] = 1;
        out.push_back(h.to);
      }
  return out;
}

std::vector<std::vector<int>> MarkedTree::components() const {
  std::vector<std::vector<int>> out;
  std::vector<char> done(size(), 0);
  for (int v = 0; v < size(); ++v) {
    if (done[v] || marked(v)) continue;
    auto c = component(v);
    for (int u : c) done[u] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

int MarkedTree::add_node(Label label, bool marked) {
  int id = size();
  index_.emplace(label.str(), id);
  labels_.push_back(std::move(label));
  marked_.push_back(marked ? 1 : 0);
  adj_.emplace_back();
  return id;
}

void MarkedTree::add_edge(int u, int pu, int v, int pv) {
  adj_[u].push_back({v, pu});
  adj_[v].push_back({u, pv});
}

void MarkedTree::set_port(int v, int to, int port) {
  for (Half& h : adj_[v])
    if (h.to == to) h.port = port;
}

void MarkedTree::set_label(int v, Label l) {
  auto it = index_.find(labels_[v].str());
  if (it != index_.end() && it->second == v) index_.erase(it);
  index_.emplace(l.str(), v);
  labels_[v] = std::move(l);
}

void reflect(MarkedTree& G, int v) {
  if (v < 0 || v >= G.size()) throw usage_error("reflect: node " + std::to_string(v) + " does not exist");
  if (G.marked(v)) throw usage_error("reflect: node '" + G.label(v).str() + "' is marked");
  if (!G.is_leaf(v)) throw usage_error("reflect: node '" + G.label(v).str() + "' is not a leaf");
  const bool seed_case = G.size() == 2 && G.marked_count() == 0;
  if (!G.is_two_node(v) && !seed_case)
    throw usage_error("reflect: node '" + G.label(v).str() + "' is not a 2-leaf");

  const int delta = G.delta();
  const std::vector<int> comp = G.component(v);
  std::vector<int> slot(G.size(), -1);
  for (std::size_t k = 0; k < comp.size(); ++k) slot[comp[k]] = static_cast<int>(k);

  for (int i = 2; i <= delta; ++i) {
    std::vector<int> copy(comp.size(), -1);
    for (std::size_t k = 1; k < comp.size(); ++k)
      copy[k] = G.add_node(G.label(comp[k]).prefixed(symbol_of(i)));
    for (std::size_t k = 1; k < comp.size(); ++k) {
      const int w = comp[k];
      for (const Half& h : G.neighbors(w)) {
        if (h.to >= static_cast<int>(slot.size()) || slot[h.to] < 0) continue;
        if (h.to == v) {
          G.add_edge(copy[k], h.port, v, i);
        } else if (w < h.to) {
          G.add_edge(copy[k], h.port, copy[slot[h.to]], port_of(G.adjacency(), h.to, w));
        }
      }
    }
  }
  for (std::size_t k = 1; k < comp.size(); ++k) G.set_label(comp[k], G.label(comp[k]).prefixed('1'));
  G.set_label(v, G.label(v).prefixed(kStar));
  if (comp.size() > 1) {
    // v is a leaf, so its only edge leads into the original copy.
    G.set_port(v, G.neighbors(v)[0].to, 1);
  }
}

void split(MarkedTree& G, int v) {
  if (v < 0 || v >= G.size()) throw usage_error("split: node " + std::to_string(v) + " does not exist");
  if (G.marked(v)) throw usage_error("split: node '" + G.label(v).str() + "' is already marked");
  G.set_marked(v, true);
}

std::vector<int> layer_order(const ConstructionTree& T) {
  std::vector<int> order{T.root()};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int c : T.children(order[k])) order.push_back(c);
  return order;
}

std::vector<int> preorder(const ConstructionTree& T) {
  std::vector<int> order;
  std::vector<int> stack{T.root()};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    auto ch = T.children(v);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

namespace {

void check_order(const ConstructionTree& T, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != T.size())
    throw usage_error("order lists " + std::to_string(order.size()) + " nodes, tree has " + std::to_string(T.size()));
  std::vector<int> pos(T.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    int v = order[k];
    if (v < 0 || v >= T.size() || pos[v] >= 0) throw usage_error("order is not a permutation of the tree's nodes");
    pos[v] = static_cast<int>(k);
  }
  for (int v = 0; v < T.size(); ++v)
    if (v != T.root() && pos[T.parent(v)] > pos[v])
      throw usage_error("order places '" + T.label(v).str() + "' before its parent");
}

std::vector<std::string> sorted_texts(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::string> texts(const std::vector<Label>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(l.str());
  return out;
}

// Labels of the 2-leaves and of the other nodes of a component, each sorted.
std::pair<std::vector<std::string>, std::vector<std::string>> split_labels(const MarkedTree& G,
                                                                             const std::vector<int>& comp) {
  std::vector<std::string> two, rest;
  for (int u : comp) (G.is_two_leaf(u) ? two : rest).push_back(G.label(u).str());
  return {sorted_texts(std::move(two)), sorted_texts(std::move(rest))};
}

int nearest_two_leaf(const MarkedTree& G, int v, const std::vector<int>& comp) {
  std::vector<char> keep(G.size(), 0);
  for (int u : comp) keep[u] = 1;
  auto dist = bfs_distances(G.adjacency(), v, keep);
  int best = -1;
  for (int u : comp)
    if (u != v && G.is_two_leaf(u) && (best < 0 || dist[u] < best)) best = dist[u];
  return best;
}

std::string show(const std::vector<std::string>& v) {
  std::string s = "{";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
  return s + "}";
}

// The target of step i: the unique node labelled like T's node.
int locate(const MarkedTree& G, const Label& l, long step, bool scan) {
  if (scan) {
    int found = -1, count = 0;
    for (int u = 0; u < G.size(); ++u)
      if (G.label(u) == l) {
        found = u;
        ++count;
      }
    if (count != 1)
      throw invariant_error("unique-label", step, std::to_string(count) + " nodes carry label '" + l.str() + "'");
    return found;
  }
  auto f = G.find(l.str());
  if (!f) throw invariant_error("unique-label", step, "no node carries label '" + l.str() + "'");
  return *f;
}

void check_class(const MarkedTree& G, int v, NodeKind kind, long step) {
  const std::string& s = G.label(v).str();
  if (G.marked(v)) throw invariant_error("node-class", step, "'" + s + "' is already marked");
  if (kind == NodeKind::split) return;
  if (!G.is_leaf(v)) throw invariant_error("node-class", step, "'" + s + "' is not a leaf");
  bool want_two = step > 1;
  if (want_two ? !G.is_two_node(v) : !G.is_one_node(v))
    throw invariant_error("node-class", step, "'" + s + "' is not a " + (want_two ? "2" : "1") + "-leaf");
}

std::vector<ComponentMatch> check_graph(const MarkedTree& G, const ConstructionTree& T, const EdgeLabeling& L,
                                        const std::vector<char>& processed, long step) {
  if (!is_ported_tree(G.adjacency(), G.delta(), false))
    throw invariant_error("ports", step, "graph is not a tree with distinct ports in 1..delta at every node");

  std::vector<Label> all;
  for (int u = 0; u < G.size(); ++u) all.push_back(G.label(u));
  auto ind = is_independent(all);
  if (!ind.independent)
    throw invariant_error("independence", step,
                          "'" + ind.witness->first.str() + "' is a final substring of '" + ind.witness->second.str() + "'");

  // Frontier edges of T, by tail.
  std::map<std::string, int> owner;
  int frontier = 0;
  for (int t = 0; t < T.size(); ++t) {
    if (t == T.root() || !processed[T.parent(t)] || processed[t]) continue;
    ++frontier;
    for (const auto* set : {&L.at(t).psi, &L.at(t).pi})
      for (const auto& z : *set)
        if (!owner.emplace(z.str(), t).second)
          throw invariant_error("component-bijection", step, "label '" + z.str() + "' predicted for two edges");
  }
  std::vector<ComponentMatch> matches;
  std::vector<char> used(T.size(), 0);
  for (const auto& comp : G.components()) {
    const int rep = *std::min_element(comp.begin(), comp.end());
    auto it = owner.find(G.label(comp[0]).str());
    if (it == owner.end())
      throw invariant_error("component-bijection", step,
                            "component of '" + G.label(rep).str() + "' matches no frontier edge");
    const int t = it->second;
    if (used[t]) throw invariant_error("component-bijection", step, "two components match one edge");
    used[t] = 1;
    auto [two, rest] = split_labels(G, comp);
    if (two != sorted_texts(texts(L.at(t).psi)))
      throw invariant_error("component-psi", step,
                            "2-leaves " + show(two) + " vs psi " + show(sorted_texts(texts(L.at(t).psi))));
    if (rest != sorted_texts(texts(L.at(t).pi)))
      throw invariant_error("component-pi", step,
                            "other nodes " + show(rest) + " vs pi " + show(sorted_texts(texts(L.at(t).pi))));
    matches.push_back({t, rep, static_cast<int>(comp.size())});
  }
  if (static_cast<int>(matches.size()) != frontier)
    throw invariant_error("component-bijection", step,
                          std::to_string(matches.size()) + " components for " + std::to_string(frontier) + " edges");

  for (const auto& comp : G.components())
    for (int u : comp) {
      if (!G.is_two_node(u) || G.is_leaf(u)) continue;
      int inside = 0;
      for (const Half& h : G.neighbors(u))
        if (!G.marked(h.to)) ++inside;
      if (inside != G.delta())
        throw invariant_error("degree-law", step,
                              "2-node '" + G.label(u).str() + "' has degree " + std::to_string(inside) + " in its component");
    }
  for (int u = 0; u < G.size(); ++u)
    for (const Half& h : G.neighbors(u))
      if (G.is_two_node(u) == G.is_two_node(h.to))
        throw invariant_error("alternation", step, "'" + G.label(u).str() + "' and '" + G.label(h.to).str() +
                                                       "' are adjacent nodes of the same class");
  std::sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) { return a.tail < b.tail; });
  return matches;
}

int split_count(const ConstructionTree& T) {
  int n = 0;
  for (int v = 0; v < T.size(); ++v)
    if (T.kind(v) == NodeKind::split) ++n;
  return n;
}

}  // namespace

BuildTrace build_input_tree(const ConstructionTree& T, const std::vector<int>& order_in, const BuildOptions& opt) {
  skeleton(T);
  std::vector<int> order = order_in.empty() ? layer_order(T) : order_in;
  check_order(T, order);
  if (static_cast<std::uint64_t>(split_count(T)) > opt.node_budget)
    throw capacity_error("input tree needs " + std::to_string(split_count(T)) + " nodes, budget is " +
                             std::to_string(opt.node_budget),
                         std::to_string(split_count(T)));

  BuildTrace trace;
  trace.delta = T.b();
  trace.order = order;
  trace.mirror.assign(T.size(), -1);
  MarkedTree G = MarkedTree::seed(T.b());
  if (opt.keep_snapshots) trace.snapshots.push_back(G);
  EdgeLabeling L;
  if (opt.check_invariants) L = compute_labelings(T);
  std::vector<char> processed(T.size(), 0);

  for (std::size_t k = 0; k < order.size(); ++k) {
    const int u = order[k];
    const long step = static_cast<long>(k) + 1;
    BuildStep s;
    s.index = static_cast<int>(step);
    s.tnode = u;
    s.op = T.kind(u) == NodeKind::reflect ? Op::reflect : Op::split;
    s.target = locate(G, T.label(u), step, opt.check_invariants);
    s.target_label = G.label(s.target);
    check_class(G, s.target, T.kind(u), step);
    auto comp = G.component(s.target);
    s.component_size = static_cast<int>(comp.size());
    if (opt.check_invariants && u != T.root()) {
      auto [two, rest] = split_labels(G, comp);
      const EdgeSets& e = L.at(u);
      if (two != sorted_texts(texts(e.psi)) || rest != sorted_texts(texts(e.pi)))
        throw invariant_error("component-oracle", step,
                              "component of '" + s.target_label.str() + "' is " + show(two) + show(rest));
    }
    if (s.op == Op::split) {
      s.two_leaf_distance = nearest_two_leaf(G, s.target, comp);
      split(G, s.target);
    } else {
      reflect(G, s.target);
      trace.mirror[u] = s.target;
    }
    processed[u] = 1;
    if (opt.check_invariants) s.components = check_graph(G, T, L, processed, step);
    if (opt.keep_snapshots) trace.snapshots.push_back(G);
    trace.steps.push_back(std::move(s));
  }
  trace.final = std::move(G);
  return trace;
}

bool neighbor_oracle(const MarkedTree& G, int v, int w) {
  if (v == w) throw usage_error("neighbor_oracle needs two distinct nodes");
  if (G.marked(v) || G.marked(w)) throw usage_error("neighbor_oracle is defined for unmarked nodes only");
  const Label& a = G.label(v);
  const Label& b = G.label(w);
  const std::size_t len = std::min(a.size(), b.size());
  for (std::size_t j = 1; j < len; ++j) {
    if (a.at(j) == kStar || b.at(j) == kStar) continue;
    if (a.at(j) != b.at(j)) return false;
  }
  return true;
}

namespace {

// Keeps the component of v together with its marked neighbours, so that leaf
// status inside the component is unchanged.
MarkedTree restrict_to_component(const MarkedTree& G, int v) {
  auto comp = G.component(v);
  std::vector<int> id(G.size(), -1);
  MarkedTree H(G.delta());
  for (int u : comp) id[u] = H.add_node(G.label(u));
  std::vector<int> stubs;
  for (int u : comp)
    for (const Half& h : G.neighbors(u))
      if (G.marked(h.to) && id[h.to] < 0) {
        id[h.to] = H.add_node(G.label(h.to), true);
        stubs.push_back(h.to);
      }
  for (int u : comp)
    for (const Half& h : G.neighbors(u))
      if (id[h.to] >= 0 && (G.marked(h.to) || u < h.to))
        H.add_edge(id[u], h.port, id[h.to], port_of(G.adjacency(), h.to, u));
  return H;
}

}  // namespace

DistanceReport check_distance_correct(const ConstructionTree& T, DistanceMode mode, std::uint64_t node_budget) {
  DistanceReport r;
  auto note = [&r](int d, int step, const Label& l) {
    ++r.splits_checked;
    if (d >= 0 && (r.minimum < 0 || d < r.minimum)) {
      r.minimum = d;
      r.witness_step = step;
      r.witness_label = l;
    }
  };
  if (mode == DistanceMode::full) {
    BuildOptions opt;
    opt.check_invariants = false;
    opt.node_budget = node_budget;
    auto trace = build_input_tree(T, {}, opt);
    for (const auto& s : trace.steps) {
      r.max_component = std::max<long>(r.max_component, s.component_size);
      if (s.op == Op::split) note(s.two_leaf_distance, s.index, s.target_label);
    }
    return r;
  }

  Skeleton sk = skeleton(T);
  MarkedTree G = MarkedTree::seed(T.b());
  int u = T.root();
  for (int step = 1;; ++step) {
    const Label& l = T.label(u);
    auto f = G.find(l.str());
    if (!f) throw invariant_error("unique-label", step, "no node carries label '" + l.str() + "'");
    const int v = *f;
    check_class(G, v, T.kind(u), step);
    auto comp = G.component(v);
    r.max_component = std::max<long>(r.max_component, static_cast<long>(comp.size()));
    if (u != T.root()) {
      auto [two, rest] = split_labels(G, comp);
      EdgeSets e = labelings_on_path(T, u);
      if (two != sorted_texts(texts(e.psi)) || rest != sorted_texts(texts(e.pi)))
        throw invariant_error("component-oracle", step, "component of '" + l.str() + "' disagrees with psi/pi");
    }
    if (T.kind(u) == NodeKind::reflect) {
      if (static_cast<std::uint64_t>(G.size()) + static_cast<std::uint64_t>(comp.size()) * (T.b() - 1) > node_budget)
        throw capacity_error("component growth exceeds the node budget", std::to_string(comp.size() * T.b()));
      reflect(G, v);
      u = T.children(u)[0];
      continue;
    }
    note(nearest_two_leaf(G, v, comp), step, l);
    split(G, v);
    if (T.child_count(u) == 0) break;
    u = jth_child(T, sk, u, 1);
    auto next = G.find(T.label(u).str());
    if (!next) throw invariant_error("unique-label", step + 1, "no node carries label '" + T.label(u).str() + "'");
    G = restrict_to_component(G, *next);
  }
  return r;
}

std::vector<int> canonical_reflect_order(const ConstructionTree& T, CanonicalOrder order) {
  std::vector<int> U;
  for (int v = 0; v < T.size(); ++v)
    if (T.kind(v) == NodeKind::reflect) U.push_back(v);
  std::sort(U.begin(), U.end(), [&](int a, int b) {
    if (T.layer(a) != T.layer(b))
      return order == CanonicalOrder::layer_ascending ? T.layer(a) < T.layer(b) : T.layer(a) > T.layer(b);
    return T.label(a).str() < T.label(b).str();
  });
  return U;
}

std::vector<int> canonical_sequence(const ConstructionTree& T, const BuildTrace& trace, CanonicalOrder order) {
  std::vector<int> mirrors;
  for (int m : trace.mirror)
    if (m >= 0) mirrors.push_back(m);
  std::vector<int> W;
  const auto U = canonical_reflect_order(T, order);
  for (std::size_t i = 0; i < U.size(); ++i) {
    const long idx = static_cast<long>(i) + 1;
    int match = -1, count = 0;
    for (int m : mirrors)
      if (is_final_substring(T.label(U[i]), trace.final.label(m))) {
        match = m;
        ++count;
      }
    if (count != 1)
      throw invariant_error("canonical-match", idx,
                            std::to_string(count) + " mirror nodes end with '" + T.label(U[i]).str() + "'");
    if (match != trace.mirror[U[i]])
      throw invariant_error("canonical-match", idx, "label match disagrees with the reflection record");
    W.push_back(match);
  }
  return W;
}

std::vector<int> symmetric_view_set(const MarkedTree& G, const std::vector<int>& W, int i, int D) {
  if (i < 1 || i > static_cast<int>(W.size())) throw usage_error("index outside the sequence");
  if (D < 1) throw usage_error("D must be positive");
  const auto& g = G.adjacency();
  std::vector<std::vector<int>> dist(i);
  for (int j = 0; j < i; ++j) dist[j] = bfs_distances(g, W[j]);
  // Closure of w_i under hops of length <= 2D-2 between w_1..w_i.
  std::vector<char> in_chain(i, 0);
  in_chain[i - 1] = 1;
  std::deque<int> queue{i - 1};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int j = 0; j < i; ++j)
      if (!in_chain[j] && dist[s][W[j]] <= 2 * D - 2) {
        in_chain[j] = 1;
        queue.push_back(j);
      }
  }
  std::vector<char> open(G.size(), 1);
  for (int j = 0; j + 1 < i; ++j) open[W[j]] = 0;
  auto reach = bfs_distances(g, W[i - 1], open);
  std::vector<int> out;
  for (int w = 0; w < G.size(); ++w) {
    if (reach[w] < 0) continue;
    for (int j = 0; j < i; ++j)
      if (in_chain[j] && dist[j][w] <= D - 1) {
        out.push_back(w);
        break;
      }
  }
  return out;
}

SymmetricViewReport check_symmetric_view(const MarkedTree& G, const std::vector<int>& W, int D) {
  SymmetricViewReport r;
  FormTable table;
  for (int i = 1; i < static_cast<int>(W.size()); ++i) {
    const int wi = W[i - 1];
    auto set = symmetric_view_set(G, W, i, D);
    r.view_sizes.push_back(static_cast<int>(set.size()));
    FormOptions opt;
    opt.keep.assign(G.size(), 0);
    for (int w : set) opt.keep[w] = 1;
    // Form of the part behind each edge at w_i; -1 marks an empty part.
    std::vector<std::pair<int, std::pair<int, int>>> parts;
    for (const Half& h : G.neighbors(wi)) {
      std::pair<int, int> f{-1, -1};
      if (opt.keep[h.to]) f = {port_of(G.adjacency(), h.to, wi), table.rooted(G.adjacency(), h.to, wi, opt)};
      parts.push_back({h.port, f});
    }
    std::sort(parts.begin(), parts.end());
    for (std::size_t a = 0; a < parts.size(); ++a)
      for (std::size_t b = a + 1; b < parts.size(); ++b) {
        ++r.pairs_checked;
        if (parts[a].second != parts[b].second) r.failures.push_back({i, parts[a].first, parts[b].first});
      }
  }
  return r;
}

}  // namespace solb
