#include "solb/ctree.hpp"

#include <algorithm>
#include <queue>

#include "solb/errors.hpp"

namespace solb {

const char* to_string(NodeKind k) { return k == NodeKind::reflect ? "reflect" : "split"; }

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::reflect: return "reflect";
    case LayerKind::internal_split: return "internal-split";
    case LayerKind::leaf_split: return "leaf-split";
  }
  return "?";
}

ConstructionTree::ConstructionTree(int b, std::vector<int> parent, std::vector<Label> labels,
                                   const std::vector<std::vector<int>>& children)
    : b_(b), parent_(std::move(parent)), labels_(std::move(labels)) {
  const std::size_t n = parent_.size();
  if (labels_.size() != n || children.size() != n)
    throw usage_error("parent, label and child arrays differ in length");
  child_begin_.resize(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) child_begin_[v + 1] = child_begin_[v] + children[v].size();
  child_ids_.reserve(child_begin_[n]);
  for (const auto& c : children) child_ids_.insert(child_ids_.end(), c.begin(), c.end());
  finish();
}

ConstructionTree::ConstructionTree(int b, std::vector<int> parent, std::vector<Label> labels,
                                   std::vector<std::uint32_t> child_begin, std::vector<int> child_ids)
    : b_(b),
      parent_(std::move(parent)),
      labels_(std::move(labels)),
      child_begin_(std::move(child_begin)),
      child_ids_(std::move(child_ids)) {
  if (labels_.size() != parent_.size() || child_begin_.size() != parent_.size() + 1)
    throw usage_error("parent, label and child arrays differ in length");
  finish();
}

void ConstructionTree::finish() {
  const int n = size();
  if (n == 0) throw usage_error("empty tree");
  for (int v = 0; v < n; ++v) {
    if (parent_[v] == -1) {
      if (root_ != -1) throw usage_error("more than one root");
      root_ = v;
    } else if (parent_[v] < 0 || parent_[v] >= n) {
      throw usage_error("parent id out of range at node " + std::to_string(v));
    }
  }
  if (root_ == -1) throw usage_error("no root");
  for (int v = 0; v < n; ++v)
    for (int c : children(v)) {
      if (c < 0 || c >= n) throw usage_error("child id out of range at node " + std::to_string(v));
      if (parent_[c] != v)
        throw usage_error("child " + std::to_string(c) + " does not list " + std::to_string(v) + " as parent");
    }
  depth_.assign(n, 0);
  std::vector<int> order{root_};
  depth_[root_] = 1;
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int c : children(order[k])) {
      if (depth_[c] != 0) throw usage_error("node reached twice");
      depth_[c] = depth_[order[k]] + 1;
      order.push_back(c);
    }
  if (static_cast<int>(order.size()) != n) throw usage_error("tree is not connected");
  layers_.clear();
  for (int v : order) {
    if (depth_[v] > static_cast<int>(layers_.size())) layers_.emplace_back();
    layers_[depth_[v] - 1].push_back(v);
  }
}

PhiResult compute_phi(const std::vector<bool>& R) {
  PhiResult out;
  const int m = static_cast<int>(R.size());
  if (m == 0) {
    out.violated = "nonempty";
    return out;
  }
  int reflects = static_cast<int>(std::count(R.begin(), R.end(), true));
  if (2 * reflects != m) {
    out.violated = "equal-layer-counts";
    return out;
  }
  if (!R.front() || R.back()) {
    out.violated = "first-reflect-last-split";
    return out;
  }
  std::vector<int> hit(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    if (!R[i - 1]) continue;
    int balance = 0, j = i;
    for (; j <= m; ++j) {
      balance += R[j - 1] ? 1 : -1;
      if (balance == 0) break;
    }
    if (j > m || R[j - 1]) {
      out.violated = "bijection";
      return out;
    }
    out.phi[i] = j;
    if (hit[j]++) {
      out.violated = "bijection";
      return out;
    }
  }
  if (out.phi.size() != static_cast<std::size_t>(reflects)) {
    out.violated = "bijection";
    return out;
  }
  if (out.phi.at(1) != m) {
    out.violated = "root-pairs-with-leaf-layer";
    return out;
  }
  for (auto [i, pi] : out.phi) {
    if (!(i < pi)) {
      out.violated = "increasing";
      return out;
    }
    for (auto [j, pj] : out.phi)
      if (i < j && j < pi && !(pi > pj)) {
        out.violated = "nesting";
        return out;
      }
  }
  out.ok = true;
  return out;
}

namespace {

// Empty string when b-balanced, otherwise a witness description.
std::string balance_witness(const ConstructionTree& T) {
  for (int i = 1; i <= T.layer_count(); ++i) {
    const auto& L = T.layer_members(i);
    int c0 = T.child_count(L.front());
    for (int v : L) {
      int c = T.child_count(v);
      if (c != 0 && c != 1 && c != T.b())
        return "node " + std::to_string(v) + " has " + std::to_string(c) + " children";
      if (c != c0)
        return "layer " + std::to_string(i) + " mixes child counts at node " + std::to_string(v);
    }
  }
  return {};
}

}  // namespace

Skeleton skeleton(const ConstructionTree& T) {
  if (auto w = balance_witness(T); !w.empty()) throw usage_error("not b-balanced: " + w);
  Skeleton sk;
  std::vector<bool> R;
  for (int i = 1; i <= T.layer_count(); ++i) {
    int c = T.child_count(T.layer_members(i).front());
    R.push_back(c == 1);
    sk.kinds.push_back(c == 1 ? LayerKind::reflect : c == 0 ? LayerKind::leaf_split : LayerKind::internal_split);
  }
  auto phi = compute_phi(R);
  if (!phi.ok) throw usage_error("not well-nested: " + phi.violated);
  sk.phi = phi.phi;
  sk.reflect_index.assign(R.size(), 0);
  sk.split_index.assign(R.size(), 0);
  for (std::size_t i = 0; i < R.size(); ++i)
    if (R[i]) {
      sk.reflect_layer.push_back(static_cast<int>(i) + 1);
      sk.reflect_index[i] = static_cast<int>(sk.reflect_layer.size());
    }
  for (auto [ri, sj] : sk.phi) sk.split_index[sj - 1] = sk.reflect_index[ri - 1];
  return sk;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.ok) return c.name;
  return {};
}

namespace {

struct Reporter {
  ValidationReport& rep;
  CheckResult& open(const std::string& name) {
    rep.checks.push_back({name, true, {}});
    return rep.checks.back();
  }
  static void fail(CheckResult& c, std::string witness) {
    if (!c.ok) return;
    c.ok = false;
    c.witness = std::move(witness);
  }
};

std::string node_desc(const ConstructionTree& T, int v) {
  return "node " + std::to_string(v) + " '" + T.label(v).str() + "'";
}

}  // namespace

ValidationReport validate(const ConstructionTree& T) {
  ValidationReport rep;
  Reporter r{rep};
  const int n = T.size();

  {
    auto& c = r.open("alphabet");
    if (T.b() < 3 || T.b() > 9) Reporter::fail(c, "b = " + std::to_string(T.b()) + " outside 3..9");
    for (int v = 0; v < n && c.ok; ++v)
      if (T.label(v).b() != T.b() || T.label(v).empty()) Reporter::fail(c, node_desc(T, v));
  }
  {
    auto& c = r.open("b-balanced");
    if (auto w = balance_witness(T); !w.empty()) Reporter::fail(c, w);
  }
  std::optional<Skeleton> sk;
  {
    auto& c = r.open("well-nested");
    try {
      if (rep.find("b-balanced")->ok) sk = skeleton(T);
      else Reporter::fail(c, "requires b-balanced layers");
    } catch (const usage_error& e) {
      Reporter::fail(c, e.what());
    }
  }

  std::vector<int> reflect_nodes;
  for (int v = 0; v < n; ++v)
    if (T.child_count(v) == 1) reflect_nodes.push_back(v);

  {
    auto& c = r.open("root-label");
    if (T.label(T.root()).str() != "1") Reporter::fail(c, node_desc(T, T.root()));
  }
  {
    auto& c = r.open("reflect-length");
    if (!sk) Reporter::fail(c, "requires well-nested layers");
    else
      for (int v : reflect_nodes)
        if (static_cast<int>(T.label(v).size()) != sk->reflect_index[T.layer(v) - 1]) {
          Reporter::fail(c, node_desc(T, v));
          break;
        }
  }
  std::vector<Label> rl;
  rl.reserve(reflect_nodes.size());
  for (int v : reflect_nodes) rl.push_back(T.label(v));
  {
    auto& c = r.open("reflect-distinct");
    std::vector<Label> sorted = rl;
    std::sort(sorted.begin(), sorted.end());
    auto it = std::adjacent_find(sorted.begin(), sorted.end());
    if (it != sorted.end()) Reporter::fail(c, "('" + it->str() + "', '" + it->str() + "')");
  }
  bool star_free = true;
  {
    auto& c = r.open("reflect-star-free");
    for (int v : reflect_nodes)
      if (!T.label(v).star_free()) {
        Reporter::fail(c, node_desc(T, v));
        star_free = false;
        break;
      }
  }
  {
    auto& c = r.open("reflect-independent");
    auto res = is_independent(rl);
    if (!res.independent)
      Reporter::fail(c, "('" + res.witness->first.str() + "', '" + res.witness->second.str() + "')");
  }
  {
    auto& c = r.open("reflect-clearing");
    if (!star_free || rl.empty()) Reporter::fail(c, "requires nonempty star-free reflect labels");
    else if (rep.find("alphabet")->ok) {
      auto res = is_clearing(rl, T.b());
      if (!res.clearing) Reporter::fail(c, "uncovered '" + res.witness->str() + "'");
    } else {
      Reporter::fail(c, "requires a valid alphabet");
    }
  }

  // reflect_upto[i]: reflect layers among layers 1..i.
  std::vector<int> reflect_upto(T.layer_count() + 1, 0);
  for (int i = 1; i <= T.layer_count(); ++i)
    reflect_upto[i] = reflect_upto[i - 1] + (T.child_count(T.layer_members(i).front()) == 1 ? 1 : 0);

  {
    auto& c = r.open("split-length");
    for (int v = 0; v < n && c.ok; ++v)
      if (T.child_count(v) != 1 && static_cast<int>(T.label(v).size()) != 1 + reflect_upto[T.layer(v) - 1])
        Reporter::fail(c, node_desc(T, v));
  }
  {
    auto& c = r.open("split-star");
    if (!sk) Reporter::fail(c, "requires well-nested layers");
    for (int v = 0; v < n && c.ok; ++v) {
      if (T.child_count(v) == 1) continue;
      const Label& l = T.label(v);
      int i = sk->split_index[T.layer(v) - 1];
      if (l.star_count() != 1 || l.star_position() != i) {
        Reporter::fail(c, node_desc(T, v) + " needs exactly one star, at position " + std::to_string(i));
        break;
      }
      int target = sk->reflect_layer[i - 1];
      int a = v;
      while (T.layer(a) > target) a = T.parent(a);
      const Label& al = T.label(a);
      for (int p = 0; p < i; ++p)
        if (static_cast<std::size_t>(p) >= al.size() || al.at(p) != l.at(p)) {
          Reporter::fail(c, node_desc(T, v) + " disagrees with ancestor '" + al.str() + "' at position " +
                                std::to_string(p));
          break;
        }
    }
  }
  {
    auto& c = r.open("child-partition");
    if (!sk) Reporter::fail(c, "requires well-nested layers");
    for (int v = 0; v < n && c.ok; ++v) {
      if (T.child_count(v) != T.b()) continue;
      int i = sk->split_index[T.layer(v) - 1];
      std::vector<char> seen;
      for (int ch : T.children(v)) {
        const Label& l = T.label(ch);
        char s = static_cast<std::size_t>(i) < l.size() ? l.at(i) : '\0';
        if (s < '1' || s > symbol_of(T.b()) || std::find(seen.begin(), seen.end(), s) != seen.end()) {
          Reporter::fail(c, node_desc(T, v) + ": children do not carry distinct digits at position " +
                                std::to_string(i));
          break;
        }
        seen.push_back(s);
      }
    }
    for (int u = 0; u < n && c.ok && sk; ++u) {
      int prev = u;
      for (int a = T.parent(u); a != -1; prev = a, a = T.parent(a)) {
        if (T.child_count(a) != T.b()) continue;
        int i = sk->split_index[T.layer(a) - 1];
        const Label& lu = T.label(u);
        if (static_cast<std::size_t>(i) >= lu.size() || lu.at(i) != T.label(prev).at(i)) {
          Reporter::fail(c, node_desc(T, u) + " differs at position " + std::to_string(i) +
                                " from its ancestor '" + T.label(prev).str() + "'");
          break;
        }
      }
    }
  }
  {
    auto& c = r.open("position0-class");
    for (int v = 0; v < n && c.ok; ++v) {
      bool expect_one = v == T.root() || T.child_count(v) == 0;
      const Label& l = T.label(v);
      if (l.empty() || (l.at(0) == '1') != expect_one) Reporter::fail(c, node_desc(T, v));
    }
  }
  {
    auto& c = r.open("length-by-depth");
    std::vector<int> above(n, 0);
    std::vector<int> order{T.root()};
    for (std::size_t k = 0; k < order.size(); ++k) {
      int v = order[k];
      for (int ch : T.children(v)) {
        above[ch] = above[v] + (T.child_count(v) == 1 ? 1 : 0);
        order.push_back(ch);
      }
    }
    for (int v = 0; v < n && c.ok; ++v)
      if (static_cast<int>(T.label(v).size()) != 1 + above[v]) Reporter::fail(c, node_desc(T, v));
  }
  return rep;
}

ConstructionTree build_t2(int delta) {
  if (delta < 3 || delta > 8) throw usage_error("build_t2 needs 3 <= delta <= 8");
  const int b = delta;
  std::vector<int> parent;
  std::vector<Label> labels;
  std::vector<std::vector<int>> kids;
  auto add = [&](int p, std::string text) {
    int id = static_cast<int>(parent.size());
    parent.push_back(p);
    labels.push_back(Label::raw(std::move(text), b));
    kids.emplace_back();
    if (p >= 0) kids[p].push_back(id);
    return id;
  };
  int root = add(-1, "1");
  // Frontier entries: split node id and its free digits, highest position first.
  struct Open {
    int id;
    std::string digits;
  };
  int r12 = add(root, "12");
  std::vector<Open> frontier{{add(r12, "*12"), ""}};
  for (int d = 2; d <= delta; ++d) {
    std::vector<Open> next;
    for (const auto& o : frontier)
      for (int j = 1; j <= b; ++j) {
        std::string digits = std::string(1, symbol_of(j)) + o.digits;
        std::string text = digits + symbol_of(d) + "2";
        int r = add(o.id, text);
        next.push_back({add(r, "*" + text), digits});
      }
    frontier = std::move(next);
  }
  for (const auto& o : frontier)
    for (int j = 1; j <= b; ++j) add(o.id, std::string(1, symbol_of(j)) + o.digits + "*1");
  return ConstructionTree(b, std::move(parent), std::move(labels), kids);
}

std::vector<Label> literal_t2_reflect_labels(int delta) {
  std::vector<Label> out{Label::raw("1", delta), Label::raw("12", delta)};
  for (int j = 1; j <= delta; ++j) {
    out.push_back(Label::raw(std::string(1, symbol_of(j)) + "22", delta));
    for (int k = 1; k <= delta; ++k)
      out.push_back(Label::raw(std::string(1, symbol_of(k)) + symbol_of(j) + "32", delta));
  }
  return out;
}

int jth_child(const ConstructionTree& T, const Skeleton& sk, int v, int j) {
  if (v < 0 || v >= T.size() || T.child_count(v) != T.b())
    throw usage_error("jth_child needs an internal split node");
  if (j < 1 || j > T.b()) throw usage_error("child index out of range");
  int i = sk.split_index[T.layer(v) - 1];
  for (int c : T.children(v))
    if (T.label(c).size() > static_cast<std::size_t>(i) && T.label(c).at(i) == symbol_of(j)) return c;
  throw usage_error("no child carries symbol " + std::to_string(j) + " at position " + std::to_string(i));
}

std::vector<Label> reflect_labels(const ConstructionTree& T) {
  std::vector<Label> out;
  for (int v = 0; v < T.size(); ++v)
    if (T.child_count(v) == 1) out.push_back(T.label(v));
  return out;
}

int reflect_ancestors(const ConstructionTree& T, int v) {
  int k = 0;
  for (int a = T.parent(v); a != -1; a = T.parent(a))
    if (T.child_count(a) == 1) ++k;
  return k;
}

}  // namespace solb
