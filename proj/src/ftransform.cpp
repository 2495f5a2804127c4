#include "solb/ftransform.hpp"

#include <set>

#include "solb/errors.hpp"

namespace solb {

namespace {

struct DfsBuilder {
  const ConstructionTree& T;
  const Skeleton& sk;
  DfsSequence out;
  int early = 0;
  int late = 0;

  void visit(int v) {
    if (T.child_count(v) == 1) {
      int rank = ++early;
      out.entries.push_back({v, false, late, rank});
      visit(T.children(v)[0]);
      out.entries.push_back({v, true, late, rank});
      ++late;
    } else if (T.child_count(v) == T.b()) {
      for (int j = 1; j <= T.b(); ++j) visit(jth_child(T, sk, v, j));
    }
  }
};

}  // namespace

DfsSequence dfs_sequence(const ConstructionTree& T) {
  Skeleton sk = skeleton(T);
  DfsBuilder d{T, sk, {}};
  d.visit(T.root());
  return std::move(d.out);
}

ImplicitFTree::ImplicitFTree(int b, DfsSequence q, std::vector<FLayer> layers)
    : b_(b), q_(std::move(q)), layers_(std::move(layers)) {}

ImplicitFTree f_implicit(const ConstructionTree& T) {
  DfsSequence q = dfs_sequence(T);
  std::vector<FLayer> layers;
  std::set<int> K;
  std::vector<int> order;
  const std::size_t m = q.entries.size();
  for (std::size_t i = 0; i < m; ++i) {
    const DfsEntry& e = q.entries[i];
    FLayer L;
    L.source = e.node;
    L.late = e.late;
    L.early_rank = e.early_rank;
    L.kind = !e.late ? LayerKind::reflect : i + 1 == m ? LayerKind::leaf_split : LayerKind::internal_split;
    const Label& src = T.label(e.node);
    L.pattern = pad(e.late ? src.prefixed(kStar) : src, K);
    L.free_order = order;
    L.size = boost::multiprecision::pow(BigInt(T.b()), static_cast<unsigned>(order.size()));
    if (e.late) {
      for (std::size_t p = 0; p < L.pattern.size(); ++p)
        if (L.pattern.at(p) == kStar) L.split_index = static_cast<int>(p);
      K.insert(e.early_rank);
      order.push_back(e.early_rank);
    }
    layers.push_back(std::move(L));
  }
  return ImplicitFTree(T.b(), std::move(q), std::move(layers));
}

BigInt ImplicitFTree::total_nodes() const {
  BigInt t = 0;
  for (const auto& L : layers_) t += L.size;
  return t;
}

void ImplicitFTree::check(const FAddress& a) const {
  if (a.layer < 1 || a.layer > layer_count())
    throw usage_error("layer " + std::to_string(a.layer) + " outside 1.." + std::to_string(layer_count()));
  const FLayer& L = layers_[a.layer - 1];
  if (a.digits.size() != L.free_order.size())
    throw usage_error("layer " + std::to_string(a.layer) + " needs " + std::to_string(L.free_order.size()) +
                      " digits, got " + std::to_string(a.digits.size()));
  for (int d : a.digits)
    if (d < 1 || d > b_) throw usage_error("digit " + std::to_string(d) + " outside 1.." + std::to_string(b_));
}

Label ImplicitFTree::label(const FAddress& a) const {
  check(a);
  const FLayer& L = layers_[a.layer - 1];
  std::string s = L.pattern.str();
  for (std::size_t k = 0; k < a.digits.size(); ++k) s[s.size() - 1 - L.free_order[k]] = symbol_of(a.digits[k]);
  return Label::raw(std::move(s), b_);
}

std::optional<FAddress> ImplicitFTree::parent(const FAddress& a) const {
  check(a);
  if (a.layer == 1) return std::nullopt;
  FAddress p{a.layer - 1, a.digits};
  if (layers_[a.layer - 2].late) p.digits.pop_back();
  return p;
}

std::vector<FAddress> ImplicitFTree::children(const FAddress& a) const {
  check(a);
  std::vector<FAddress> out;
  if (a.layer == layer_count()) return out;
  if (!layers_[a.layer - 1].late) {
    out.push_back({a.layer + 1, a.digits});
    return out;
  }
  for (int j = 1; j <= b_; ++j) {
    FAddress c{a.layer + 1, a.digits};
    c.digits.push_back(j);
    out.push_back(std::move(c));
  }
  return out;
}

BigInt ImplicitFTree::index_of(const FAddress& a) const {
  check(a);
  BigInt x = 0;
  for (int d : a.digits) x = x * b_ + (d - 1);
  return x;
}

FAddress ImplicitFTree::address_at(int layer, const BigInt& index) const {
  if (layer < 1 || layer > layer_count()) throw usage_error("layer out of range");
  const FLayer& L = layers_[layer - 1];
  if (index < 0 || index >= L.size) throw usage_error("index out of range for layer " + std::to_string(layer));
  FAddress a{layer, std::vector<int>(L.free_order.size())};
  BigInt x = index;
  for (std::size_t k = a.digits.size(); k-- > 0;) {
    a.digits[k] = static_cast<int>(x % b_) + 1;
    x /= b_;
  }
  return a;
}

FNode implicit_node(const ImplicitFTree& I, int layer, const std::vector<int>& digits) {
  FAddress a{layer, digits};
  return {I.label(a), I.parent(a), I.children(a)};
}

std::vector<std::uint64_t> layer_offsets(const ImplicitFTree& I) {
  std::vector<std::uint64_t> off{0};
  BigInt acc = 0;
  for (int i = 1; i <= I.layer_count(); ++i) {
    acc += I.layer(i).size;
    if (acc > BigInt(std::numeric_limits<std::uint64_t>::max()))
      throw capacity_error("tree too large to number", acc.str());
    off.push_back(static_cast<std::uint64_t>(acc));
  }
  return off;
}

ConstructionTree f_materialize(const ImplicitFTree& I, std::optional<int> layer_limit, std::uint64_t budget) {
  const int layers = layer_limit ? std::min(*layer_limit, I.layer_count()) : I.layer_count();
  if (layers < 1) throw usage_error("layer limit must be at least 1");
  BigInt count = 0;
  for (int i = 1; i <= layers; ++i) count += I.layer(i).size;
  if (count > budget || count > BigInt(std::numeric_limits<int>::max()))
    throw capacity_error("materialization needs " + count.str() + " nodes, budget is " + std::to_string(budget),
                         count.str());
  const auto n = static_cast<std::size_t>(count);
  const int b = I.b();
  std::vector<std::uint64_t> off{0};
  for (int i = 1; i <= layers; ++i) off.push_back(off.back() + static_cast<std::uint64_t>(I.layer(i).size));

  std::vector<int> parent(n, -1);
  std::vector<Label> labels(n);
  std::vector<std::uint32_t> child_begin(n + 1, 0);
  std::vector<int> child_ids;
  child_ids.reserve(n > 0 ? n - 1 : 0);

  for (int i = 1; i <= layers; ++i) {
    const FLayer& L = I.layer(i);
    const std::uint64_t size = off[i] - off[i - 1];
    const std::size_t free = L.free_order.size();
    const bool has_children = i < layers;
    std::string s = L.pattern.str();
    for (std::uint64_t x = 0; x < size; ++x) {
      const std::uint64_t id = off[i - 1] + x;
      std::uint64_t rest = x;
      for (std::size_t k = free; k-- > 0;) {
        s[s.size() - 1 - L.free_order[k]] = symbol_of(static_cast<int>(rest % b) + 1);
        rest /= b;
      }
      labels[id] = Label::raw(s, b);
      child_begin[id] = static_cast<std::uint32_t>(child_ids.size());
      if (!has_children) continue;
      if (!L.late) {
        child_ids.push_back(static_cast<int>(off[i] + x));
        parent[off[i] + x] = static_cast<int>(id);
      } else {
        for (int j = 0; j < b; ++j) {
          std::uint64_t c = off[i] + x * b + j;
          child_ids.push_back(static_cast<int>(c));
          parent[c] = static_cast<int>(id);
        }
      }
    }
  }
  child_begin[n] = static_cast<std::uint32_t>(child_ids.size());
  return ConstructionTree(b, std::move(parent), std::move(labels), std::move(child_begin), std::move(child_ids));
}

}  // namespace solb
