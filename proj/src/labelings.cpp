#include "solb/labelings.hpp"

#include <algorithm>

#include "solb/errors.hpp"

namespace solb {

namespace {

std::vector<Label> extend(const std::vector<Label>& up, const Label& skip, int delta) {
  std::vector<Label> out;
  out.reserve(up.size() * delta);
  for (int i = 1; i <= delta; ++i)
    for (const auto& z : up)
      if (z != skip) out.push_back(z.prefixed(symbol_of(i)));
  return out;
}

std::vector<Label> filter(const std::vector<Label>& up, int pos, char sym) {
  std::vector<Label> out;
  for (const auto& z : up)
    if (static_cast<std::size_t>(pos) < z.size() && z.at(pos) == sym) out.push_back(z);
  return out;
}

}  // namespace

EdgeSets root_edge_sets(int delta) {
  EdgeSets s;
  for (int i = 1; i <= delta; ++i) s.psi.push_back(Label::raw(std::string{symbol_of(i), '2'}, delta));
  s.pi.push_back(Label::raw("*1", delta));
  return s;
}

EdgeSets child_edge_sets(const ConstructionTree& T, const EdgeSets& up, int tail) {
  const int v = T.parent(tail);
  if (v < 0) throw usage_error("the root has no parent edge");
  const Label& lv = T.label(v);
  EdgeSets s;
  if (T.child_count(v) == 1) {
    s.psi = extend(up.psi, lv, T.b());
    s.pi = extend(up.pi, lv, T.b());
    s.pi.push_back(lv.prefixed(kStar));
  } else {
    int j = lv.star_position();
    if (j < 0) throw usage_error("split node '" + lv.str() + "' does not carry exactly one star");
    char i = T.label(tail).at(j);
    s.psi = filter(up.psi, j, i);
    s.pi = filter(up.pi, j, i);
  }
  std::sort(s.psi.begin(), s.psi.end());
  std::sort(s.pi.begin(), s.pi.end());
  return s;
}

EdgeLabeling compute_labelings(const ConstructionTree& T) {
  EdgeLabeling L;
  L.by_tail.resize(T.size());
  std::vector<int> order{T.root()};
  for (std::size_t k = 0; k < order.size(); ++k) {
    int v = order[k];
    for (int c : T.children(v)) {
      L.by_tail[c] = v == T.root() ? root_edge_sets(T.b()) : child_edge_sets(T, L.by_tail[v], c);
      order.push_back(c);
    }
  }
  return L;
}

EdgeSets labelings_on_path(const ConstructionTree& T, int tail) {
  if (tail < 0 || tail >= T.size() || tail == T.root()) throw usage_error("node has no parent edge");
  std::vector<int> path;
  for (int v = tail; v != T.root(); v = T.parent(v)) path.push_back(v);
  EdgeSets s = root_edge_sets(T.b());
  for (std::size_t k = path.size() - 1; k-- > 0;) s = child_edge_sets(T, s, path[k]);
  return s;
}

}  // namespace solb
