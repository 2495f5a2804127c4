#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "solb/errors.hpp"
#include "solb/ftransform.hpp"

using namespace solb;

namespace {

// Sequence of (label of T node, late) by a plain recursive traversal with split
// children ordered by their symbol at the split star position.
void naive_q(const ConstructionTree& T, int v, std::vector<std::pair<std::string, bool>>& out) {
  if (T.child_count(v) == 1) {
    out.emplace_back(T.label(v).str(), false);
    naive_q(T, T.children(v)[0], out);
    out.emplace_back(T.label(v).str(), true);
    return;
  }
  std::vector<int> kids(T.children(v).begin(), T.children(v).end());
  int star = T.label(v).star_position();
  std::sort(kids.begin(), kids.end(), [&](int a, int b) { return T.label(a).at(star) < T.label(b).at(star); });
  for (int c : kids) naive_q(T, c, out);
}

// Label set of layer i straight from the definition: K holds the early ranks
// whose late twin occurs before i; the source label (star-prefixed on late
// entries) is spread over the positions outside K.
std::set<std::string> layer_labels_by_definition(const ConstructionTree& T, const DfsSequence& q, int i) {
  std::set<int> K;
  for (int k = 0; k < i - 1; ++k)
    if (q.entries[k].late) K.insert(q.entries[k].early_rank);
  const auto& e = q.entries[i - 1];
  std::string x = (e.late ? "*" : "") + T.label(e.node).str();
  int n = static_cast<int>(x.size() + K.size());
  std::vector<int> fixed;
  for (int p = 0; p < n; ++p)
    if (!K.count(p)) fixed.push_back(p);
  std::set<std::string> out;
  std::vector<int> freev(K.begin(), K.end());
  std::vector<int> d(freev.size(), 1);
  while (true) {
    std::string y(n, '?');
    for (std::size_t qq = 0; qq < fixed.size(); ++qq) y[n - 1 - fixed[qq]] = x[x.size() - 1 - qq];
    for (std::size_t k = 0; k < freev.size(); ++k) y[n - 1 - freev[k]] = static_cast<char>('0' + d[k]);
    out.insert(y);
    std::size_t k = 0;
    while (k < d.size() && d[k] == T.b()) d[k++] = 1;
    if (k == d.size()) break;
    ++d[k];
  }
  return out;
}

const ConstructionTree& t2() {
  static ConstructionTree T = build_t2(3);
  return T;
}

const ConstructionTree& f_t2() {
  static ConstructionTree F = f_materialize(f_implicit(t2()));
  return F;
}

}  // namespace

TEST_CASE("dfs_sequence of T_2(3)") {
  const auto& T = t2();
  auto q = dfs_sequence(T);
  REQUIRE(q.entries.size() == 28);
  CHECK(q.reflect_count() == 14);
  std::string flags;
  std::vector<int> lambda;
  for (const auto& e : q.entries) {
    flags += e.late ? 'L' : 'E';
    lambda.push_back(e.lambda);
  }
  CHECK(flags == "EEEELELELLEELELELLEELELELLLL");
  CHECK(lambda == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 2, 2, 3, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 9, 9, 10, 10, 11, 12, 13});
  CHECK(T.label(q.entries[0].node).str() == "1");
  CHECK(T.label(q.entries[1].node).str() == "12");
  CHECK(T.label(q.entries.back().node).str() == "1");
  CHECK(q.entries.back().late);
  CHECK(q.entries.back().lambda == 13);

  std::vector<std::pair<std::string, bool>> naive;
  naive_q(T, T.root(), naive);
  REQUIRE(naive.size() == q.entries.size());
  for (std::size_t i = 0; i < naive.size(); ++i) {
    CHECK(naive[i].first == T.label(q.entries[i].node).str());
    CHECK(naive[i].second == q.entries[i].late);
  }
  // Each node once early and once late, early first, ranks in first-seen order.
  std::map<int, int> first;
  int rank = 0;
  for (std::size_t i = 0; i < q.entries.size(); ++i) {
    const auto& e = q.entries[i];
    if (!e.late) {
      CHECK(first.count(e.node) == 0);
      first[e.node] = static_cast<int>(i);
      CHECK(e.early_rank == ++rank);
    } else {
      REQUIRE(first.count(e.node) == 1);
      CHECK(q.entries[first[e.node]].early_rank == e.early_rank);
    }
  }
}

TEST_CASE("dfs_sequence of the smallest tree") {
  ConstructionTree T(3, {-1, 0}, {Label::parse("1", 3), Label::parse("*1", 3)}, {{1}, {}});
  auto q = dfs_sequence(T);
  REQUIRE(q.entries.size() == 2);
  CHECK_FALSE(q.entries[0].late);
  CHECK(q.entries[1].late);
  CHECK(q.entries[0].lambda == 0);
  CHECK(q.entries[1].lambda == 0);
}

TEST_CASE("f_implicit of T_2(3)") {
  auto I = f_implicit(t2());
  REQUIRE(I.layer_count() == 28);
  CHECK(I.layer(1).pattern.str() == "1");
  CHECK(I.layer(1).size == 1);
  CHECK(I.layer(28).size == boost::multiprecision::pow(BigInt(3), 13));
  CHECK(I.layer(28).kind == LayerKind::leaf_split);
  CHECK(I.total_nodes() == 2484488);
  BigInt sum = 0;
  for (const auto& e : I.sequence().entries) sum += boost::multiprecision::pow(BigInt(3), e.lambda);
  CHECK(I.total_nodes() == sum);
  for (int i = 1; i <= 28; ++i) {
    const auto& L = I.layer(i);
    CHECK((L.kind == LayerKind::reflect) == !L.late);
    if (i < 28) CHECK(I.layer(i + 1).size == L.size * (L.late ? 3 : 1));
    CHECK(L.pattern.freeset().size() == L.free_order.size());
    CHECK(static_cast<int>(L.free_order.size()) == I.sequence().entries[i - 1].lambda);
  }
  // Node-count bounds for one application of F: P_3(1,4) <= |F(T_2(3))| <= P_3(3,4).
  CHECK(I.total_nodes() >= power_tower(3, 1, 4));
  CHECK(I.total_nodes() <= power_tower(3, 3, 4));
}

TEST_CASE("layer patterns follow the definition") {
  const auto& T = t2();
  auto I = f_implicit(T);
  for (int i = 1; i <= I.layer_count(); ++i) {
    if (I.layer(i).size > 3 * 3 * 3 * 3 * 3) continue;
    auto want = layer_labels_by_definition(T, I.sequence(), i);
    std::set<std::string> got;
    for (BigInt x = 0; x < I.layer(i).size; ++x) got.insert(I.label(I.address_at(i, x)).str());
    CHECK_MESSAGE(got == want, "layer " << i);
  }
}

TEST_CASE("pattern-level solidity clauses") {
  // Free sets of reflect-layer patterns, the ancestors' early ranks and the
  // node's own rank split 1..a; the split twin's pattern carries * at a.
  const auto& T = t2();
  auto I = f_implicit(T);
  std::map<int, int> early_layer;
  for (int i = 1; i <= I.layer_count(); ++i)
    if (!I.layer(i).late) early_layer[I.layer(i).source] = i;
  for (int i = 1; i <= I.layer_count(); ++i) {
    const auto& L = I.layer(i);
    std::set<int> J;
    for (int a = T.parent(L.source); a != -1; a = T.parent(a))
      if (T.child_count(a) == 1) J.insert(I.layer(early_layer[a]).early_rank);
    std::set<int> Kset(L.free_order.begin(), L.free_order.end());
    std::set<int> all = J;
    bool disjoint = true;
    for (int k : Kset) disjoint = disjoint && all.insert(k).second;
    disjoint = disjoint && all.insert(L.early_rank).second;
    CHECK(disjoint);
    if (!L.late) {
      CHECK(all.size() == static_cast<std::size_t>(L.early_rank));
      CHECK(*all.rbegin() == L.early_rank);
      CHECK(L.pattern.size() == static_cast<std::size_t>(L.early_rank));
    } else {
      CHECK(L.pattern.at(L.early_rank) == kStar);
      CHECK(L.split_index == L.early_rank);
      CHECK(*all.begin() == 1);
      CHECK(all.size() == static_cast<std::size_t>(*all.rbegin()));
      CHECK(L.pattern.size() == all.size() + 1);
    }
    int d = 1;
    for (int j : J) CHECK(L.pattern.at(j) == T.label(L.source).at(d++));
    CHECK(L.pattern.at(0) == T.label(L.source).at(0));
  }
}

TEST_CASE("implicit_node") {
  auto I = f_implicit(t2());
  auto root = implicit_node(I, 1, {});
  CHECK(root.label.str() == "1");
  CHECK_FALSE(root.parent);
  REQUIRE(root.children.size() == 1);

  REQUIRE(I.layer(6).free_order.size() == 1);
  auto v = implicit_node(I, 6, {2});
  int p = I.layer(6).free_order[0];
  CHECK(v.label.at(p) == '2');
  for (std::size_t q = 0; q < v.label.size(); ++q)
    if (static_cast<int>(q) != p) CHECK(v.label.at(q) == I.layer(6).pattern.at(q));

  CHECK_THROWS_AS(implicit_node(I, 0, {}), usage_error);
  CHECK_THROWS_AS(implicit_node(I, 29, {}), usage_error);
  CHECK_THROWS_AS(implicit_node(I, 6, {}), usage_error);
  CHECK_THROWS_AS(implicit_node(I, 6, {4}), usage_error);

  std::mt19937_64 rng(13);
  for (int round = 0; round < 1000; ++round) {
    int layer = 1 + static_cast<int>(rng() % 27);
    FAddress a = I.address_at(layer, BigInt(rng()) % I.layer(layer).size);
    auto kids = I.children(a);
    REQUIRE(!kids.empty());
    for (const auto& c : kids) CHECK(I.parent(c) == a);
    if (auto par = I.parent(a)) {
      auto sib = I.children(*par);
      CHECK(std::find(sib.begin(), sib.end(), a) != sib.end());
    }
    CHECK(I.address_at(layer, I.index_of(a)) == a);
  }
}

TEST_CASE("layer-limited materialization") {
  auto I = f_implicit(t2());
  auto P = f_materialize(I, 5);
  CHECK(P.size() == 5);
  CHECK(P.layer_count() == 5);
  for (int i = 1; i <= 5; ++i) CHECK(P.layer_members(i).size() == 1);

  // Agrees with implicit_node over the first ten layers.
  auto Q = f_materialize(I, 10);
  auto off = layer_offsets(I);
  for (int i = 1; i <= 10; ++i)
    for (std::uint64_t x = 0; x < off[i] - off[i - 1]; ++x) {
      int id = static_cast<int>(off[i - 1] + x);
      FAddress a = I.address_at(i, x);
      CHECK(Q.label(id) == I.label(a));
      if (auto par = I.parent(a)) CHECK(Q.parent(id) == static_cast<int>(off[i - 2] + I.index_of(*par)));
      if (i < 10) {
        auto kids = I.children(a);
        REQUIRE(kids.size() == static_cast<std::size_t>(Q.child_count(id)));
        for (std::size_t k = 0; k < kids.size(); ++k)
          CHECK(Q.children(id)[k] == static_cast<int>(off[i] + I.index_of(kids[k])));
      }
    }
}

TEST_CASE("budget") {
  auto I = f_implicit(t2());
  try {
    f_materialize(I, std::nullopt, 1000);
    FAIL("expected capacity_error");
  } catch (const capacity_error& e) {
    CHECK(e.demanded == "2484488");
  }
  auto I4 = f_implicit(build_t2(4));
  CHECK_THROWS_AS(f_materialize(I4), capacity_error);
}

TEST_CASE("full F(T_2(3)) is a construction tree") {
  const auto& F = f_t2();
  CHECK(F.size() == 2484488);
  auto rep = validate(F);
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.ok, c.name << ": " << c.witness);
  auto rl = reflect_labels(F);
  auto I = f_implicit(t2());
  BigInt reflect = 0;
  for (int i = 1; i <= I.layer_count(); ++i)
    if (!I.layer(i).late) reflect += I.layer(i).size;
  CHECK(BigInt(rl.size()) == reflect);
  CHECK(is_independent(rl).independent);
  auto ex = is_clearing_exhaustive(rl, 3);
  CHECK(ex.clearing);
}

TEST_CASE("linkage rule on the full tree") {
  // Children agree with their parent on the parent layer's free positions.
  const auto& F = f_t2();
  auto I = f_implicit(t2());
  std::mt19937_64 rng(17);
  for (int round = 0; round < 2000; ++round) {
    int v = static_cast<int>(rng() % static_cast<std::uint64_t>(F.size()));
    if (F.child_count(v) == 0) continue;
    const auto& K = I.layer(F.layer(v)).free_order;
    for (int c : F.children(v))
      for (int p : K) CHECK(F.label(c).at(p) == F.label(v).at(p));
  }
}
