#include <chrono>
#include <set>

#include "doctest.h"
#include "solb/adversary.hpp"
#include "solb/algorithms.hpp"
#include "solb/canon.hpp"
#include "solb/errors.hpp"
#include "trees.hpp"

using namespace solb;

namespace {

const ConstructionTree& t2() {
  static const ConstructionTree T = build_t2(3);
  return T;
}

const BuildTrace& t2_trace() {
  static const BuildTrace trace = build_input_tree(t2());
  return trace;
}

// Orients every port in `out` outwards; deterministic and memoryless.
class FixedPorts final : public Algorithm {
 public:
  explicit FixedPorts(std::set<int> out) : out_(std::move(out)) {}
  std::string name() const override { return "fixed-ports"; }
  void init(long long, int, std::uint64_t) override {}
  Decision decide(const View& view) override {
    Decision d;
    for (int p = 1; p <= view.center().degree; ++p) d.ports.push_back(out_.count(p) ? Orient::out : Orient::in);
    return d;
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<FixedPorts>(*this); }
  bool deterministic() const override { return true; }
  std::optional<std::string> state_key() const override { return ""; }

 private:
  std::set<int> out_;
};

// With probability 1/2 every edge points in, otherwise port 3 points out.
class HalfAllIn final : public Algorithm {
 public:
  std::string name() const override { return "half-all-in"; }
  void init(long long, int, std::uint64_t seed) override { rng_.seed(seed); }
  void reseed(std::uint64_t seed) override { rng_.seed(seed); }
  Decision decide(const View& view) override {
    int deg = view.center().degree;
    if (rng_() % 2) return Decision{std::vector<Orient>(deg, Orient::in)};
    return Decision::single_out(deg, deg);
  }
  std::unique_ptr<Algorithm> clone() const override { return std::make_unique<HalfAllIn>(*this); }
  bool has_distribution() const override { return true; }
  std::vector<std::pair<Decision, Rational>> decision_distribution(const View& view) const override {
    int deg = view.center().degree;
    return {{Decision{std::vector<Orient>(deg, Orient::in)}, Rational(1, 2)},
            {Decision::single_out(deg, deg), Rational(1, 2)}};
  }
  void commit(const View&, const Decision&) override {}
  std::optional<std::string> state_key() const override { return ""; }

 private:
  std::mt19937_64 rng_;
};

View star_view() {
  static const Instance inst(PortAdjacency{{{1, 1}, {2, 2}, {3, 3}}, {{0, 1}}, {{0, 1}}, {{0, 1}}});
  Session s(inst, 1);
  return s.present(0);
}

std::vector<Branch> single(const Algorithm& a) {
  std::vector<Branch> b;
  b.push_back({a.clone(), Rational(1)});
  b.back().alg->init(4, 1, 1);
  return b;
}

AttackOptions opts(AttackMode mode, int L, std::uint64_t seed = 1) {
  AttackOptions o;
  o.mode = mode;
  o.L = L;
  o.n = 120;
  o.seed = seed;
  o.D = 2;
  return o;
}

int plain_form(const Instance& inst) {
  static FormTable table;
  FormOptions o;
  o.ported = false;
  return table.unrooted(inst.adjacency(), o);
}

}  // namespace

TEST_CASE("pad_graph") {
  const MarkedTree& G = t2_trace().final;
  REQUIRE(G.size() == 40);
  Instance inst = pad_graph(G, 3, 120);
  CHECK(inst.size() == 120);
  for (int v = 0; v < G.size(); ++v) {
    CHECK(inst.degree(v) == 3);
    for (const Half& h : G.neighbors(v)) CHECK(inst.port_to(v, h.to) == h.port);
  }
  // 42 padding leaves bring the tree to 82 nodes; the path takes one leaf
  // to degree 2 and ends in a new leaf.
  int leaves = 0;
  for (int v = 40; v < 120; ++v) leaves += inst.degree(v) == 1;
  CHECK(leaves == 42);
  CHECK_THROWS_AS(pad_graph(G, 3, 119), usage_error);
  CHECK(pad_graph(G, 3, 82 + 38).size() == 120);
  CHECK(pad_graph(G, 3, 200).size() == 200);
}

TEST_CASE("smallest frequent edge") {
  View v = star_view();
  auto port1 = make_algorithm("port1-det");
  CHECK(smallest_frequent_edge(single(*port1), v, 3).q == 1);
  auto uniform = make_algorithm("uniform-single-out");
  auto fe = smallest_frequent_edge(single(*uniform), v, 3);
  CHECK(fe.q == 1);
  CHECK(fe.frequency() == Rational(1, 3));
  FixedPorts two_three({2, 3});
  CHECK(smallest_frequent_edge(single(two_three), v, 3).q == 2);
  HalfAllIn half;
  auto fh = smallest_frequent_edge(single(half), v, 3);
  CHECK(fh.q == 3);
  CHECK(fh.all_in == Rational(1, 2));
  CHECK(fh.frequency() == 1);

  // A mixture of two branches: port 2 with weight 1/4, port 1 with 3/4.
  std::vector<Branch> mix;
  mix.push_back({std::make_unique<FixedPorts>(std::set<int>{2}), Rational(1, 4)});
  mix.push_back({std::make_unique<FixedPorts>(std::set<int>{1}), Rational(3, 4)});
  CHECK(smallest_frequent_edge(mix, v, 3).q == 1);
  mix[0].weight = Rational(3, 4);
  mix[1].weight = Rational(1, 4);
  CHECK(smallest_frequent_edge(mix, v, 3).q == 2);
  // Exactly 1/Δ is frequent; weights need not be normalised.
  mix[0].weight = Rational(2, 7);
  mix[1].weight = Rational(1, 7);
  CHECK(smallest_frequent_edge(mix, v, 3).q == 1);

  auto sampled = smallest_frequent_edge_sampled(*uniform, v, 3, 3000, 0.05, 7);
  CHECK(sampled.q == 1);
  CHECK(smallest_frequent_edge_sampled(two_three, v, 3, 10, 0.0, 1).q == 2);
  CHECK(smallest_frequent_edge_sampled(half, v, 3, 200, 0.0, 1).q == 3);
}

TEST_CASE("swap_rewire: no-op for port 1, hard error without symmetry") {
  Instance inst = pad_graph(t2_trace().final, 3, 120);
  Instance before = inst;
  Session s(inst, 1);
  std::vector<int> W = canonical_sequence(t2(), t2_trace());
  std::vector<int> W0 = W;
  s.present(W[0]);
  auto r = swap_rewire(inst, s, W[0], 1, W, 1);
  CHECK(r.moved_edges == 0);
  CHECK(W == W0);
  CHECK(inst.adjacency() == before.adjacency());

  // Behind port 1 a path of two nodes, behind port 2 a single leaf.
  PortAdjacency g(4);
  auto link = [&](int a, int pa, int b, int pb) {
    g[a].push_back({b, pa});
    g[b].push_back({a, pb});
  };
  link(0, 1, 1, 1);
  link(1, 2, 2, 1);
  link(0, 2, 3, 1);
  Instance lop(g);
  Session t(lop, 2);
  t.present(0);
  std::vector<int> none;
  try {
    swap_rewire(lop, t, 0, 2, none, 0);
    FAIL("expected an invariant error");
  } catch (const invariant_error& e) {
    CHECK(e.clause == "swap-isomorphism");
  }
}

TEST_CASE("attack against port1-det changes nothing and fails at the last query") {
  auto alg = make_algorithm("port1-det");
  for (AttackMode mode : {AttackMode::sample, AttackMode::oracle}) {
    auto r = attack(t2(), *alg, opts(mode, 1));
    CHECK(r.claim);
    CHECK(r.steps.size() == 14);
    for (const auto& st : r.steps) CHECK(st.moved_edges == 0);
    CHECK(r.final_sequence == r.initial_sequence);
    CHECK(r.final_instance.adjacency() == r.initial.adjacency());
    CHECK_FALSE(r.verdict.ok());
    CHECK(r.violation_step == 14);
    CHECK(r.verdict_text() == "conflict at step 14");
    // The partial output stops being completable once w_last is surrounded.
    CHECK(r.first_invalid_step == 12);
  }
}

TEST_CASE("attack against port2-det rewires into an isomorphic instance") {
  auto alg = make_algorithm("port2-det");
  auto r = attack(t2(), *alg, opts(AttackMode::sample, 1));
  int moved = 0;
  for (int j = 0; j + 1 < 14; ++j) {
    CHECK(r.steps[j].q == 2);
    CHECK(r.steps[j].event_realized);
    moved += r.steps[j].moved_edges;
  }
  CHECK(moved > 0);
  CHECK(r.final_sequence != r.initial_sequence);
  CHECK(plain_form(r.final_instance) == plain_form(r.initial));
  CHECK_FALSE(r.verdict.ok());
  CHECK(r.violation_step == 14);
  // Every forced edge is the first edge towards the last query.
  auto dist = bfs_distances(r.final_instance.adjacency(), r.final_sequence.back());
  for (int j = 0; j + 1 < 14; ++j) {
    int w = r.final_sequence[j];
    CHECK(dist[r.final_instance.neighbor(w, 2)] == dist[w] - 1);
  }
}

TEST_CASE("deterministic algorithms always fail at locality 1") {
  std::vector<std::string> names{"port1-det", "port2-det", "port3-det", "greedy-lowest-free", "leafward"};
  for (const auto& name : names) {
    auto alg = make_algorithm(name);
    auto r = attack(t2(), *alg, opts(AttackMode::sample, 1));
    CHECK_MESSAGE(!r.verdict.ok(), name);
  }
  int failures = 0;
  double worst_ms = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    auto alg = make_algorithm("random-pref");
    auto t0 = std::chrono::steady_clock::now();
    auto r = attack(t2(), *alg, opts(AttackMode::sample, 1, seed));
    worst_ms = std::max(worst_ms, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    failures += !r.verdict.ok();
  }
  CHECK(failures == 100);
  CHECK(worst_ms < 1000);
}

TEST_CASE("oracle ledger for randomised algorithms") {
  Rational bound(1);
  for (int j = 0; j < 14; ++j) bound /= 3;

  auto uniform = make_algorithm("uniform-single-out");
  auto r = attack(t2(), *uniform, opts(AttackMode::oracle, 1));
  CHECK(r.target == bound);
  CHECK(r.chain == bound * 3);
  CHECK(r.failure_bound == bound * 3);
  for (int j = 0; j + 1 < 14; ++j) {
    CHECK(r.steps[j].q == 1);
    CHECK(r.steps[j].frequency == Rational(1, 3));
    CHECK(r.steps[j].all_in == 0);
  }
  CHECK(r.steps.back().q == 0);

  // adversarial-worst: the chosen port is the pivot of the view, which the
  // attack has to rewire for.
  auto worst = make_algorithm("adversarial-worst");
  auto w = attack(t2(), *worst, opts(AttackMode::oracle, 1));
  CHECK(w.failure_bound >= bound);
  Session replay(w.final_instance, 1);
  int not_one = 0;
  for (int j = 0; j + 1 < 14; ++j) {
    View v = replay.present(w.final_sequence[j]);
    Decision pivot = worst->decision_distribution(v)[0].first;
    CHECK(pivot.out(w.steps[j].q));
    not_one += w.steps[j].q != 1;
  }
  CHECK(not_one > 0);

  // random-greedy remembers its decisions; conditioning on the forced port
  // leaves one state per step, and every port was still free when chosen.
  auto rg = make_algorithm("random-greedy");
  auto g = attack(t2(), *rg, opts(AttackMode::oracle, 1));
  CHECK(g.chain == bound * 3);
  for (int j = 0; j + 1 < 14; ++j) CHECK(g.steps[j].branches == 1);

  // All-in mass counts as failure straight away.
  HalfAllIn half;
  auto h = attack(t2(), half, opts(AttackMode::oracle, 1));
  CHECK(h.steps[0].all_in == Rational(1, 2));
  CHECK(h.failure_bound >= Rational(1, 2));
}

TEST_CASE("oracle instances do not depend on the seed") {
  auto worst = make_algorithm("adversarial-worst");
  auto a = attack(t2(), *worst, opts(AttackMode::oracle, 1, 1));
  auto b = attack(t2(), *worst, opts(AttackMode::oracle, 1, 987654321));
  CHECK(a.final_instance.adjacency() == b.final_instance.adjacency());
  CHECK(a.final_sequence == b.final_sequence);
  CHECK(a.failure_bound == b.failure_bound);
}

TEST_CASE("no claim at locality D") {
  for (const std::string& name : builtin_algorithms()) {
    auto alg = make_algorithm(name);
    for (AttackMode mode : {AttackMode::sample, AttackMode::oracle}) {
      auto r = attack(t2(), *alg, opts(mode, 2));
      CHECK_FALSE(r.claim);
      CHECK(r.final_instance.adjacency() == r.initial.adjacency());
      CHECK(r.verdict_text().rfind("no claim", 0) == 0);
    }
  }
  int survived = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    auto alg = make_algorithm("leafward");
    survived += attack(t2(), *alg, opts(AttackMode::sample, 2, seed)).verdict.ok();
  }
  CHECK(survived == 10);
}

TEST_CASE("attack preconditions") {
  auto alg = make_algorithm("port1-det");
  CHECK_THROWS_AS(attack(t2(), *alg, opts(AttackMode::sample, 0)), usage_error);
  AttackOptions small = opts(AttackMode::sample, 1);
  small.n = 100;
  CHECK_THROWS_AS(attack(t2(), *alg, small), usage_error);
  AttackOptions computed = opts(AttackMode::sample, 1);
  computed.D = -1;
  CHECK(attack(t2(), *alg, computed).D == 2);
  CHECK(parse_attack_mode("sample") == AttackMode::sample);
  CHECK_THROWS_AS(parse_attack_mode("exact"), usage_error);
}
