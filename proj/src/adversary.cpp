#include "solb/adversary.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "solb/algorithms.hpp"
#include "solb/canon.hpp"
#include "solb/errors.hpp"

namespace solb {

Instance pad_graph(const MarkedTree& G, int delta, long long n) {
  const long long base = G.size();
  if (n < delta * base)
    throw usage_error("pad_graph: n = " + std::to_string(n) + " is below delta * |V| = " + std::to_string(delta * base));
  PortAdjacency g = G.adjacency();
  int first_leaf = -1;
  for (int v = 0; v < base; ++v) {
    for (int p = 1; p <= delta; ++p) {
      if (neighbor_at(g, v, p) >= 0) continue;
      int leaf = static_cast<int>(g.size());
      g.emplace_back();
      g[v].push_back({leaf, p});
      g[leaf].push_back({v, 1});
      if (first_leaf < 0) first_leaf = leaf;
    }
    if (static_cast<int>(g[v].size()) != delta) throw usage_error("pad_graph: node has degree above delta");
  }
  if (static_cast<long long>(g.size()) < n) {
    if (first_leaf < 0) throw usage_error("pad_graph: no padding leaf to extend into a path");
    int tail = first_leaf;
    int tail_port = 2;
    while (static_cast<long long>(g.size()) < n) {
      int next = static_cast<int>(g.size());
      g.emplace_back();
      g[tail].push_back({next, tail_port});
      g[next].push_back({tail, 1});
      tail = next;
      tail_port = 2;
    }
  }
  for (auto& list : g) std::sort(list.begin(), list.end(), [](const Half& a, const Half& b) { return a.port < b.port; });
  return Instance(std::move(g));
}

Rational FrequentEdge::frequency() const {
  Rational live = total - all_in;
  if (q == 0 || live == 0) return 0;
  return out[q - 1] / live;
}

namespace {

void choose_port(FrequentEdge& fe, int delta, const Rational& slack) {
  Rational live = fe.total - fe.all_in;
  fe.q = 0;
  if (live <= 0) return;
  for (std::size_t p = 0; p < fe.out.size(); ++p)
    if (fe.out[p] >= live * (Rational(1, delta) - slack)) {
      fe.q = static_cast<int>(p) + 1;
      return;
    }
}

std::uint64_t derive_seed(std::uint64_t seed, long a, long b = -1) {
  return fnv1a(std::to_string(seed) + ':' + std::to_string(a) + ':' + std::to_string(b));
}

}  // namespace

FrequentEdge smallest_frequent_edge(const std::vector<Branch>& branches, const View& view, int delta) {
  const int deg = view.center().degree;
  FrequentEdge fe;
  fe.out.assign(deg, 0);
  for (const Branch& b : branches) {
    Rational sum = 0;
    for (const auto& [d, p] : b.alg->decision_distribution(view)) {
      check_decision(d, deg, b.alg->name());
      if (p < 0) throw protocol_error(b.alg->name() + " reported a negative probability");
      sum += p;
      fe.total += b.weight * p;
      if (d.all_in()) fe.all_in += b.weight * p;
      for (int port = 1; port <= deg; ++port)
        if (d.out(port)) fe.out[port - 1] += b.weight * p;
    }
    if (sum != 1) throw protocol_error(b.alg->name() + " reported probabilities summing to " + sum.str());
  }
  choose_port(fe, delta, 0);
  return fe;
}

FrequentEdge smallest_frequent_edge_sampled(const Algorithm& alg, const View& view, int delta, int m, double eps,
                                            std::uint64_t seed) {
  const int deg = view.center().degree;
  if (alg.deterministic()) m = 1;
  if (m < 1) throw usage_error("at least one sample is needed");
  FrequentEdge fe;
  fe.out.assign(deg, 0);
  for (int j = 0; j < m; ++j) {
    auto copy = alg.fork(derive_seed(seed, j));
    Decision d = copy->decide(view);
    check_decision(d, deg, alg.name());
    fe.total += 1;
    if (d.all_in()) fe.all_in += 1;
    for (int port = 1; port <= deg; ++port)
      if (d.out(port)) fe.out[port - 1] += 1;
  }
  // eps as an exact rational with micro resolution.
  choose_port(fe, delta, Rational(static_cast<long long>(eps * 1e6), 1000000));
  return fe;
}

RewireReport swap_rewire(Instance& inst, const Session& session, int v, int q, std::vector<int>& W, std::size_t next) {
  RewireReport report;
  report.q = q;
  if (q == 1) return report;
  const int n = inst.size();
  const auto& g = inst.adjacency();

  // part[x] = port at v through which x is reached inside G', 0 outside G'.
  std::vector<int> part(n, 0);
  std::vector<int> stack;
  for (int p : {1, q}) {
    int a = inst.neighbor(v, p);
    if (a < 0 || session.presented(a) || !session.seen_edge(v, a)) continue;
    part[a] = p;
    stack.push_back(a);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const Half& h : g[x])
        if (h.to != v && !part[h.to] && !session.presented(h.to) && session.seen_edge(x, h.to)) {
          part[h.to] = p;
          stack.push_back(h.to);
        }
    }
  }
  int a0 = inst.neighbor(v, 1);
  int b0 = inst.neighbor(v, q);
  bool has_a = part[a0] == 1;
  bool has_b = part[b0] == q;
  if (has_a != has_b) throw invariant_error("swap-isomorphism", session.presented_order().size(), "one part is empty");
  if (!has_a) return report;

  // Walk both parts in lockstep, matching ports at both ends of every edge.
  std::vector<int> xi(n, -1);
  std::vector<std::array<int, 4>> walk{{a0, v, b0, v}};
  const long step = static_cast<long>(session.presented_order().size());
  auto fail = [&](const std::string& why) { throw invariant_error("swap-isomorphism", step, why); };
  while (!walk.empty()) {
    auto [a, pa, b, pb] = walk.back();
    walk.pop_back();
    if (inst.degree(a) != inst.degree(b) || inst.port_to(a, pa) != inst.port_to(b, pb))
      fail("nodes " + std::to_string(a) + " and " + std::to_string(b) + " differ");
    xi[a] = b;
    xi[b] = a;
    for (int p = 1; p <= inst.degree(a); ++p) {
      int x = inst.neighbor(a, p);
      int y = inst.neighbor(b, p);
      if (x == pa) continue;
      bool in_x = part[x] == 1;
      bool in_y = part[y] == q;
      if (in_x != in_y) fail("port " + std::to_string(p) + " below " + std::to_string(a) + " leaves only one part");
      if (in_x) walk.push_back({x, a, y, b});
    }
  }
  std::vector<char> keep(n, 0);
  for (int x = 0; x < n; ++x) keep[x] = part[x] != 0;
  FormTable forms;
  FormOptions opt;
  opt.keep = keep;
  if (forms.rooted(g, a0, v, opt) != forms.rooted(g, b0, v, opt)) fail("canonical forms of the parts differ");

  // Seen edges leaving a part end at presented nodes; they stay where they
  // are so that every view shown so far is reproduced exactly.
  std::vector<Instance::Move> moves;
  for (int u = 0; u < n; ++u) {
    if (!part[u]) continue;
    report.xi.emplace_back(u, xi[u]);
    for (const Half& h : g[u]) {
      if (h.to == v || part[h.to]) continue;
      if (session.seen_edge(u, h.to)) {
        if (!session.presented(h.to))
          throw invariant_error("boundary-seen", step, "edge " + std::to_string(u) + "-" + std::to_string(h.to));
        int mirror = inst.neighbor(xi[u], h.port);
        if (mirror < 0 || !session.presented(mirror) || !session.seen_edge(xi[u], mirror))
          throw invariant_error("swap-isomorphism", step, "presented neighbour of " + std::to_string(u) + " has no mirror image");
        continue;
      }
      moves.push_back({u, h.to, xi[u]});
    }
  }
  report.moved_edges = static_cast<int>(moves.size());
  inst.rewire(moves);
  for (std::size_t j = next; j < W.size(); ++j)
    if (part[W[j]]) W[j] = xi[W[j]];
  return report;
}

const char* to_string(AttackMode m) { return m == AttackMode::oracle ? "oracle" : "sample"; }

AttackMode parse_attack_mode(const std::string& s) {
  if (s == "oracle") return AttackMode::oracle;
  if (s == "sample") return AttackMode::sample;
  throw usage_error("mode must be oracle or sample: " + s);
}

std::string AttackResult::verdict_text() const {
  std::string text = verdict.ok() ? "valid" : std::string(to_string(verdict.kind)) + " at step " + std::to_string(violation_step);
  return claim ? text : "no claim (L >= D); " + text;
}

namespace {

// Position (1-based) in the sequence at which the verdict's violation shows up.
int violation_position(const Verdict& verdict, const std::vector<int>& seq, int first_invalid) {
  if (verdict.ok()) return 0;
  if (verdict.kind == ViolationKind::unextendable) return first_invalid;
  int pos = 0;
  for (std::size_t j = 0; j < seq.size(); ++j)
    if (seq[j] == verdict.node || seq[j] == verdict.other) pos = static_cast<int>(j) + 1;
  return pos;
}

int first_invalid_prefix(const Instance& inst, const std::vector<int>& seq, const RunResult& run) {
  std::vector<std::optional<Decision>> partial(inst.size());
  for (std::size_t j = 0; j < seq.size(); ++j) {
    partial[seq[j]] = run.decisions[seq[j]];
    if (!validate_sinkless_orientation(inst, partial).ok()) return static_cast<int>(j) + 1;
  }
  return 0;
}

// The current instance must equal G_0 up to isomorphism, both without ports
// and with ports ignored only at presented nodes.
void check_isomorphic(const Instance& g0, const Instance& cur, const Session& s, long step) {
  FormTable forms;
  FormOptions plain;
  plain.ported = false;
  if (forms.unrooted(g0.adjacency(), plain) != forms.unrooted(cur.adjacency(), plain))
    throw invariant_error("rewire-form", step, "unported canonical forms differ");
  FormOptions mixed;
  mixed.port_free.assign(cur.size(), 0);
  for (int v : s.presented_order()) mixed.port_free[v] = 1;
  FormOptions mixed0;
  mixed0.port_free.assign(g0.size(), 0);
  for (int v : s.presented_order()) mixed0.port_free[v] = 1;
  if (forms.unrooted(g0.adjacency(), mixed0) != forms.unrooted(cur.adjacency(), mixed))
    throw invariant_error("rewire-isomorphism", step, "ported forms differ outside presented nodes");
}

void check_replay(const Instance& cur, int L, const std::vector<int>& W, const std::vector<View>& views, long step) {
  Session replay(cur, L);
  for (std::size_t j = 0; j < views.size(); ++j)
    if (!(replay.present(W[j]) == views[j]))
      throw invariant_error("replay", step, "view of query " + std::to_string(j + 1) + " changed");
}

void merge_into(std::vector<Branch>& out, std::map<std::string, std::size_t>& index, Branch b) {
  auto key = b.alg->state_key();
  if (key) {
    auto [it, fresh] = index.try_emplace(*key, out.size());
    if (!fresh) {
      out[it->second].weight += b.weight;
      return;
    }
  }
  out.push_back(std::move(b));
}

}  // namespace

AttackResult attack(const ConstructionTree& T, const Algorithm& alg, const AttackOptions& opt) {
  if (opt.L < 1) throw usage_error("attack needs locality L >= 1");
  BuildOptions bopt;
  bopt.check_invariants = false;
  BuildTrace trace = build_input_tree(T, {}, bopt);
  AttackResult res;
  res.delta = trace.delta;
  res.D = opt.D >= 0 ? opt.D : check_distance_correct(T, DistanceMode::full).minimum;
  res.L = opt.L;
  res.n = opt.n > 0 ? opt.n : static_cast<long long>(res.delta) * trace.final.size();
  res.mode = opt.mode;
  res.algorithm = alg.name();
  res.claim = opt.L <= res.D - 1;
  res.initial = pad_graph(trace.final, res.delta, res.n);
  res.initial_sequence = canonical_sequence(T, trace, opt.order);

  const int delta = res.delta;
  const int k = static_cast<int>(res.initial_sequence.size());
  res.target = Rational(1);
  for (int j = 0; j < k; ++j) res.target /= delta;

  Instance inst = res.initial;
  std::vector<int> W = res.initial_sequence;

  auto finish_run = [&](RunResult run) {
    res.final_instance = inst;
    res.final_sequence = W;
    res.run = std::move(run);
    res.verdict = validate_sinkless_orientation(inst, res.run.decisions);
    res.first_invalid_step = first_invalid_prefix(inst, W, res.run);
    res.violation_step = violation_position(res.verdict, W, res.first_invalid_step);
  };

  if (!res.claim) {
    auto copy = alg.clone();
    finish_run(run(inst, W, *copy, opt.L, opt.seed));
    for (int j = 0; j < k; ++j) {
      AttackStep st;
      st.index = j + 1;
      st.node = W[j];
      res.steps.push_back(std::move(st));
    }
    return res;
  }

  Session session(inst, opt.L);
  std::vector<View> views;

  std::vector<Branch> branches;
  std::unique_ptr<Algorithm> live;  // sample mode
  RunResult realized;
  realized.decisions.assign(inst.size(), std::nullopt);
  if (opt.mode == AttackMode::oracle) {
    auto a = alg.clone();
    a->init(res.n, opt.L, opt.seed);
    if (!a->has_distribution()) throw usage_error(alg.name() + " has no exact distribution; use sample mode");
    branches.push_back({std::move(a), Rational(1)});
  } else {
    live = alg.clone();
    live->init(res.n, opt.L, opt.seed);
  }
  bool chain_holds = true;  // sample mode: every forced event realized so far

  for (int i = 0; i < k; ++i) {
    const long index = i + 1;
    const int v = W[i];
    AttackStep st;
    st.index = static_cast<int>(index);
    st.node = v;
    View view = session.present(v);
    views.push_back(view);
    const bool last = i == k - 1;

    FrequentEdge fe;
    if (opt.mode == AttackMode::oracle) {
      if (!last && !branches.empty()) {
        fe = smallest_frequent_edge(branches, view, delta);
        st.all_in = fe.all_in / fe.total;
        st.event = fe.q ? fe.out[fe.q - 1] / fe.total : Rational(0);
        st.frequency = fe.frequency();
        res.failure_bound += fe.all_in;
        if (fe.q && st.frequency < Rational(1, delta))
          throw invariant_error("ledger-factor", index, "factor below 1/delta");
        std::vector<Branch> next;
        std::map<std::string, std::size_t> index_of;
        if (fe.q)
          for (const Branch& b : branches)
            for (const auto& [d, p] : b.alg->decision_distribution(view)) {
              if (!d.out(fe.q) || p == 0) continue;
              auto c = b.alg->clone();
              c->commit(view, d);
              merge_into(next, index_of, {std::move(c), b.weight * p});
            }
        if (next.size() > opt.branch_budget)
          throw capacity_error("oracle branches exceed the budget", std::to_string(next.size()));
        branches = std::move(next);
        st.branches = branches.size();
      }
    } else {
      if (!last) fe = smallest_frequent_edge_sampled(*live, view, delta, opt.samples, opt.eps, derive_seed(opt.seed, index));
      Decision d = live->decide(view);
      check_decision(d, inst.degree(v), live->name());
      realized.decisions[v] = d;
      realized.transcript.push_back({.step = static_cast<int>(index), .query = v, .token = session.token(v),
                                     .revealed = session.last_revealed(), .decision = d, .view = view});
      st.decision = d;
    }

    if (!last) {
      st.q = fe.q ? fe.q : 1;
      if (st.decision) {
        st.event_realized = st.decision->out(st.q);
        chain_holds = chain_holds && st.event_realized;
      }
      RewireReport rw = swap_rewire(inst, session, v, st.q, W, i + 1);
      st.moved_edges = rw.moved_edges;
      check_isomorphic(res.initial, inst, session, index);
      check_replay(inst, opt.L, W, views, index);
    }
    res.steps.push_back(std::move(st));
  }

  // Structure at the last query: every neighbour was queried before, and each
  // forced edge is the first edge on the path towards the last query.
  const int w_last = W.back();
  for (const Half& h : inst.adjacency()[w_last])
    if (std::find(W.begin(), W.end() - 1, h.to) == W.end() - 1)
      throw invariant_error("final-neighbors", k, "neighbour " + std::to_string(h.to) + " is not queried before");
  auto dist = bfs_distances(inst.adjacency(), w_last);
  for (int j = 0; j + 1 < k; ++j) {
    int x = inst.neighbor(W[j], res.steps[j].q);
    if (dist[x] != dist[W[j]] - 1)
      throw invariant_error("forced-inward", j + 1, "port " + std::to_string(res.steps[j].q) + " leads away from the last query");
  }

  res.chain = 0;
  for (const Branch& b : branches) res.chain += b.weight;

  if (opt.mode == AttackMode::oracle) {
    // Given the chain, every edge at the last query already points at it.
    res.failure_bound += res.chain;
    if (res.failure_bound < res.target)
      throw invariant_error("ledger-bound", k, "failure bound " + res.failure_bound.str() + " below " + res.target.str());
    auto copy = alg.clone();
    finish_run(run(inst, W, *copy, opt.L, opt.seed));
  } else {
    // The adaptive run must be what the algorithm does on the final instance.
    auto copy = alg.clone();
    RunResult again = run(inst, W, *copy, opt.L, opt.seed);
    for (int j = 0; j < k; ++j)
      if (again.transcript[j].decision != realized.transcript[j].decision ||
          !(again.transcript[j].view == realized.transcript[j].view))
        throw invariant_error("oblivious-replay", j + 1, "run on the final instance differs");
    finish_run(std::move(realized));
    if (chain_holds) {
      for (int j = 0; j + 1 < k; ++j)
        if (!res.run.decisions[W[j]]->out(res.steps[j].q))
          throw invariant_error("forced-inward", j + 1, "forced edge not oriented towards the last query");
      if (res.verdict.ok()) throw invariant_error("chain-violation", k, "all forced events happened but the output is valid");
    }
  }
  return res;
}

}  // namespace solb
