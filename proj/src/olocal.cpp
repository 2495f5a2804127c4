#include "solb/olocal.hpp"

#include <algorithm>
#include <deque>

#include "solb/errors.hpp"

namespace solb {

Instance::Instance(PortAdjacency g) : g_(std::move(g)) {
  if (g_.empty()) throw usage_error("instance has no nodes");
  if (!is_ported_tree(g_, static_cast<int>(g_.size()), true))
    throw usage_error("instance must be a tree with ports 1..deg at every node");
}

void Instance::rewire(const std::vector<Move>& moves) {
  struct Pending {
    int to, other, port_to, port_other;
  };
  std::vector<Pending> add;
  for (const Move& m : moves) {
    int pf = port_of(g_, m.from, m.other);
    int po = port_of(g_, m.other, m.from);
    if (pf < 0) throw usage_error("rewire: no edge " + std::to_string(m.from) + "-" + std::to_string(m.other));
    add.push_back({m.to, m.other, pf, po});
  }
  for (const Move& m : moves) {
    std::erase_if(g_[m.from], [&](const Half& h) { return h.to == m.other; });
    std::erase_if(g_[m.other], [&](const Half& h) { return h.to == m.from; });
  }
  for (const Pending& a : add) {
    g_[a.to].push_back({a.other, a.port_to});
    g_[a.other].push_back({a.to, a.port_other});
  }
  for (auto& list : g_) std::sort(list.begin(), list.end(), [](const Half& x, const Half& y) { return x.port < y.port; });
  if (!is_ported_tree(g_, static_cast<int>(g_.size()), true))
    throw usage_error("rewire produced something other than a ported tree");
}

Decision Decision::single_out(int degree, int port) {
  if (port < 1 || port > degree) throw usage_error("single_out: port out of range");
  Decision d;
  d.ports.assign(degree, Orient::in);
  d.ports[port - 1] = Orient::out;
  return d;
}

int Decision::out_count() const {
  return static_cast<int>(std::count(ports.begin(), ports.end(), Orient::out));
}

std::string Decision::str() const {
  std::string s;
  for (Orient o : ports) s.push_back(static_cast<char>(o));
  return s;
}

Decision Decision::parse(const std::string& s) {
  Decision d;
  for (char c : s) {
    if (c != 'O' && c != 'I') throw parse_error("decision letters must be O or I: " + s);
    d.ports.push_back(static_cast<Orient>(c));
  }
  return d;
}

const ViewNode* View::find(int token) const {
  for (const ViewNode& n : nodes)
    if (n.token == token) return &n;
  return nullptr;
}

std::string View::shape() const {
  std::string s = std::to_string(radius);
  for (const ViewNode& n : nodes) {
    s += '|' + std::to_string(n.dist) + ':' + std::to_string(n.degree);
    for (int t : n.ports) {
      s += ',';
      if (t == kOutside) {
        s += '-';
        continue;
      }
      auto it = std::find_if(nodes.begin(), nodes.end(), [&](const ViewNode& m) { return m.token == t; });
      s += std::to_string(it - nodes.begin());
    }
  }
  return s;
}

Session::Session(const Instance& inst, int L)
    : inst_(&inst), L_(L), token_(inst.size(), -1), presented_(inst.size(), 0) {
  if (L < 0) throw usage_error("radius must be non-negative");
}

std::size_t Session::seen_node_count() const {
  return static_cast<std::size_t>(std::count_if(token_.begin(), token_.end(), [](int t) { return t >= 0; }));
}

View Session::present(int v) {
  const int n = inst_->size();
  if (static_cast<std::size_t>(token_.size()) != static_cast<std::size_t>(n))
    throw usage_error("instance size changed during a session");
  if (v < 0 || v >= n) throw usage_error("query out of range: " + std::to_string(v));
  if (presented_[v]) throw usage_error("node presented twice: " + std::to_string(v));
  presented_[v] = 1;
  order_.push_back(v);
  revealed_.clear();

  const PortAdjacency& g = inst_->adjacency();
  std::vector<int> ball{v};
  std::vector<int> dist(n, -1);
  dist[v] = 0;
  for (std::size_t k = 0; k < ball.size(); ++k) {
    int u = ball[k];
    if (dist[u] >= L_) continue;
    for (int p = 1; p <= inst_->degree(u); ++p) {
      int w = inst_->neighbor(u, p);
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      ball.push_back(w);
    }
  }
  for (int u : ball)
    if (token_[u] < 0) {
      token_[u] = next_token_++;
      revealed_.push_back(token_[u]);
    }

  View view;
  view.radius = L_;
  for (int u : ball) {
    ViewNode node;
    node.token = token_[u];
    node.dist = dist[u];
    node.degree = inst_->degree(u);
    node.ports.assign(node.degree, kOutside);
    for (const Half& h : g[u]) {
      if (dist[h.to] < 0) continue;
      node.ports[h.port - 1] = token_[h.to];
      if (dist[u] < L_ && dist[h.to] <= L_) seen_edges_.insert(std::minmax(u, h.to));
    }
    view.nodes.push_back(std::move(node));
  }
  return view;
}

std::vector<std::pair<Decision, Rational>> Algorithm::decision_distribution(const View& view) const {
  if (!deterministic()) throw usage_error(name() + " does not expose an exact decision distribution");
  auto copy = clone();
  return {{copy->decide(view), Rational(1)}};
}

void Algorithm::commit(const View& view, const Decision& d) {
  if (!deterministic()) throw usage_error(name() + " cannot be driven by commit");
  if (decide(view) != d) throw protocol_error(name() + ": committed decision differs from its own");
}

std::unique_ptr<Algorithm> Algorithm::fork(std::uint64_t seed) const {
  auto copy = clone();
  copy->reseed(seed);
  return copy;
}

void check_decision(const Decision& d, int degree, const std::string& who) {
  if (static_cast<int>(d.ports.size()) != degree)
    throw protocol_error(who + " returned " + std::to_string(d.ports.size()) + " orientations for a node of degree " +
                         std::to_string(degree));
}

RunResult run(const Instance& inst, const std::vector<int>& queries, Algorithm& alg, int L, std::uint64_t seed) {
  Session session(inst, L);
  alg.init(inst.size(), L, seed);
  RunResult result;
  result.decisions.assign(inst.size(), std::nullopt);
  int step = 0;
  for (int q : queries) {
    TranscriptRecord rec;
    rec.step = ++step;
    rec.query = q;
    rec.view = session.present(q);
    rec.token = session.token(q);
    rec.revealed = session.last_revealed();
    rec.decision = alg.decide(rec.view);
    check_decision(rec.decision, inst.degree(q), alg.name());
    result.decisions[q] = rec.decision;
    result.transcript.push_back(std::move(rec));
  }
  return result;
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::none: return "none";
    case ViolationKind::conflict: return "conflict";
    case ViolationKind::sink: return "sink";
    case ViolationKind::unextendable: return "unextendable";
  }
  return "?";
}

Verdict validate_sinkless_orientation(const Instance& inst, const std::vector<std::optional<Decision>>& decisions) {
  const int n = inst.size();
  if (static_cast<int>(decisions.size()) != n) throw usage_error("one decision slot per node expected");
  for (int u = 0; u < n; ++u)
    if (decisions[u]) check_decision(*decisions[u], inst.degree(u), "validator input");

  for (int u = 0; u < n; ++u) {
    if (!decisions[u]) continue;
    for (int p = 1; p <= inst.degree(u); ++p) {
      int w = inst.neighbor(u, p);
      if (w < u || !decisions[w]) continue;
      bool ou = decisions[u]->out(p);
      bool ow = decisions[w]->out(inst.port_to(w, u));
      if (ou == ow)
        return {ViolationKind::conflict, u, w, std::string("edge oriented ") + (ou ? "out" : "in") + " at both ends"};
    }
  }
  for (int u = 0; u < n; ++u)
    if (decisions[u] && inst.degree(u) >= 3 && decisions[u]->all_in())
      return {ViolationKind::sink, u, -1, "all " + std::to_string(inst.degree(u)) + " edges point in"};

  // Undecided components: a tree on k nodes has k - 1 free edges, so it can
  // supply an out-edge to every node exactly when some node needs none.
  std::vector<char> done(n, 0);
  for (int s = 0; s < n; ++s) {
    if (decisions[s] || done[s]) continue;
    bool satisfiable = false;
    int size = 0;
    std::deque<int> queue{s};
    done[s] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      ++size;
      if (inst.degree(u) < 3) satisfiable = true;
      for (int p = 1; p <= inst.degree(u); ++p) {
        int w = inst.neighbor(u, p);
        if (decisions[w]) {
          if (!decisions[w]->out(inst.port_to(w, u))) satisfiable = true;
        } else if (!done[w]) {
          done[w] = 1;
          queue.push_back(w);
        }
      }
    }
    if (!satisfiable)
      return {ViolationKind::unextendable, s, -1,
              "undecided component of " + std::to_string(size) + " nodes cannot give every node an out-edge"};
  }
  return {};
}

}  // namespace solb
