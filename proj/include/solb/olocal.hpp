#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "solb/graph.hpp"

namespace solb {

using Rational = boost::multiprecision::cpp_rational;

// An undirected tree with port numbers 1..deg at every node. Node ids are
// internal to the simulator and never shown to algorithms.
class Instance {
 public:
  Instance() = default;
  // Throws usage_error unless g is a connected tree with dense ports.
  explicit Instance(PortAdjacency g);

  int size() const { return static_cast<int>(g_.size()); }
  int degree(int v) const { return static_cast<int>(g_[v].size()); }
  int neighbor(int v, int port) const { return neighbor_at(g_, v, port); }
  int port_to(int v, int u) const { return port_of(g_, v, u); }
  const PortAdjacency& adjacency() const { return g_; }

  // Replaces each edge {from, other} by {to, other}, keeping the port numbers
  // at both ends; all moves are applied together, then the result is
  // validated (usage_error on failure).
  struct Move {
    int from = -1;
    int other = -1;
    int to = -1;
  };
  void rewire(const std::vector<Move>& moves);

 private:
  PortAdjacency g_;
};

enum class Orient : char { out = 'O', in = 'I' };

// Orientation of every edge at the queried node, indexed by port - 1.
struct Decision {
  std::vector<Orient> ports;

  static Decision single_out(int degree, int port);
  bool out(int port) const { return ports.at(port - 1) == Orient::out; }
  int out_count() const;
  bool all_in() const { return out_count() == 0; }
  std::string str() const;  // one letter per port, O or I
  static Decision parse(const std::string& s);
  friend bool operator==(const Decision&, const Decision&) = default;
  friend auto operator<=>(const Decision&, const Decision&) = default;
};

constexpr int kOutside = -1;

// A node of a view: its token, its distance from the centre, its degree in
// the instance and, per port, the token of the neighbour or kOutside when the
// neighbour lies beyond the radius.
struct ViewNode {
  int token = 0;
  int dist = 0;
  int degree = 0;
  std::vector<int> ports;
  friend bool operator==(const ViewNode&, const ViewNode&) = default;
};

// The radius-L ball around the queried node. Nodes are listed in breadth-first
// order from the centre, exploring ports in increasing order.
struct View {
  int radius = 0;
  std::vector<ViewNode> nodes;

  const ViewNode& center() const { return nodes.front(); }
  const ViewNode* find(int token) const;
  // Token-free description of the ball's shape, equal for balls that are
  // isomorphic including ports.
  std::string shape() const;
  friend bool operator==(const View&, const View&) = default;
};

// Reveals views with stable tokens and records what has been seen: a node is
// seen once it lies within distance L of a presented node, an edge once both
// endpoints do for a single presented node.
class Session {
 public:
  Session(const Instance& inst, int L);

  // Presents v, allocating tokens for newly seen nodes in breadth-first order.
  // Throws usage_error if v was presented before.
  View present(int v);

  int radius() const { return L_; }
  bool presented(int v) const { return presented_[v] != 0; }
  const std::vector<int>& presented_order() const { return order_; }
  bool seen(int v) const { return token_[v] >= 0; }
  bool seen_edge(int u, int v) const { return seen_edges_.count(std::minmax(u, v)) > 0; }
  std::size_t seen_node_count() const;
  std::size_t seen_edge_count() const { return seen_edges_.size(); }
  int token(int v) const { return token_[v]; }
  // Tokens first allocated by the most recent present().
  const std::vector<int>& last_revealed() const { return revealed_; }

 private:
  const Instance* inst_;
  int L_;
  int next_token_ = 0;
  std::vector<int> token_;
  std::vector<char> presented_;
  std::vector<int> order_;
  std::vector<int> revealed_;
  std::set<std::pair<int, int>> seen_edges_;
};

// The contract an online algorithm implements. decide() may draw randomness
// from the state seeded by init(); the exact-distribution interface is
// optional and used by the adversary's oracle mode.
class Algorithm {
 public:
  virtual ~Algorithm() = default;
  virtual std::string name() const = 0;
  virtual void init(long long n, int L, std::uint64_t seed) = 0;
  virtual Decision decide(const View& view) = 0;
  // Exact copy of the current state, randomness included.
  virtual std::unique_ptr<Algorithm> clone() const = 0;
  // Replaces the randomness source without touching the remembered history.
  virtual void reseed(std::uint64_t) {}
  virtual bool deterministic() const { return false; }

  // Exact probability of each decision decide(view) can return. Deterministic
  // algorithms get this from decide() on a clone.
  virtual bool has_distribution() const { return deterministic(); }
  virtual std::vector<std::pair<Decision, Rational>> decision_distribution(const View& view) const;
  // Moves to the state reached after returning d at this view.
  virtual void commit(const View& view, const Decision& d);
  // Equal keys promise equal future behaviour; nullopt never merges.
  virtual std::optional<std::string> state_key() const { return std::nullopt; }

  // Clone with fresh, independent downstream randomness.
  std::unique_ptr<Algorithm> fork(std::uint64_t seed) const;
};

struct TranscriptRecord {
  int step = 0;
  int query = -1;   // instance node, for the record only
  int token = -1;   // token of the queried node
  std::vector<int> revealed;
  Decision decision;
  View view;
};

struct RunResult {
  std::vector<TranscriptRecord> transcript;
  std::vector<std::optional<Decision>> decisions;  // by instance node
};

// Sequential simulation over a partial or full query sequence. Throws
// protocol_error if the algorithm returns a decision of the wrong size.
RunResult run(const Instance& inst, const std::vector<int>& queries, Algorithm& alg, int L, std::uint64_t seed);

// Checks one decision against the queried node's degree.
void check_decision(const Decision& d, int degree, const std::string& who);

enum class ViolationKind { none, conflict, sink, unextendable };
const char* to_string(ViolationKind k);

struct Verdict {
  ViolationKind kind = ViolationKind::none;
  int node = -1;
  int other = -1;  // the neighbour for a conflict
  std::string detail;
  bool ok() const { return kind == ViolationKind::none; }
};

// A partial output is fine when it extends to a sinkless orientation of the
// whole tree. Reports, in this order: two decided neighbours disagreeing on
// their edge; a decided node of degree >= 3 with every edge in; a component of
// undecided nodes in which every node needs an outgoing edge but only the
// component's internal edges are still free.
Verdict validate_sinkless_orientation(const Instance& inst, const std::vector<std::optional<Decision>>& decisions);

}  // namespace solb
