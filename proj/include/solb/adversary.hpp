#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solb/ctree.hpp"
#include "solb/marked.hpp"
#include "solb/olocal.hpp"

namespace solb {

// Gives every node of G degree delta by attaching leaves at its missing ports
// in increasing order (port 1 at the leaf), then hangs a path off the first
// new leaf (at its port 2) until there are exactly n nodes. Nodes of G keep
// their ids. Throws usage_error if n < delta * |V(G)|.
Instance pad_graph(const MarkedTree& G, int delta, long long n);

// An algorithm state together with the probability of reaching it while the
// forced events so far all happened.
struct Branch {
  std::unique_ptr<Algorithm> alg;
  Rational weight;
};

struct FrequentEdge {
  int q = 0;                      // 0 when no port reaches the threshold
  std::vector<Rational> out;      // [p - 1]: mass of decisions with port p out
  Rational all_in = 0;            // mass of decisions with no out-edge
  Rational total = 0;             // mass of all branches
  // P(port q out | no all-in), the quantity compared with 1/delta.
  Rational frequency() const;
};

// Exact version: mixes the branches' decision distributions at this view,
// drops the all-in mass from the base, and returns the smallest port whose
// conditional out-probability is at least 1/delta.
FrequentEdge smallest_frequent_edge(const std::vector<Branch>& branches, const View& view, int delta);

// Sampling version: m forks with seeds derived from `seed`; the smallest port
// whose empirical out-frequency among non-all-in samples is at least
// 1/delta - eps. Deterministic algorithms are sampled once.
FrequentEdge smallest_frequent_edge_sampled(const Algorithm& alg, const View& view, int delta, int m, double eps,
                                            std::uint64_t seed);

struct RewireReport {
  int q = 1;
  std::vector<std::pair<int, int>> xi;  // (node, image) for every node that moves
  int moved_edges = 0;
};

// Swaps the parts behind ports 1 and q at the just-presented node v. The parts
// consist of unpresented nodes reached from v over seen edges. The swap map is
// found by walking both parts with matching ports and double-checked by
// canonical forms; then every edge from a part to the rest of the tree is
// re-attached at the image of its endpoint with both ports kept, and entries
// of W from index `next` on are mapped through the swap. Throws
// invariant_error if the parts are not port-isomorphic or a moved edge has
// been seen.
RewireReport swap_rewire(Instance& inst, const Session& session, int v, int q, std::vector<int>& W,
                         std::size_t next);

enum class AttackMode { oracle, sample };
const char* to_string(AttackMode m);
AttackMode parse_attack_mode(const std::string& s);

struct AttackOptions {
  AttackMode mode = AttackMode::oracle;
  int L = 1;
  long long n = 0;  // 0 means delta * |V(G_T)|
  std::uint64_t seed = 1;
  int D = -1;       // distance-correctness of T; computed when negative
  int samples = 64;
  double eps = 0.05;
  CanonicalOrder order = CanonicalOrder::deepest_first;
  // Largest number of oracle branches kept after merging.
  std::size_t branch_budget = 1 << 16;
};

struct AttackStep {
  int index = 0;   // 1-based position in the query sequence
  int node = -1;   // queried instance node
  int q = 0;       // chosen port, 0 for the last query
  // Oracle mode, all conditioned on the earlier forced events.
  Rational all_in = 0;     // P(no out-edge)
  Rational frequency = 0;  // P(port q out | not all-in)
  Rational event = 0;      // P(port q out)
  std::size_t branches = 0;
  // Sample mode: the realized decision and whether it had port q out.
  std::optional<Decision> decision;
  bool event_realized = false;
  int moved_edges = 0;
};

struct AttackResult {
  int delta = 0;
  int D = 0;
  int L = 0;
  long long n = 0;
  AttackMode mode = AttackMode::oracle;
  std::string algorithm;
  // False when L >= D: the instance is not rewired and nothing is asserted.
  bool claim = false;
  Instance initial;
  Instance final_instance;
  std::vector<int> initial_sequence;
  std::vector<int> final_sequence;
  std::vector<AttackStep> steps;
  // A run of the algorithm on (final instance, final sequence) with the seed;
  // in sample mode this is the attacked run itself.
  RunResult run;
  Verdict verdict;           // of the complete run
  int violation_step = 0;    // query index at which the verdict's violation appears
  int first_invalid_step = 0;  // first prefix whose output cannot be completed, 0 if none
  // Oracle ledger.
  Rational chain = 0;          // P(every forced event)
  Rational failure_bound = 0;  // sum of all-in masses plus chain
  Rational target = 0;         // delta^-|V_R|
  std::string verdict_text() const;
};

// Builds G_T and its canonical mirror sequence, pads to n nodes and plays the
// sequence against the algorithm, rewiring after each query by the chosen
// port. Checks after every step that the instance is isomorphic to G_0 with
// ports differing only at presented nodes and that replaying the queries so
// far yields identical views; at the end checks that all neighbours of the
// last query were queried before and that each forced edge leads towards it.
// In oracle mode the exact failure bound must reach delta^-|V_R|. Throws
// invariant_error on a failed check, usage_error if L < 1.
AttackResult attack(const ConstructionTree& T, const Algorithm& alg, const AttackOptions& opt);

}  // namespace solb
