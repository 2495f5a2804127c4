#pragma once

#include <string>

#include "json.hpp"
#include "solb/adversary.hpp"
#include "solb/ctree.hpp"
#include "solb/ftransform.hpp"
#include "solb/labelings.hpp"
#include "solb/marked.hpp"
#include "solb/olocal.hpp"
#include "solb/tower.hpp"

namespace solb {

// Keys keep their insertion order so that output is stable and readable.
using Json = nlohmann::ordered_json;

std::string to_string(const Rational& r);
std::string to_string(const BigInt& x);

// {b, nodes: [{id, parent, children, label, kind}]}, parent -1 at the root.
Json tree_to_json(const ConstructionTree& T);
// Throws parse_error on malformed JSON; structural problems surface as
// usage_error from the tree constructor.
ConstructionTree tree_from_json(const Json& j);
ConstructionTree read_tree_file(const std::string& path);
std::string tree_to_dot(const ConstructionTree& T);

Json validation_to_json(const ValidationReport& r);

// Layer table plus the exact node count.
Json implicit_to_json(const ImplicitFTree& I, const ConstructionTree& T);

// Per tree edge, named by its tail: the labels of both ends and psi, pi.
Json labelings_to_json(const ConstructionTree& T, const EdgeLabeling& E);

// {delta, nodes: [{id, label, marked, neighbors: [[to, port]...]}]}.
Json marked_to_json(const MarkedTree& G);
std::string marked_to_dot(const MarkedTree& G);
// One JSON object per build step, newline terminated.
std::string trace_to_jsonl(const BuildTrace& trace);

Json distance_to_json(const DistanceReport& r);
Json bound_to_json(const BoundReport& r, const SymNum& n, int delta);

// {n, edges: [[u, port at u, v, port at v]...]} with u < v, sorted.
Json instance_to_json(const Instance& inst);
// Throws parse_error on malformed JSON, usage_error if it is not a ported tree.
Instance instance_from_json(const Json& j);

// {step, query, token, revealed_tokens, decision}, one line per query.
std::string transcript_to_jsonl(const RunResult& run);

// Instance, sequences, verdict, per-step ledger and the totals.
Json attack_to_json(const AttackResult& res);

}  // namespace solb
