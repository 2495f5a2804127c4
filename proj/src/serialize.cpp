#include "solb/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "solb/errors.hpp"

namespace solb {

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string to_string(const BigInt& x) { return x.str(); }

namespace {

Json label_list(const std::vector<Label>& labels) {
  Json a = Json::array();
  for (const Label& l : labels) a.push_back(l.str());
  return a;
}

// DOT string literal with quotes and backslashes escaped.
std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw parse_error(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw parse_error(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

Json tree_to_json(const ConstructionTree& T) {
  Json nodes = Json::array();
  for (int v = 0; v < T.size(); ++v) {
    auto ch = T.children(v);
    nodes.push_back({{"id", v},
                     {"parent", T.parent(v)},
                     {"children", std::vector<int>(ch.begin(), ch.end())},
                     {"label", T.label(v).str()},
                     {"kind", to_string(T.kind(v))}});
  }
  return {{"b", T.b()}, {"nodes", std::move(nodes)}};
}

ConstructionTree tree_from_json(const Json& j) {
  int b = field<int>(j, "b", "tree");
  if (b < 2 || b > 9) throw parse_error("tree: b must lie in 2..9");
  if (!j.contains("nodes") || !j["nodes"].is_array()) throw parse_error("tree: 'nodes' must be an array");
  const Json& nodes = j["nodes"];
  const int n = static_cast<int>(nodes.size());
  std::vector<int> parent(n);
  std::vector<Label> labels(n);
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    const Json& x = nodes[v];
    std::string where = "tree node " + std::to_string(v);
    if (field<int>(x, "id", where) != v) throw parse_error(where + ": ids must be 0..n-1 in order");
    parent[v] = field<int>(x, "parent", where);
    children[v] = field<std::vector<int>>(x, "children", where);
    try {
      labels[v] = Label::parse(field<std::string>(x, "label", where), b);
    } catch (const usage_error& e) {
      throw parse_error(where + ": " + e.what());
    }
  }
  return ConstructionTree(b, std::move(parent), std::move(labels), children);
}

ConstructionTree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return tree_from_json(j);
}

std::string tree_to_dot(const ConstructionTree& T) {
  std::ostringstream os;
  os << "digraph T {\n  node [fontname=\"monospace\"];\n";
  for (int v = 0; v < T.size(); ++v)
    os << "  n" << v << " [label=" << quoted(T.label(v).str())
       << (T.kind(v) == NodeKind::reflect ? ", shape=box" : ", shape=ellipse") << "];\n";
  for (int v = 0; v < T.size(); ++v)
    for (int c : T.children(v)) os << "  n" << v << " -> n" << c << ";\n";
  os << "}\n";
  return os.str();
}

Json validation_to_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const CheckResult& c : r.checks) {
    Json x = {{"name", c.name}, {"ok", c.ok}};
    if (!c.ok) x["witness"] = c.witness;
    checks.push_back(std::move(x));
  }
  Json out = {{"ok", r.ok()}, {"checks", std::move(checks)}};
  if (!r.ok()) out["first_failure"] = r.first_failure();
  return out;
}

Json implicit_to_json(const ImplicitFTree& I, const ConstructionTree& T) {
  Json layers = Json::array();
  for (int i = 1; i <= I.layer_count(); ++i) {
    const FLayer& l = I.layer(i);
    Json x = {{"layer", i},
              {"source", T.label(l.source).str()},
              {"late", l.late},
              {"kind", to_string(l.kind)},
              {"pattern", l.pattern.str()},
              {"free_order", l.free_order},
              {"size", to_string(l.size)}};
    if (l.kind != LayerKind::reflect) x["split_index"] = l.split_index;
    layers.push_back(std::move(x));
  }
  return {{"b", I.b()}, {"layers", std::move(layers)}, {"total_nodes", to_string(I.total_nodes())}};
}

Json labelings_to_json(const ConstructionTree& T, const EdgeLabeling& E) {
  Json edges = Json::array();
  for (int v = 0; v < T.size(); ++v) {
    if (T.parent(v) < 0) continue;
    const EdgeSets& s = E.at(v);
    edges.push_back({{"tail", v},
                     {"head", T.parent(v)},
                     {"tail_label", T.label(v).str()},
                     {"head_label", T.label(T.parent(v)).str()},
                     {"psi", label_list(s.psi)},
                     {"pi", label_list(s.pi)}});
  }
  return {{"b", T.b()}, {"edges", std::move(edges)}};
}

Json marked_to_json(const MarkedTree& G) {
  Json nodes = Json::array();
  for (int v = 0; v < G.size(); ++v) {
    Json nb = Json::array();
    for (const Half& h : G.neighbors(v)) nb.push_back({h.to, h.port});
    nodes.push_back({{"id", v}, {"label", G.label(v).str()}, {"marked", G.marked(v)}, {"neighbors", std::move(nb)}});
  }
  return {{"delta", G.delta()}, {"nodes", std::move(nodes)}};
}

std::string marked_to_dot(const MarkedTree& G) {
  std::ostringstream os;
  os << "graph G {\n  node [fontname=\"monospace\"];\n";
  for (int v = 0; v < G.size(); ++v)
    os << "  n" << v << " [label=" << quoted(G.label(v).str())
       << (G.marked(v) ? ", style=filled, fillcolor=gray" : "") << "];\n";
  for (int v = 0; v < G.size(); ++v)
    for (const Half& h : G.neighbors(v)) {
      if (h.to < v) continue;
      int back = port_of(G.adjacency(), h.to, v);
      os << "  n" << v << " -- n" << h.to << " [taillabel=\"" << h.port << "\", headlabel=\"" << back << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

std::string trace_to_jsonl(const BuildTrace& trace) {
  std::string out;
  for (const BuildStep& s : trace.steps) {
    Json x = {{"step", s.index},
              {"tnode", s.tnode},
              {"op", to_string(s.op)},
              {"target", s.target},
              {"target_label", s.target_label.str()},
              {"component_size", s.component_size}};
    if (s.op == Op::split) x["two_leaf_distance"] = s.two_leaf_distance;
    out += x.dump() + '\n';
  }
  return out;
}

Json distance_to_json(const DistanceReport& r) {
  return {{"minimum", r.minimum},
          {"splits_checked", r.splits_checked},
          {"witness_step", r.witness_step},
          {"witness_label", r.witness_label.str()},
          {"max_component", r.max_component}};
}

Json bound_to_json(const BoundReport& r, const SymNum& n, int delta) {
  return {{"n", n.to_string()},
          {"delta", delta},
          {"nontrivial", r.nontrivial},
          {"i", r.i},
          {"radius", to_string(r.radius)},
          {"chain", r.chain}};
}

Json instance_to_json(const Instance& inst) {
  Json edges = Json::array();
  for (int v = 0; v < inst.size(); ++v)
    for (const Half& h : inst.adjacency()[v])
      if (v < h.to) edges.push_back({v, h.port, h.to, inst.port_to(h.to, v)});
  return {{"n", inst.size()}, {"edges", std::move(edges)}};
}

Instance instance_from_json(const Json& j) {
  int n = field<int>(j, "n", "instance");
  if (n < 1) throw parse_error("instance: n must be positive");
  auto edges = field<std::vector<std::vector<int>>>(j, "edges", "instance");
  PortAdjacency g(n);
  for (const auto& e : edges) {
    if (e.size() != 4) throw parse_error("instance: every edge needs [u, port, v, port]");
    if (e[0] < 0 || e[0] >= n || e[2] < 0 || e[2] >= n) throw parse_error("instance: node id out of range");
    g[e[0]].push_back({e[2], e[1]});
    g[e[2]].push_back({e[0], e[3]});
  }
  for (auto& list : g) std::sort(list.begin(), list.end(), [](const Half& a, const Half& b) { return a.port < b.port; });
  return Instance(std::move(g));
}

std::string transcript_to_jsonl(const RunResult& run) {
  std::string out;
  for (const TranscriptRecord& r : run.transcript) {
    Json x = {{"step", r.step},
              {"query", r.query},
              {"token", r.token},
              {"revealed_tokens", r.revealed},
              {"decision", r.decision.str()}};
    out += x.dump() + '\n';
  }
  return out;
}

Json attack_to_json(const AttackResult& res) {
  Json steps = Json::array();
  for (const AttackStep& s : res.steps) {
    Json x = {{"index", s.index}, {"node", s.node}, {"q", s.q}, {"moved_edges", s.moved_edges}};
    if (res.mode == AttackMode::oracle) {
      x["all_in"] = to_string(s.all_in);
      x["frequency"] = to_string(s.frequency);
      x["event"] = to_string(s.event);
      x["branches"] = s.branches;
    } else {
      x["decision"] = s.decision ? s.decision->str() : "";
      x["event_realized"] = s.event_realized;
    }
    steps.push_back(std::move(x));
  }
  Json verdict = {{"text", res.verdict_text()},
                  {"kind", to_string(res.verdict.kind)},
                  {"node", res.verdict.node},
                  {"other", res.verdict.other},
                  {"detail", res.verdict.detail},
                  {"violation_step", res.violation_step},
                  {"first_invalid_step", res.first_invalid_step}};
  Json out = {{"algorithm", res.algorithm},
              {"mode", to_string(res.mode)},
              {"delta", res.delta},
              {"D", res.D},
              {"L", res.L},
              {"n", res.n},
              {"claim", res.claim},
              {"instance", instance_to_json(res.final_instance)},
              {"initial_sequence", res.initial_sequence},
              {"final_sequence", res.final_sequence},
              {"verdict", std::move(verdict)},
              {"steps", std::move(steps)}};
  if (res.mode == AttackMode::oracle)
    out["ledger"] = {{"chain", to_string(res.chain)},
                     {"failure_bound", to_string(res.failure_bound)},
                     {"target", to_string(res.target)},
                     {"meets_target", res.failure_bound >= res.target}};
  return out;
}

}  // namespace solb
