// solb: command-line front end for construction trees, input trees and the
// online-LOCAL adversary.
//
// Exit codes: 0 success, 1 validation failure or unexpected survival,
// 2 parse or usage error, 3 node or time budget exceeded, 4 failed internal check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "solb/adversary.hpp"
#include "solb/algorithms.hpp"
#include "solb/errors.hpp"
#include "solb/ftransform.hpp"
#include "solb/labelings.hpp"
#include "solb/marked.hpp"
#include "solb/serialize.hpp"
#include "solb/tower.hpp"

using namespace solb;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kCapacity = 3, kInternal = 4 };

struct Global {
  std::uint64_t seed = 1;
  std::uint64_t node_budget = kDefaultNodeBudget;
  double time_budget = 0;
  std::string format = "json";
};

struct TreeSource {
  std::string selector = "t2";
  int delta = 3;
};

// A tree file that parses but does not describe a rooted tree.
struct structure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConstructionTree load_tree(const TreeSource& src, const Global& g) {
  if (src.selector == "t2" || src.selector == "ft2") {
    if (src.delta < 3 || src.delta > 9) throw usage_error("--delta must lie in 3..9");
    ConstructionTree T = build_t2(src.delta);
    if (src.selector == "t2") return T;
    return f_materialize(f_implicit(T), std::nullopt, g.node_budget);
  }
  try {
    return read_tree_file(src.selector);
  } catch (const usage_error& e) {
    throw structure_error(e.what());
  }
}

void require_json(const Global& g, const char* command) {
  if (g.format != "json") throw usage_error(std::string(command) + " only supports --format json");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw usage_error("cannot write " + path);
  out << text;
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

void add_tree_args(CLI::App* cmd, TreeSource& src) {
  cmd->add_option("tree,--tree", src.selector, "t2, ft2 (F applied to t2) or a tree JSON file")->capture_default_str();
  cmd->add_option("--delta", src.delta, "maximum degree of the t2 family")->capture_default_str();
}

int cmd_validate(const TreeSource& src, const Global& g, const std::string& dump_path) {
  ConstructionTree T;
  try {
    T = load_tree(src, g);
  } catch (const structure_error& e) {
    print({{"ok", false},
           {"checks", Json::array({{{"name", "structure"}, {"ok", false}, {"witness", e.what()}}})},
           {"first_failure", "structure"}});
    return kFailed;
  }
  if (!dump_path.empty()) write_file(dump_path, g.format == "dot" ? tree_to_dot(T) : tree_to_json(T).dump(2) + '\n');
  ValidationReport r = validate(T);
  Json out = validation_to_json(r);
  out["nodes"] = T.size();
  print(out);
  if (!r.ok()) std::cerr << "validation failed: " << r.first_failure() << '\n';
  return r.ok() ? kOk : kFailed;
}

int cmd_transform(const TreeSource& src, const Global& g, bool explicit_tree, std::optional<int> layer_limit) {
  ConstructionTree T = load_tree(src, g);
  skeleton(T);
  ImplicitFTree I = f_implicit(T);
  if (!explicit_tree) {
    require_json(g, "transform --implicit");
    print(implicit_to_json(I, T));
    return kOk;
  }
  ConstructionTree F = f_materialize(I, layer_limit, g.node_budget);
  if (g.format == "dot")
    std::cout << tree_to_dot(F);
  else
    print(tree_to_json(F));
  return kOk;
}

int cmd_labelings(const TreeSource& src, const Global& g) {
  require_json(g, "labelings");
  ConstructionTree T = load_tree(src, g);
  skeleton(T);
  print(labelings_to_json(T, compute_labelings(T)));
  return kOk;
}

int cmd_build_input(const TreeSource& src, const Global& g, const std::string& trace_path) {
  ConstructionTree T = load_tree(src, g);
  BuildOptions opt;
  opt.node_budget = g.node_budget;
  BuildTrace trace = build_input_tree(T, {}, opt);
  if (!trace_path.empty()) write_file(trace_path, trace_to_jsonl(trace));
  if (g.format == "dot") {
    std::cout << marked_to_dot(trace.final);
    return kOk;
  }
  Json out = marked_to_json(trace.final);
  out["steps"] = trace.steps.size();
  out["mirrors"] = static_cast<int>(std::count_if(trace.mirror.begin(), trace.mirror.end(), [](int m) { return m >= 0; }));
  print(out);
  return kOk;
}

int cmd_check_distance(const TreeSource& src, const Global& g, const std::string& mode) {
  require_json(g, "check-distance");
  DistanceMode m;
  if (mode == "full") m = DistanceMode::full;
  else if (mode == "path-only") m = DistanceMode::path_only;
  else throw usage_error("--mode must be full or path-only");
  ConstructionTree T = load_tree(src, g);
  Json out = distance_to_json(check_distance_correct(T, m, g.node_budget));
  out["mode"] = mode;
  print(out);
  return kOk;
}

CanonicalOrder parse_order(const std::string& s) {
  if (s == "deepest-first") return CanonicalOrder::deepest_first;
  if (s == "layer-ascending") return CanonicalOrder::layer_ascending;
  throw usage_error("--order must be deepest-first or layer-ascending");
}

int cmd_canonical_seq(const TreeSource& src, const Global& g, const std::string& order) {
  require_json(g, "canonical-seq");
  ConstructionTree T = load_tree(src, g);
  BuildOptions opt;
  opt.node_budget = g.node_budget;
  BuildTrace trace = build_input_tree(T, {}, opt);
  CanonicalOrder o = parse_order(order);
  std::vector<int> refl = canonical_reflect_order(T, o);
  std::vector<int> W = canonical_sequence(T, trace, o);
  Json seq = Json::array();
  for (std::size_t i = 0; i < W.size(); ++i)
    seq.push_back({{"index", i + 1}, {"node", W[i]}, {"label", trace.final.label(W[i]).str()},
                   {"reflect_label", T.label(refl[i]).str()}});
  print({{"order", order}, {"sequence", std::move(seq)}});
  return kOk;
}

struct AttackArgs {
  std::string alg = "port1-det";
  int L = 1;
  long long n = 0;
  std::string mode = "oracle";
  int samples = 64;
  double eps = 0.05;
  std::size_t branch_budget = 1 << 16;
  std::string out;
};

int cmd_attack(const TreeSource& src, const Global& g, const AttackArgs& a) {
  require_json(g, "attack");
  ConstructionTree T = load_tree(src, g);
  std::string spec = a.alg;
  if (spec.rfind("plugin:", 0) != 0 && (spec.find('/') != std::string::npos || spec.ends_with(".so")))
    spec = "plugin:" + spec;
  std::unique_ptr<Algorithm> alg = make_algorithm(spec);
  AttackOptions opt;
  opt.mode = parse_attack_mode(a.mode);
  opt.L = a.L;
  opt.n = a.n;
  opt.seed = g.seed;
  opt.samples = a.samples;
  opt.eps = a.eps;
  opt.branch_budget = a.branch_budget;
  AttackResult res = attack(T, *alg, opt);
  if (!a.out.empty()) write_file(a.out, transcript_to_jsonl(res.run));
  print(attack_to_json(res));
  std::cerr << res.algorithm << ": " << res.verdict_text() << '\n';
  return (!res.claim || !res.verdict.ok()) ? kOk : kFailed;
}

int cmd_bound(const Global& g, const std::string& n_text, int delta) {
  require_json(g, "bound");
  if (delta < 3) throw usage_error("--delta must be at least 3");
  SymNum n = parse_symnum(n_text, delta);
  print(bound_to_json(bound_report(n, delta), n, delta));
  return kOk;
}

void start_watchdog(double seconds) {
  if (seconds <= 0) return;
  std::thread([seconds] {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    std::fprintf(stderr, "time budget of %g s exceeded\n", seconds);
    std::fflush(stdout);
    std::_Exit(kCapacity);
  }).detach();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construction trees, input trees and the online-LOCAL sinkless orientation adversary"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "seed for randomized algorithms")->capture_default_str();
  app.add_option("--node-budget", g.node_budget, "largest number of tree nodes to materialize")->capture_default_str();
  app.add_option("--time-budget", g.time_budget, "wall-clock limit in seconds, 0 for none")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();

  TreeSource src;
  auto* validate_cmd = app.add_subcommand("validate", "check that a tree is balanced, well-nested and solid");
  add_tree_args(validate_cmd, src);
  std::string dump_path;
  validate_cmd->add_option("--dump", dump_path, "also write the tree itself, as JSON or DOT per --format");

  bool implicit_flag = false, explicit_flag = false;
  std::optional<int> layer_limit;
  auto* transform_cmd = app.add_subcommand("transform", "apply F, as a layer table or materialized");
  add_tree_args(transform_cmd, src);
  auto* imp = transform_cmd->add_flag("--implicit", implicit_flag, "layer table and exact node count (default)");
  transform_cmd->add_flag("--explicit", explicit_flag, "materialize every node")->excludes(imp);
  transform_cmd->add_option("--layer-limit", layer_limit, "materialize only the first layers");

  auto* labelings_cmd = app.add_subcommand("labelings", "psi and pi on every tree edge");
  add_tree_args(labelings_cmd, src);

  std::string trace_path;
  auto* build_cmd = app.add_subcommand("build-input", "run the reflect/split program and print G_T");
  add_tree_args(build_cmd, src);
  build_cmd->add_option("--trace", trace_path, "write the build trace as JSONL");

  std::string distance_mode = "full";
  auto* distance_cmd = app.add_subcommand("check-distance", "minimum split-to-2-leaf distance");
  add_tree_args(distance_cmd, src);
  distance_cmd->add_option("--mode", distance_mode, "full or path-only")->capture_default_str();

  std::string order = "deepest-first";
  auto* seq_cmd = app.add_subcommand("canonical-seq", "mirror nodes in query order");
  add_tree_args(seq_cmd, src);
  seq_cmd->add_option("--order", order, "deepest-first or layer-ascending")->capture_default_str();

  AttackArgs aa;
  auto* attack_cmd = app.add_subcommand("attack", "play the rewiring adversary against an algorithm");
  add_tree_args(attack_cmd, src);
  attack_cmd->add_option("--alg", aa.alg, "built-in name, plugin:<path>[:<options>] or a plugin path")->capture_default_str();
  attack_cmd->add_option("--locality,-L", aa.L, "view radius")->capture_default_str();
  attack_cmd->add_option("--n", aa.n, "instance size, 0 for delta times |G_T|")->capture_default_str();
  attack_cmd->add_option("--mode", aa.mode, "oracle or sample")->capture_default_str();
  attack_cmd->add_option("--samples", aa.samples, "forks per step in sample mode")->capture_default_str();
  attack_cmd->add_option("--eps", aa.eps, "threshold slack in sample mode")->capture_default_str();
  attack_cmd->add_option("--branch-budget", aa.branch_budget, "oracle branch limit")->capture_default_str();
  attack_cmd->add_option("--out", aa.out, "write the transcript as JSONL");

  std::string n_text;
  int bound_delta = 3;
  auto* bound_cmd = app.add_subcommand("bound", "lower bound radius for n, e.g. 1e6 or 3^3^27+1");
  bound_cmd->add_option("--n", n_text, "number of nodes")->required();
  bound_cmd->add_option("--delta", bound_delta, "maximum degree")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  start_watchdog(g.time_budget);
  try {
    if (*validate_cmd) return cmd_validate(src, g, dump_path);
    if (*transform_cmd) return cmd_transform(src, g, explicit_flag, layer_limit);
    if (*labelings_cmd) return cmd_labelings(src, g);
    if (*build_cmd) return cmd_build_input(src, g, trace_path);
    if (*distance_cmd) return cmd_check_distance(src, g, distance_mode);
    if (*seq_cmd) return cmd_canonical_seq(src, g, order);
    if (*attack_cmd) return cmd_attack(src, g, aa);
    if (*bound_cmd) return cmd_bound(g, n_text, bound_delta);
  } catch (const capacity_error& e) {
    std::cerr << "over budget: " << e.what() << " (demanded " << e.demanded << ")\n";
    return kCapacity;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const structure_error& e) {
    std::cerr << "invalid tree: " << e.what() << '\n';
    return kUsage;
  } catch (const invariant_error& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return kInternal;
  } catch (const protocol_error& e) {
    std::cerr << "algorithm error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
