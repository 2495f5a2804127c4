#include <random>

#include "doctest.h"
#include "solb/algorithms.hpp"
#include "solb/errors.hpp"
#include "solb/serialize.hpp"
#include "trees.hpp"

using namespace solb;

namespace {

bool same_ports(const Instance& a, const Instance& b) {
  if (a.size() != b.size()) return false;
  for (int v = 0; v < a.size(); ++v) {
    if (a.degree(v) != b.degree(v)) return false;
    for (int p = 1; p <= a.degree(v); ++p)
      if (a.neighbor(v, p) != b.neighbor(v, p)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("construction trees survive a JSON round trip") {
  for (int delta : {3, 4}) {
    ConstructionTree T = build_t2(delta);
    ConstructionTree U = tree_from_json(Json::parse(tree_to_json(T).dump()));
    REQUIRE(U.size() == T.size());
    CHECK(U.b() == T.b());
    for (int v = 0; v < T.size(); ++v) {
      CHECK(U.parent(v) == T.parent(v));
      CHECK(U.label(v) == T.label(v));
      auto a = T.children(v), b = U.children(v);
      CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    CHECK(validate(U).ok());
  }
}

TEST_CASE("malformed tree JSON is a parse error") {
  Json good = tree_to_json(build_t2(3));
  Json j = good;
  j.erase("b");
  CHECK_THROWS_AS(tree_from_json(j), parse_error);
  j = good;
  j["nodes"][4]["label"] = "1x2";
  CHECK_THROWS_AS(tree_from_json(j), parse_error);
  j = good;
  j["nodes"][2]["id"] = 7;
  CHECK_THROWS_AS(tree_from_json(j), parse_error);
  j = good;
  j["nodes"][2]["children"] = "none";
  CHECK_THROWS_AS(tree_from_json(j), parse_error);
  j = good;
  j["nodes"][5]["parent"] = -1;
  CHECK_THROWS_AS(tree_from_json(j), usage_error);
  CHECK_THROWS_AS(read_tree_file("/nonexistent/tree.json"), parse_error);
}

TEST_CASE("instances survive a JSON round trip") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    Instance inst{trees::random_tree(1 + static_cast<int>(rng() % 30), rng, 4)};
    Json j = instance_to_json(inst);
    CHECK(j["edges"].size() == static_cast<std::size_t>(inst.size() - 1));
    Instance back = instance_from_json(Json::parse(j.dump()));
    CHECK(same_ports(back, inst));
  }
  CHECK_THROWS_AS(instance_from_json(Json{{"n", 2}, {"edges", {{0, 1, 5, 1}}}}), parse_error);
  CHECK_THROWS_AS(instance_from_json(Json{{"n", 3}, {"edges", {{0, 1, 1, 1}}}}), usage_error);
}

TEST_CASE("transcripts list one record per query") {
  Instance inst{trees::path(5)};
  auto alg = make_algorithm("port1-det");
  RunResult r = run(inst, {2, 0, 4}, *alg, 1, 1);
  std::string text = transcript_to_jsonl(r);
  std::vector<Json> lines;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find('\n', start)) != std::string::npos; start = pos + 1)
    lines.push_back(Json::parse(text.substr(start, pos - start)));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0]["step"] == 1);
  CHECK(lines[0]["query"] == 2);
  CHECK(lines[0]["token"] == 0);
  CHECK(lines[0]["revealed_tokens"].size() == 3);
  CHECK(lines[1]["decision"] == "O");
  CHECK(lines[1]["revealed_tokens"].size() == 1);
  CHECK(lines[2]["revealed_tokens"].size() == 1);
}

TEST_CASE("rationals print exactly") {
  CHECK(to_string(Rational(1, 3) * Rational(1, 3)) == "1/9");
  CHECK(to_string(Rational(4, 2)) == "2");
}

TEST_CASE("attack JSON carries the ledger and the verdict") {
  auto alg = make_algorithm("uniform-single-out");
  AttackOptions opt;
  opt.n = 120;
  AttackResult res = attack(build_t2(3), *alg, opt);
  Json j = attack_to_json(res);
  CHECK(j["ledger"]["failure_bound"] == "1/1594323");
  CHECK(j["ledger"]["target"] == "1/4782969");
  CHECK(j["ledger"]["meets_target"] == true);
  CHECK(j["final_sequence"].size() == 14);
  CHECK(j["steps"].size() == 14);
  CHECK(same_ports(instance_from_json(j["instance"]), res.final_instance));
}
