#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/fixtures.hpp"
#include "vne/model.hpp"

using namespace vne;
using namespace vne::testing;

namespace {

NetworkElement node(const std::string& id, Layer layer = Layer::Substrate) {
  NetworkElement e;
  e.id = id;
  e.kind = ElementKind::Node;
  e.layer = layer;
  return e;
}

NetworkElement link(const std::string& id, std::vector<std::string> endpoints,
                    Layer layer = Layer::Substrate) {
  NetworkElement e;
  e.id = id;
  e.kind = ElementKind::Link;
  e.layer = layer;
  e.endpoints = std::move(endpoints);
  return e;
}

}  // namespace

TEST_CASE("expand_links: point-to-point link becomes a vertex with two edges") {
  std::vector<NetworkElement> elements{node("a"), node("b"), link("l", {"a", "b"})};
  ExpandedGraph g = expand_links(elements);
  CHECK(g.vertices.size() == 3);
  CHECK(g.edges.size() == 2);
}

TEST_CASE("expand_links: broadcast link with three endpoints") {
  std::vector<NetworkElement> elements{node("a"), node("b"), node("c"),
                                       link("l", {"a", "b", "c"})};
  ExpandedGraph g = expand_links(elements);
  CHECK(g.vertices.size() == 4);
  CHECK(g.edges.size() == 3);  // one edge per endpoint
}

TEST_CASE("expand_links: path distance in the expanded graph") {
  // A - l1 - B - l2 - C: 5 vertices, 4 edges, A to C at hop distance 4.
  std::vector<NetworkElement> elements{node("A"), node("B"), node("C"),
                                       link("l1", {"A", "B"}), link("l2", {"B", "C"})};
  ExpandedGraph g = expand_links(elements);
  CHECK(g.vertices.size() == 5);
  CHECK(g.edges.size() == 4);
  CHECK(g.distance("A", "C") == 4);
}

TEST_CASE("expand_links: node-node edges never exist") {
  std::vector<NetworkElement> elements{node("a"), node("b"), link("l", {"a", "b"})};
  ExpandedGraph g = expand_links(elements);
  for (const auto& [x, y] : g.edges) {
    CHECK((x == "l" || y == "l"));
  }
}

TEST_CASE("expand_links: idempotent on an already expanded set") {
  std::vector<NetworkElement> elements{node("a"), node("b"), node("c"),
                                       link("l1", {"a", "b"}), link("l2", {"b", "c"})};
  ExpandedGraph once = expand_links(elements);
  ExpandedGraph twice = expand_links(elements);
  CHECK(once.vertices == twice.vertices);
  CHECK(once.edges == twice.edges);
}

TEST_CASE("expand_links: dangling endpoint is a model error naming both") {
  std::vector<NetworkElement> elements{node("a"), link("l", {"a", "x"})};
  try {
    expand_links(elements);
    FAIL("expected an error");
  } catch (const Error& e) {
    std::string what = e.what();
    CHECK(what.find("l") != std::string::npos);
    CHECK(what.find("x") != std::string::npos);
  }
}

TEST_CASE("expand_flows: two endpoints give one flow") {
  NetworkElement l = link("l", {"a", "b"}, Layer::Virtual);
  auto flows = expand_flows(l);
  REQUIRE(flows.size() == 1);
  CHECK(flows[0].source == "a");
  CHECK(flows[0].sink == "b");
}

TEST_CASE("expand_flows: C(k,2) flows with canonical orientation") {
  auto flows3 = expand_flows(link("l", {"c", "a", "b"}, Layer::Virtual));
  REQUIRE(flows3.size() == 3);
  CHECK(flows3[0].source == "a");
  CHECK(flows3[0].sink == "b");
  CHECK(flows3[1].source == "a");
  CHECK(flows3[1].sink == "c");
  CHECK(flows3[2].source == "b");
  CHECK(flows3[2].sink == "c");

  auto flows4 = expand_flows(link("l", {"a", "b", "c", "d"}, Layer::Virtual));
  CHECK(flows4.size() == 6);
}

TEST_CASE("expand_flows property: |Fl(u)| = C(k,2)") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int k = static_cast<int>(rng.range(2, 7));
    std::vector<std::string> endpoints;
    for (int i = 0; i < k; ++i) endpoints.push_back("n" + std::to_string(i));
    auto flows = expand_flows(link("l", endpoints, Layer::Virtual));
    CHECK(flows.size() == static_cast<std::size_t>(k * (k - 1) / 2));
    for (const auto& f : flows) CHECK(f.source < f.sink);
  }
}

TEST_CASE("expand_flows: fewer than two endpoints is an error") {
  CHECK_THROWS_AS(expand_flows(link("l", {"a"}, Layer::Virtual)), Error);
  CHECK_THROWS_AS(expand_flows(link("l", {"a", "a"}, Layer::Virtual)), Error);
}

TEST_CASE("validate: well-formed two-node problem is clean") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)});
  CHECK(validate_problem(p).clean());
}

TEST_CASE("validate: all-zero prop row is reported") {
  auto resources = basic_resources();
  EmbeddingProblem p = make_problem(resources, path_substrate(2, 4, 4),
                                    {virtual_node("u0", 1)});
  p.substrate.prop.erase({"slots_v", "slots"});
  ValidationReport report = validate_problem(p);
  REQUIRE(!report.clean());
  bool found = false;
  for (const auto& issue : report.issues) {
    if (issue.code == "no-prop-route" && issue.subject == "slots_v") found = true;
  }
  CHECK(found);
}

TEST_CASE("validate: missing link endpoint names the culprit") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_link("e0", {"u0", "x"}, 1)});
  ValidationReport report = validate_problem(p);
  REQUIRE(!report.clean());
  bool found = false;
  for (const auto& issue : report.issues) {
    if (issue.message.find("'x'") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate: constant conflicts with minimum on the same resource") {
  NetworkElement u = virtual_node("u0", 1, ValueType::Constant);
  u.requests[{"slots_v", ValueType::Minimum}] = 2;
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(2, 4, 4), {u});
  ValidationReport report = validate_problem(p);
  bool found = false;
  for (const auto& issue : report.issues) {
    if (issue.code == "constant-conflict") found = true;
  }
  CHECK(found);
}

TEST_CASE("finalize: link penalty epsilon rule") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)});
  // Nodes defaulted to 1.0; the link gets 1e-6 times the largest penalty.
  CHECK(p.migration.penalty.at("u0") == doctest::Approx(1.0));
  CHECK(p.migration.penalty.at("e0") == doctest::Approx(1e-6));

  MigrationContext with_large;
  with_large.penalty["u0"] = 50.0;
  EmbeddingProblem q = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)},
      {}, with_large);
  CHECK(q.migration.penalty.at("e0") == doctest::Approx(50.0 * 1e-6));
}

TEST_CASE("finalize: flows fill in and objective c defaults to the weight sum") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(3, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)},
      {}, {}, {ObjectiveKind::LoadBalance, -1.0});
  CHECK(p.flows.at("e0").size() == 1);
  CHECK(p.objective.c == doctest::Approx(2.0));  // slots + bw load weights
}

TEST_CASE("policy accessors default to one") {
  PolicyMatrices policies;
  CHECK(policies.suit_at("u", "v") == 1);
  CHECK(policies.weight_at("u", "v") == doctest::Approx(1.0));
  policies.restrict("u", {"a"}, {"a", "b", "c"});
  CHECK(policies.suit_at("u", "a") == 1);
  CHECK(policies.suit_at("u", "b") == 0);
  CHECK(policies.suit_at("u", "c") == 0);
}
