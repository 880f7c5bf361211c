#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "support/fixtures.hpp"
#include "vne/mip.hpp"

using namespace vne;
using namespace vne::testing;

namespace {

// Independent count of ordered adjacent pairs: breadth-agnostic edge count
// straight from the element incidence definition.
std::size_t count_arcs(const std::vector<NetworkElement>& elements) {
  std::size_t undirected = 0;
  for (const auto& e : elements) {
    if (e.is_link()) {
      std::set<std::string> distinct(e.endpoints.begin(), e.endpoints.end());
      undirected += distinct.size();
    }
  }
  return 2 * undirected;
}

const mip::LinearConstraint* find_row(const mip::MipModel& model,
                                      const std::string& name) {
  for (const auto& row : model.constraints) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("one virtual node over two candidates: one map_node row, two terms") {
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(2, 4, 4),
                                    {virtual_node("u0", 1)});
  // restrict to the two node elements so the term count is exactly 2
  p.policies.restrict("u0", {"s0", "s1"}, substrate_ids(p.substrate));
  mip::MipModel model = mip::build(p);
  CHECK(model.count_family("map_node") == 1);
  const auto* row = find_row(model, "map_node.u0");
  REQUIRE(row != nullptr);
  // map_node sums new(u, v) over every substrate element
  CHECK(row->terms.size() == p.substrate.elements.size());
  CHECK(row->relation == mip::Relation::Equal);
  CHECK(row->rhs == 1.0);
}

TEST_CASE("problem without virtual links emits no link families") {
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(3, 4, 4),
                                    {virtual_node("u0", 1), virtual_node("u1", 2)});
  mip::MipModel model = mip::build(p);
  for (const auto& family :
       {"map_link", "map_src", "map_sink", "req_fmin", "req_fmax", "req_fconst",
        "exp_out", "exp_in", "direction", "relate_f", "flow_res", "flow_map",
        "flow_presence"}) {
    CHECK(model.count_family(family) == 0);
  }
}

TEST_CASE("triangle substrate: flow variables on every ordered adjacent pair") {
  EmbeddingProblem p = make_problem(
      basic_resources(), triangle_substrate(4, 6),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)});
  std::size_t expected_arcs = count_arcs(p.substrate.elements);
  mip::MipModel model = mip::build(p);
  std::size_t flow_s = 0, flow_v = 0;
  for (const auto& var : model.variables) {
    if (var.key.family == mip::VarKey::Family::FlowS) ++flow_s;
    if (var.key.family == mip::VarKey::Family::FlowV) ++flow_v;
  }
  // one flow, one flow resource, one hosting substrate resource
  CHECK(flow_s == expected_arcs);
  CHECK(flow_v == expected_arcs);
  CHECK(expected_arcs == 12);  // 6 incidence edges, both directions
}

TEST_CASE("req_min row pins allocation above the request at the mapped node") {
  NetworkElement u = virtual_node("u0", 2, ValueType::Minimum);
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(2, 4, 4), {u});
  mip::MipModel model = mip::build(p);
  const auto* row = find_row(model, "req_min.u0.s0.slots_v");
  REQUIRE(row != nullptr);
  CHECK(row->relation == mip::Relation::GreaterEqual);
  CHECK(row->rhs == 0.0);
  double alloc_coeff = 0, new_coeff = 0;
  for (const auto& [idx, coeff] : row->terms) {
    if (model.variables[idx].key.family == mip::VarKey::Family::AllocV) {
      alloc_coeff = coeff;
    } else {
      new_coeff = coeff;
    }
  }
  CHECK(alloc_coeff == 1.0);
  CHECK(new_coeff == -2.0);
}

TEST_CASE("set_new is gated by element capacity and spans links too") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 7),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)});
  mip::MipModel model = mip::build(p);
  const auto* node_row = find_row(model, "set_new.u0.s0.slots_v.slots");
  REQUIRE(node_row != nullptr);
  const auto* link_row = find_row(model, "set_new.e0.s0.bw_v.bw");
  REQUIRE(link_row != nullptr);
  for (const auto& [idx, coeff] : link_row->terms) {
    if (model.variables[idx].key.family == mip::VarKey::Family::New) {
      CHECK(coeff == -7.0);  // node bandwidth capacity
    }
  }
}

TEST_CASE("suit zero forces new to zero through the allowed family") {
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(2, 4, 4),
                                    {virtual_node("u0", 1)});
  p.policies.suit[{"u0", "s1"}] = 0;
  mip::MipModel model = mip::build(p);
  const auto* row = find_row(model, "allowed.u0.s1");
  REQUIRE(row != nullptr);
  CHECK(row->relation == mip::Relation::LessEqual);
  CHECK(row->rhs == 0.0);
}

TEST_CASE("constraint count formulas on random instances") {
  Rng rng(1234);
  CorpusOptions options;
  for (int trial = 0; trial < 12; ++trial) {
    EmbeddingProblem p = random_instance(rng, options);
    REQUIRE(validate_problem(p).clean());
    mip::MipModel model = mip::build(p);
    std::size_t n_vn = p.virtual_nodes().size();
    std::size_t n_v = p.request.size();
    std::size_t n_s = p.substrate.elements.size();
    std::size_t total_flows = 0;
    for (const auto& [link, flows] : p.flows) {
      (void)link;
      total_flows += flows.size();
    }
    CHECK(model.count_family("map_node") == n_vn);
    CHECK(model.count_family("allowed") == n_v * n_s);
    CHECK(model.count_family("map_src") + model.count_family("map_sink") ==
          2 * total_flows * n_s);
  }
}

TEST_CASE("build determinism: identical problems yield identical models") {
  Rng rng_a(99), rng_b(99);
  CorpusOptions options;
  EmbeddingProblem a = random_instance(rng_a, options);
  EmbeddingProblem b = random_instance(rng_b, options);
  mip::MipModel ma = mip::build(a);
  mip::MipModel mb = mip::build(b);
  REQUIRE(ma.variables.size() == mb.variables.size());
  REQUIRE(ma.constraints.size() == mb.constraints.size());
  for (std::size_t j = 0; j < ma.variables.size(); ++j) {
    CHECK(ma.variables[j].name == mb.variables[j].name);
    CHECK(ma.variables[j].lower == mb.variables[j].lower);
    CHECK(ma.variables[j].upper == mb.variables[j].upper);
  }
  for (std::size_t i = 0; i < ma.constraints.size(); ++i) {
    CHECK(ma.constraints[i].name == mb.constraints[i].name);
    CHECK(ma.constraints[i].rhs == mb.constraints[i].rhs);
    CHECK(ma.constraints[i].terms == mb.constraints[i].terms);
  }
  CHECK(ma.objective == mb.objective);
}

TEST_CASE("migration family: fresh requests cap mig at zero") {
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(2, 4, 4),
                                    {virtual_node("u0", 1)});
  mip::MipModel model = mip::build(p);
  const auto* row = find_row(model, "new.u0");
  REQUIRE(row != nullptr);
  CHECK(row->relation == mip::Relation::LessEqual);
  CHECK(row->rhs == 0.0);
  CHECK(model.count_family("migrated") == 0);
}

TEST_CASE("migration family: migrated rows only for occupied locations") {
  MigrationContext migration;
  migration.old_mapping[{"u0", "s0"}] = 1;
  EmbeddingProblem p = make_problem(basic_resources(), path_substrate(2, 4, 4),
                                    {virtual_node("u0", 1)}, {}, migration);
  mip::MipModel model = mip::build(p);
  CHECK(model.count_family("migrated") == 1);
  const auto* row = find_row(model, "migrated.u0.s0");
  REQUIRE(row != nullptr);
  CHECK(row->rhs == -1.0);
}

TEST_CASE("resource-min objective has unit coefficients under unit weights") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1)});
  mip::MipModel model = mip::build(p);
  int alloc_terms = 0;
  for (const auto& [idx, coeff] : model.objective) {
    const auto& key = model.variables[idx].key;
    if (key.family == mip::VarKey::Family::AllocS) {
      CHECK(coeff == 1.0);
      ++alloc_terms;
    } else {
      // only migration penalties appear besides allocations
      CHECK(key.family == mip::VarKey::Family::Mig);
    }
  }
  CHECK(alloc_terms > 0);
}

TEST_CASE("load-balance objective rejects c below the load-weight sum") {
  EmbeddingProblem p = make_problem(
      basic_resources(0, 8, 8), path_substrate(2, 4, 4), {virtual_node("u0", 1)},
      {}, {}, {ObjectiveKind::LoadBalance, 0.5});
  CHECK_THROWS_AS(mip::build(p), Error);
}

TEST_CASE("load rows appear only for bounded shared capacities") {
  EmbeddingProblem unbounded = make_problem(basic_resources(),
                                            path_substrate(2, 4, 4),
                                            {virtual_node("u0", 1)});
  CHECK(mip::build(unbounded).count_family("load") == 0);

  EmbeddingProblem bounded = make_problem(basic_resources(0, 8, 8),
                                          path_substrate(2, 4, 4),
                                          {virtual_node("u0", 1)});
  CHECK(mip::build(bounded).count_family("load") >= 1);
  CHECK(mip::build(bounded).count_family("capacity") >= 1);
}

TEST_CASE("req_f selector rows carry a big-M annotation") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 1, ValueType::Minimum)});
  mip::MipModel model = mip::build(p);
  REQUIRE(model.count_family("req_fmin") > 0);
  bool annotated = false;
  for (const auto& [name, note] : model.annotations) {
    if (name.rfind("req_fmin", 0) == 0 && note.find("big_m=") == 0) annotated = true;
  }
  CHECK(annotated);
}

TEST_CASE("relate_f emitted only with a positive minimum allocation unit") {
  auto request = [&] {
    return std::vector<NetworkElement>{virtual_node("u0", 1), virtual_node("u1", 1),
                                       virtual_link("e0", {"u0", "u1"}, 1)};
  };
  EmbeddingProblem zero = make_problem(basic_resources(0.0),
                                       path_substrate(2, 4, 4), request());
  CHECK(mip::build(zero).count_family("relate_f") == 0);
  EmbeddingProblem positive = make_problem(basic_resources(0.5),
                                           path_substrate(2, 4, 4), request());
  mip::MipModel model = mip::build(positive);
  CHECK(model.count_family("relate_f") > 0);
  CHECK(model.count_family("relate_V") > 0);
}

TEST_CASE("half-duplex max/const combinations are flagged in the build report") {
  EmbeddingProblem p = make_problem(
      basic_resources(), path_substrate(2, 4, 4),
      {virtual_node("u0", 1), virtual_node("u1", 1),
       virtual_link("e0", {"u0", "u1"}, 2, ValueType::Maximum)});
  mip::MipModel model = mip::build(p);
  bool flagged = false;
  for (const auto& note : model.notes) {
    if (note.find("half-duplex") != std::string::npos) flagged = true;
  }
  CHECK(flagged);
}

TEST_CASE("every variable referenced by constraints is cataloged") {
  Rng rng(5);
  EmbeddingProblem p = random_instance(rng, CorpusOptions{});
  mip::MipModel model = mip::build(p);
  for (const auto& row : model.constraints) {
    REQUIRE(!row.terms.empty());
    for (const auto& [idx, coeff] : row.terms) {
      (void)coeff;
      REQUIRE(idx >= 0);
      REQUIRE(idx < static_cast<int>(model.variables.size()));
    }
  }
  for (const auto& var : model.variables) {
    CHECK(model.index_of(var.name) >= 0);
  }
}
