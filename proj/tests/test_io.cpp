#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "support/fixtures.hpp"
#include "vne/json_io.hpp"
#include "vne/milp.hpp"
#include "vne/mip.hpp"
#include "vne/model_io.hpp"

using namespace vne;
using namespace vne::testing;
using model_io::ModelFormat;

namespace {

struct Canonical {
  std::map<std::string, std::tuple<double, double, bool, double>> variables;
  std::map<std::string, std::tuple<int, double, std::map<std::string, double>>> rows;
};

// Order-independent structural view keyed by exported names.
Canonical canonicalize(const mip::MipModel& model) {
  Canonical out;
  std::vector<std::string> names = model_io::export_names(model);
  std::map<int, double> objective(model.objective.begin(), model.objective.end());
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const auto& v = model.variables[j];
    double coeff = objective.count(static_cast<int>(j)) ? objective[static_cast<int>(j)] : 0.0;
    out.variables[names[j]] = {v.lower, v.upper,
                               v.integrality == mip::Integrality::Binary, coeff};
  }
  for (const auto& row : model.constraints) {
    std::map<std::string, double> terms;
    for (const auto& [idx, coeff] : row.terms) terms[names[idx]] += coeff;
    out.rows[row.name] = {static_cast<int>(row.relation), row.rhs, terms};
  }
  return out;
}

mip::MipModel random_model(Rng& rng, int rows) {
  mip::MipModel model;
  int n = static_cast<int>(rng.range(4, 12));
  for (int j = 0; j < n; ++j) {
    mip::Variable v;
    v.name = "x" + std::to_string(j);
    bool binary = rng.real01() < 0.4;
    v.integrality = binary ? mip::Integrality::Binary : mip::Integrality::Continuous;
    v.lower = binary ? 0 : rng.real(-3, 0);
    v.upper = binary ? 1 : (rng.real01() < 0.3 ? kUnbounded : rng.real(1, 9));
    model.variable_index[v.name] = j;
    model.variables.push_back(v);
    if (rng.real01() < 0.8) {
      model.objective.emplace_back(j, rng.real(-2, 5));
    }
  }
  for (int i = 0; i < rows; ++i) {
    mip::LinearConstraint row;
    row.name = "c" + std::to_string(i);
    for (int j = 0; j < n; ++j) {
      if (rng.real01() < 0.5) row.terms.emplace_back(j, rng.real(-4, 4));
    }
    if (row.terms.empty()) row.terms.emplace_back(0, 1.0);
    double pick = rng.real01();
    row.relation = pick < 0.4   ? mip::Relation::LessEqual
                   : pick < 0.8 ? mip::Relation::GreaterEqual
                                : mip::Relation::Equal;
    row.rhs = rng.real(-6, 10);
    row.family = "test";
    model.constraints.push_back(std::move(row));
  }
  return model;
}

}  // namespace

TEST_CASE("one-variable model exports an objective and a bounds line") {
  mip::MipModel model;
  mip::Variable v;
  v.name = "x";
  v.lower = 0;
  v.upper = 5;
  model.variables.push_back(v);
  model.variable_index["x"] = 0;
  model.objective.emplace_back(0, 2.0);
  mip::LinearConstraint row;
  row.name = "c0";
  row.terms.emplace_back(0, 1.0);
  row.relation = mip::Relation::GreaterEqual;
  row.rhs = 1.0;
  model.constraints.push_back(row);

  std::string lp = model_io::export_model(model, ModelFormat::LpText);
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("obj:") != std::string::npos);
  CHECK(lp.find("Bounds") != std::string::npos);
  CHECK(lp.find("0 <= x <= 5") != std::string::npos);

  std::string mps = model_io::export_model(model, ModelFormat::MpsText);
  CHECK(mps.find("ROWS") != std::string::npos);
  CHECK(mps.find("ENDATA") != std::string::npos);
}

TEST_CASE("export/import round trip is structurally identical") {
  Rng rng(404);
  for (auto format : {ModelFormat::LpText, ModelFormat::MpsText}) {
    mip::MipModel model = random_model(rng, 50);
    std::string text = model_io::export_model(model, format);
    mip::MipModel imported = model_io::import_model(text, format);
    Canonical a = canonicalize(model);
    Canonical b = canonicalize(imported);
    REQUIRE(a.variables.size() == b.variables.size());
    REQUIRE(a.rows.size() == b.rows.size());
    for (const auto& [name, spec] : a.variables) {
      REQUIRE(b.variables.count(name));
      const auto& [lo, hi, bin, obj] = spec;
      const auto& [lo2, hi2, bin2, obj2] = b.variables[name];
      CHECK(lo == doctest::Approx(lo2));
      if (is_unbounded(hi)) {
        CHECK(is_unbounded(hi2));
      } else {
        CHECK(hi == doctest::Approx(hi2));
      }
      CHECK(bin == bin2);
      CHECK(obj == doctest::Approx(obj2));
    }
    for (const auto& [name, spec] : a.rows) {
      REQUIRE(b.rows.count(name));
      const auto& [rel, rhs, terms] = spec;
      const auto& [rel2, rhs2, terms2] = b.rows[name];
      CHECK(rel == rel2);
      CHECK(rhs == doctest::Approx(rhs2));
      REQUIRE(terms.size() == terms2.size());
      for (const auto& [var, coeff] : terms) {
        REQUIRE(terms2.count(var));
        CHECK(coeff == doctest::Approx(terms2.at(var)));
      }
    }
  }
}

TEST_CASE("round trip on a real embedding model preserves the LP optimum") {
  Rng rng(555);
  EmbeddingProblem p = random_instance(rng, CorpusOptions{});
  mip::MipModel model = mip::build(p);
  milp::MilpSolution direct = milp::solve_milp(model, milp::SolverConfig{});
  for (auto format : {ModelFormat::LpText, ModelFormat::MpsText}) {
    mip::MipModel imported =
        model_io::import_model(model_io::export_model(model, format), format);
    milp::MilpSolution via = milp::solve_milp(imported, milp::SolverConfig{});
    REQUIRE(via.status == direct.status);
    if (direct.status == milp::Status::Optimal) {
      CHECK(std::fabs(via.objective - direct.objective) <= 1e-6);
    }
  }
}

TEST_CASE("sanitization collisions are an export error listing the names") {
  mip::MipModel model;
  for (const auto& name : {"a+b", "a-b"}) {  // both sanitize to a_b
    mip::Variable v;
    v.name = name;
    model.variable_index[v.name] = static_cast<int>(model.variables.size());
    model.variables.push_back(v);
  }
  mip::LinearConstraint row;
  row.name = "c0";
  row.terms.emplace_back(0, 1.0);
  model.constraints.push_back(row);
  try {
    model_io::export_model(model, ModelFormat::LpText);
    FAIL("expected a collision error");
  } catch (const Error& e) {
    std::string what = e.what();
    CHECK(what.find("a+b") != std::string::npos);
    CHECK(what.find("a-b") != std::string::npos);
  }
}

TEST_CASE("solution import: identity, warnings, and unknown names") {
  mip::MipModel model;
  for (int j = 0; j < 3; ++j) {
    mip::Variable v;
    v.name = "x" + std::to_string(j);
    v.upper = 10;
    model.variable_index[v.name] = j;
    model.variables.push_back(v);
    model.objective.emplace_back(j, 1.0);
  }

  SUBCASE("identity with header lines") {
    std::string text =
        "objective value: 6\n"
        "# comment\n"
        "x0 1\nx1 2\nx2 3\n";
    model_io::ImportedSolution imported = model_io::import_solution(model, text);
    CHECK(imported.missing.empty());
    CHECK(imported.solution.values.at("x0") == doctest::Approx(1.0));
    CHECK(imported.solution.objective == doctest::Approx(6.0));
  }
  SUBCASE("partial file defaults to zero with a warning") {
    model_io::ImportedSolution imported = model_io::import_solution(model, "x1 2\n");
    REQUIRE(imported.missing.size() == 2);
    CHECK(imported.solution.values.at("x0") == doctest::Approx(0.0));
    CHECK(imported.solution.values.at("x1") == doctest::Approx(2.0));
  }
  SUBCASE("unknown variable is rejected with the line number") {
    try {
      model_io::import_solution(model, "x0 1\nbogus 3\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      std::string what = e.what();
      CHECK(what.find("2") != std::string::npos);
      CHECK(what.find("bogus") != std::string::npos);
    }
  }
  SUBCASE("malformed value is a parse error with the line number") {
    CHECK_THROWS_AS(model_io::import_solution(model, "x0 pear\n"), Error);
  }
}

TEST_CASE("problem JSON round trip preserves the model") {
  Rng rng(808);
  EmbeddingProblem p = random_instance(rng, CorpusOptions{});
  json_io::json doc = json_io::problem_to_json(p);
  EmbeddingProblem q = json_io::parse_problem(doc);
  mip::MipModel a = mip::build(p);
  mip::MipModel b = mip::build(q);
  REQUIRE(a.variables.size() == b.variables.size());
  REQUIRE(a.constraints.size() == b.constraints.size());
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    CHECK(a.constraints[i].name == b.constraints[i].name);
    CHECK(a.constraints[i].terms == b.constraints[i].terms);
    CHECK(a.constraints[i].rhs == b.constraints[i].rhs);
  }
}
