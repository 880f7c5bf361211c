#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vne/model.hpp"

namespace vne::mip {

enum class Integrality { Continuous, Binary };
enum class Relation { LessEqual, Equal, GreaterEqual };

std::string to_string(Relation rel);

// Typed identity of a variable, kept alongside the name so solutions can be
// decoded without parsing name strings.
struct VarKey {
  enum class Family { New, NewFlow, Mig, AllocV, AllocS, FlowV, FlowS, Load, MaxLoad };
  Family family = Family::New;
  std::string u;      // virtual element
  std::string v;      // substrate element (or arc tail)
  std::string w;      // arc head
  std::string rv;     // virtual resource
  std::string rs;     // substrate resource
  std::string fsrc;   // flow source / sink for flow-indexed families
  std::string fsink;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kUnbounded;
  Integrality integrality = Integrality::Continuous;
  VarKey key;
};

struct LinearConstraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string family;
  std::string origin;  // element / flow ids this row was emitted for
};

// Solver-agnostic linear mixed integer model, minimization sense. Building
// is deterministic: identical problems produce identical models.
struct MipModel {
  std::vector<Variable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<int, double>> objective;  // (variable index, coeff)
  std::map<std::string, int> variable_index;
  std::vector<std::string> notes;  // build report (flagged combinations etc.)
  // Extra per-constraint documentation, e.g. the big-M chosen per flow row.
  std::map<std::string, std::string> annotations;

  int index_of(const std::string& name) const;
  const Variable* find_variable(const std::string& name) const;
  double objective_value(const std::vector<double>& x) const;
  // Max violation of any constraint/bound at the point, for checking.
  double max_violation(const std::vector<double>& x) const;
  std::size_t count_family(const std::string& family) const;
};

// Incrementally assembled model; the per-family builders below append to it
// so each family can be unit-tested in isolation.
class ModelBuilder {
 public:
  explicit ModelBuilder(const EmbeddingProblem& problem);

  void add_variables();
  void build_node_family();
  void build_mapping_family();
  void build_resource_relation_family();
  void build_link_family();
  void build_link_allocation_family();
  void build_migration_family();
  void build_objective();

  MipModel take();

  // Exposed for tests: ordered adjacent pairs of the expanded substrate.
  const std::vector<std::pair<std::string, std::string>>& arcs() const {
    return arcs_;
  }

 private:
  int add_var(const std::string& name, double lower, double upper,
              Integrality integrality, VarKey key);
  void add_row(std::string name, std::vector<std::pair<int, double>> terms,
               Relation rel, double rhs, const std::string& family,
               const std::string& origin);

  int var_new(const std::string& u, const std::string& v) const;
  int var_newf(const Flow& f, const std::string& v) const;
  int var_mig(const std::string& u) const;
  int var_alloc_v(const std::string& u, const std::string& v,
                  const std::string& rv) const;
  int var_alloc_s(const std::string& u, const std::string& v,
                  const std::string& rv, const std::string& rs) const;
  int var_flow_v(const Flow& f, const std::string& v, const std::string& w,
                 const std::string& rv) const;
  int var_flow_s(const Flow& f, const std::string& v, const std::string& w,
                 const std::string& rv, const std::string& rs) const;
  int var_load(const std::string& rs) const;

  std::vector<std::string> hosts_of(const std::string& rv) const;
  double big_m(const Flow& f, const std::string& rv) const;
  double epsilon_f(const NetworkElement& link) const;

  const EmbeddingProblem& problem_;
  ExpandedGraph expanded_;
  std::vector<std::pair<std::string, std::string>> arcs_;
  std::map<std::string, std::vector<std::string>> in_neighbors_;
  std::map<std::string, std::vector<std::string>> out_neighbors_;
  MipModel model_;
  std::map<std::string, int> lookup_;
};

// Translates a validated problem into the full linear MIP, all constraint
// families plus the configured objective.
MipModel build(const EmbeddingProblem& problem);

}  // namespace vne::mip
