#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vne/milp.hpp"
#include "vne/mip.hpp"
#include "vne/model.hpp"

namespace vne::engine {

// A CloudNet request as submitted: virtual elements plus its policies and
// optional explicit flow sets (directed links).
struct Request {
  std::string id = "request";
  std::vector<NetworkElement> elements;
  PolicyMatrices policies;
  std::map<std::string, std::vector<Flow>> flow_overrides;
};

struct AllocKey {
  std::string u, v, rv, rs;
  bool operator<(const AllocKey& o) const {
    return std::tie(u, v, rv, rs) < std::tie(o.u, o.v, o.rv, o.rs);
  }
};

struct FlowAllocKey {
  Flow flow;
  std::string v, w, rv, rs;
  bool operator<(const FlowAllocKey& o) const {
    return std::tie(flow, v, w, rv, rs) < std::tie(o.flow, o.v, o.w, o.rv, o.rs);
  }
};

// A decoded, checker-clean solution.
struct Embedding {
  std::string request_id;
  std::map<std::string, std::vector<std::string>> mapping;  // u -> hosts
  std::map<AllocKey, double> allocations;
  std::map<FlowAllocKey, double> flow_allocations;
  std::set<std::string> migrations;
  double objective = 0.0;
  double migration_cost = 0.0;
  milp::Status solver_status = milp::Status::Optimal;
  milp::SolverStats solver_stats;

  const std::vector<std::string>* hosts(const std::string& u) const;
  bool maps_to(const std::string& u, const std::string& v) const;
};

struct Rejection {
  milp::Status status = milp::Status::Infeasible;
  std::string note;
  std::vector<std::string> infeasible_families;
  milp::SolverStats solver_stats;
};

struct EmbedOutcome {
  std::optional<Embedding> embedding;
  std::optional<Rejection> rejection;
  bool accepted() const { return embedding.has_value(); }
};

struct CheckIssue {
  std::string code;
  std::string subject;
  std::string message;
};

struct CheckReport {
  std::vector<CheckIssue> issues;
  bool clean() const { return issues.empty(); }
  std::string to_text() const;
};

struct CommittedRequest {
  Request request;
  Embedding embedding;
};

// Substrate plus committed embeddings. Residuals are recomputed from the
// full committed set in id order after every change, so commit followed by
// withdraw restores bit-identical residuals.
class SubstrateState {
 public:
  SubstrateState() = default;
  SubstrateState(std::vector<ResourceType> resources, SubstrateGraph substrate);

  const std::vector<ResourceType>& resources() const { return resources_; }
  const SubstrateGraph& substrate() const { return substrate_; }
  const std::map<std::string, CommittedRequest>& committed() const { return committed_; }

  double residual_element(const std::string& v, const std::string& rs) const;
  double residual_interface(const std::string& v, const std::string& w,
                            const std::string& rs) const;
  double residual_shared(const std::string& rs) const;

  // Substrate/resource copies with capacities replaced by residuals; the
  // base data for embedding the next request.
  SubstrateGraph residual_substrate() const;
  std::vector<ResourceType> residual_resources() const;

  void commit(const Request& request, const Embedding& embedding);
  void withdraw(const std::string& request_id);

 private:
  void recompute_residuals();

  std::vector<ResourceType> resources_;
  SubstrateGraph substrate_;
  std::map<std::string, CommittedRequest> committed_;
  std::map<std::pair<std::string, std::string>, double> residual_element_;
  std::map<std::tuple<std::string, std::string, std::string>, double> residual_interface_;
  std::map<std::string, double> residual_shared_;
};

// Cost inputs for migration-aware re-optimization. Transit defaults apply to
// destinations other than an element's current location, so keeping a
// mapping never pays transferral cost.
struct MigrationInputs {
  double default_node_penalty = 1.0;
  double default_transit = 0.0;
  std::map<std::string, double> penalty;                       // overrides
  std::map<std::pair<std::string, std::string>, double> transit;  // overrides
};

// Assembles the finalized problem for a request against state residuals.
EmbeddingProblem make_problem(const SubstrateState& state, const Request& request,
                              const ObjectiveConfig& objective,
                              const MigrationContext& migration);

// Builds the migration context describing the current placement of a
// committed request under the given cost inputs.
MigrationContext migration_context_for(const SubstrateState& state,
                                       const std::string& request_id,
                                       const MigrationInputs& inputs);

// Embed a fresh request against residual capacity; returns the decoded and
// verified embedding or a rejection carrying the solver status.
EmbedOutcome embed(const SubstrateState& state, const Request& request,
                   const ObjectiveConfig& objective,
                   const milp::SolverConfig& solver);

struct ReembedEntry {
  std::string request_id;
  bool migrate = false;  // plan proposes a change for this request
  Embedding proposed;
  double status_quo_objective = 0.0;
  double improvement = 0.0;  // status quo minus proposed objective
  double migration_cost = 0.0;
  bool feasible = true;
};

struct ReembedPlan {
  std::vector<ReembedEntry> entries;
  double total_improvement = 0.0;
  double total_migration_cost = 0.0;
};

// Migration-aware re-optimization, one committed request at a time in id
// order against a scratch state. Returns the proposed deltas without
// committing them; apply_plan realizes a plan.
ReembedPlan reembed(const SubstrateState& state, const ObjectiveConfig& objective,
                    const MigrationInputs& inputs, const milp::SolverConfig& solver);
void apply_plan(SubstrateState& state, const ReembedPlan& plan);

struct WhatIfResult {
  bool feasible = true;
  double migration_cost = 0.0;
  double objective = 0.0;
  std::vector<std::string> rejected_requests;
};

// Re-solves every committed request with suitability zeroed outside the
// given substrate element subset and old mappings charged migration cost.
WhatIfResult whatif_subset(const SubstrateState& state,
                           const std::set<std::string>& subset,
                           const ObjectiveConfig& objective,
                           const milp::SolverConfig& solver,
                           const MigrationInputs& inputs = {});

// Independent re-evaluation of every constraint family directly from the
// problem data and the embedding, without the MIP machinery. Empty report
// means the embedding is valid.
CheckReport check_embedding(const EmbeddingProblem& problem, const Embedding& embedding,
                            double tolerance = 1e-6);

// Convenience wrapper: checks an embedding against state residuals (its own
// committed allocations excluded if already committed).
CheckReport verify_embedding(const SubstrateState& state, const Request& request,
                             const Embedding& embedding,
                             const ObjectiveConfig& objective = {},
                             double tolerance = 1e-6);

// Decodes solver variable values into an embedding (no verification).
Embedding decode_solution(const EmbeddingProblem& problem, const mip::MipModel& model,
                          const milp::MilpSolution& solution);

// Objective value the problem assigns to keeping an existing embedding in
// place (no migrations, transit at current locations is zero).
double status_quo_objective(const EmbeddingProblem& problem, const Embedding& embedding);

}  // namespace vne::engine
