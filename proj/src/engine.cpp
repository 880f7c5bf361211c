#include "vne/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vne::engine {

const std::vector<std::string>* Embedding::hosts(const std::string& u) const {
  auto it = mapping.find(u);
  return it == mapping.end() ? nullptr : &it->second;
}

bool Embedding::maps_to(const std::string& u, const std::string& v) const {
  const auto* h = hosts(u);
  return h && std::binary_search(h->begin(), h->end(), v);
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  for (const auto& issue : issues) {
    os << issue.code << " [" << issue.subject << "]: " << issue.message << "\n";
  }
  return os.str();
}

SubstrateState::SubstrateState(std::vector<ResourceType> resources,
                               SubstrateGraph substrate)
    : resources_(std::move(resources)), substrate_(std::move(substrate)) {
  std::sort(resources_.begin(), resources_.end(),
            [](const ResourceType& a, const ResourceType& b) { return a.id < b.id; });
  std::sort(substrate_.elements.begin(), substrate_.elements.end(),
            [](const NetworkElement& a, const NetworkElement& b) { return a.id < b.id; });
  recompute_residuals();
}

void SubstrateState::recompute_residuals() {
  residual_element_.clear();
  residual_interface_.clear();
  residual_shared_.clear();
  for (const auto& e : substrate_.elements) {
    for (const auto& [rs, cap] : e.capacities) {
      residual_element_[{e.id, rs}] = cap;
    }
  }
  residual_interface_ = substrate_.interface_capacities;
  for (const auto& r : resources_) {
    if (r.klass == Layer::Substrate) residual_shared_[r.id] = r.shared_capacity;
  }
  // Canonical subtraction order (request id, then allocation key) keeps
  // residuals bit-identical across any commit/withdraw history that ends in
  // the same committed set.
  for (const auto& [id, committed] : committed_) {
    (void)id;
    for (const auto& [key, amount] : committed.embedding.allocations) {
      residual_element_[{key.v, key.rs}] -= amount;
      auto shared = residual_shared_.find(key.rs);
      if (shared != residual_shared_.end() && !is_unbounded(shared->second)) {
        shared->second -= amount;
      }
    }
    for (const auto& [key, amount] : committed.embedding.flow_allocations) {
      auto it = residual_interface_.find({key.v, key.w, key.rs});
      if (it != residual_interface_.end()) it->second -= amount;
    }
  }
}

double SubstrateState::residual_element(const std::string& v,
                                        const std::string& rs) const {
  auto it = residual_element_.find({v, rs});
  return it == residual_element_.end() ? 0.0 : it->second;
}

double SubstrateState::residual_interface(const std::string& v, const std::string& w,
                                          const std::string& rs) const {
  auto it = residual_interface_.find({v, w, rs});
  return it == residual_interface_.end() ? 0.0 : it->second;
}

double SubstrateState::residual_shared(const std::string& rs) const {
  auto it = residual_shared_.find(rs);
  return it == residual_shared_.end() ? kUnbounded : it->second;
}

SubstrateGraph SubstrateState::residual_substrate() const {
  SubstrateGraph out = substrate_;
  for (auto& e : out.elements) {
    for (auto& [rs, cap] : e.capacities) {
      cap = std::max(0.0, residual_element(e.id, rs));
    }
  }
  for (auto& [key, cap] : out.interface_capacities) {
    auto it = residual_interface_.find(key);
    if (it != residual_interface_.end()) cap = std::max(0.0, it->second);
  }
  return out;
}

std::vector<ResourceType> SubstrateState::residual_resources() const {
  std::vector<ResourceType> out = resources_;
  for (auto& r : out) {
    if (r.klass == Layer::Substrate && !is_unbounded(r.shared_capacity)) {
      r.shared_capacity = std::max(0.0, residual_shared(r.id));
    }
  }
  return out;
}

void SubstrateState::commit(const Request& request, const Embedding& embedding) {
  if (committed_.count(request.id)) {
    throw Error("commit: request '" + request.id + "' already committed");
  }
  if (request.id != embedding.request_id) {
    throw Error("commit: embedding belongs to '" + embedding.request_id +
                "', not '" + request.id + "'");
  }
  // Check against current residuals; the migration context mirrors the
  // proposed mapping so migration flags cannot raise false issues here.
  MigrationContext migration;
  for (const auto& [u, hosts] : embedding.mapping) {
    for (const auto& v : hosts) migration.old_mapping[{u, v}] = 1;
  }
  EmbeddingProblem problem = make_problem(*this, request, ObjectiveConfig{}, migration);
  CheckReport report = check_embedding(problem, embedding);
  if (!report.clean()) {
    throw Error("commit: embedding fails verification against residuals:\n" +
                report.to_text());
  }
  committed_[request.id] = {request, embedding};
  recompute_residuals();
}

void SubstrateState::withdraw(const std::string& request_id) {
  if (!committed_.erase(request_id)) {
    throw Error("withdraw: unknown request '" + request_id + "'");
  }
  recompute_residuals();
}

EmbeddingProblem make_problem(const SubstrateState& state, const Request& request,
                              const ObjectiveConfig& objective,
                              const MigrationContext& migration) {
  EmbeddingProblem problem;
  problem.request_id = request.id;
  problem.resources = state.residual_resources();
  problem.substrate = state.residual_substrate();
  problem.request = request.elements;
  problem.policies = request.policies;
  problem.migration = migration;
  problem.flows = request.flow_overrides;
  problem.objective = objective;
  finalize_problem(problem);
  return problem;
}

MigrationContext migration_context_for(const SubstrateState& state,
                                       const std::string& request_id,
                                       const MigrationInputs& inputs) {
  auto it = state.committed().find(request_id);
  if (it == state.committed().end()) {
    throw Error("migration context: unknown request '" + request_id + "'");
  }
  const CommittedRequest& committed = it->second;
  MigrationContext migration;
  for (const auto& [u, hosts] : committed.embedding.mapping) {
    for (const auto& v : hosts) migration.old_mapping[{u, v}] = 1;
  }
  for (const auto& element : committed.request.elements) {
    auto p = inputs.penalty.find(element.id);
    if (p != inputs.penalty.end()) {
      migration.penalty[element.id] = p->second;
    } else if (element.is_node()) {
      migration.penalty[element.id] = inputs.default_node_penalty;
    }
    // link penalties default through the epsilon rule at finalize
    for (const auto& substrate_element : state.substrate().elements) {
      const std::string& v = substrate_element.id;
      auto t = inputs.transit.find({element.id, v});
      double value;
      if (t != inputs.transit.end()) {
        value = t->second;
      } else if (migration.old_mapping.count({element.id, v})) {
        value = 0.0;  // staying put transfers nothing
      } else {
        value = inputs.default_transit;
      }
      if (value != 0) migration.transit[{element.id, v}] = value;
    }
  }
  return migration;
}

Embedding decode_solution(const EmbeddingProblem& problem, const mip::MipModel& model,
                          const milp::MilpSolution& solution) {
  Embedding out;
  out.request_id = problem.request_id;
  out.objective = solution.objective;
  out.solver_status = solution.status;
  out.solver_stats = solution.stats;

  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const auto& var = model.variables[j];
    double value = solution.raw[j];
    switch (var.key.family) {
      case mip::VarKey::Family::New:
        if (value > 0.5) out.mapping[var.key.u].push_back(var.key.v);
        break;
      case mip::VarKey::Family::Mig:
        if (value > 0.5) out.migrations.insert(var.key.u);
        break;
      case mip::VarKey::Family::AllocS:
        if (value > 1e-9) {
          out.allocations[{var.key.u, var.key.v, var.key.rv, var.key.rs}] = value;
        }
        break;
      case mip::VarKey::Family::FlowS:
        if (value > 1e-9) {
          Flow flow{var.key.u, var.key.fsrc, var.key.fsink};
          out.flow_allocations[{flow, var.key.v, var.key.w, var.key.rv, var.key.rs}] =
              value;
        }
        break;
      default:
        break;
    }
  }
  for (auto& [u, hosts] : out.mapping) {
    (void)u;
    std::sort(hosts.begin(), hosts.end());
  }

  double cost = 0;
  for (const auto& u : out.migrations) {
    auto it = problem.migration.penalty.find(u);
    if (it != problem.migration.penalty.end()) cost += it->second;
  }
  for (const auto& [u, hosts] : out.mapping) {
    for (const auto& v : hosts) cost += problem.migration.transit_at(u, v);
  }
  out.migration_cost = cost;
  return out;
}

EmbedOutcome embed(const SubstrateState& state, const Request& request,
                   const ObjectiveConfig& objective,
                   const milp::SolverConfig& solver) {
  EmbeddingProblem problem = make_problem(state, request, objective, MigrationContext{});
  ValidationReport validation = validate_problem(problem);
  if (!validation.clean()) {
    throw Error("embed: request '" + request.id + "' is not valid:\n" +
                validation.to_text());
  }
  mip::MipModel model = mip::build(problem);
  milp::MilpSolution solution = milp::solve_milp(model, solver);

  EmbedOutcome outcome;
  if (solution.status == milp::Status::Infeasible ||
      (solution.status == milp::Status::TimeLimit && solution.raw.empty())) {
    Rejection rejection;
    rejection.status = solution.status;
    rejection.infeasible_families = solution.infeasible_families;
    rejection.solver_stats = solution.stats;
    if (!solution.infeasible_families.empty()) {
      rejection.note = "root relaxation infeasible; active families:";
      for (const auto& f : solution.infeasible_families) rejection.note += " " + f;
    } else if (solution.status == milp::Status::TimeLimit) {
      rejection.note = "time limit reached without an incumbent";
    }
    outcome.rejection = rejection;
    return outcome;
  }

  Embedding embedding = decode_solution(problem, model, solution);
  CheckReport report = check_embedding(problem, embedding);
  if (!report.clean()) {
    throw Error("embed: solver produced an embedding that fails verification:\n" +
                report.to_text());
  }
  outcome.embedding = std::move(embedding);
  return outcome;
}

double status_quo_objective(const EmbeddingProblem& problem, const Embedding& embedding) {
  double value = 0;
  if (problem.objective.kind == ObjectiveKind::ResourceMin) {
    for (const auto& [key, amount] : embedding.allocations) {
      value += problem.policies.weight_at(key.u, key.v) * amount;
    }
  } else {
    std::map<std::string, double> totals;
    for (const auto& [key, amount] : embedding.allocations) {
      totals[key.rs] += amount;
    }
    double max_load = 0;
    double sum_load = 0;
    for (const auto& r : problem.resources) {
      if (r.klass != Layer::Substrate) continue;
      if (is_unbounded(r.shared_capacity) || r.shared_capacity <= 0) continue;
      auto it = totals.find(r.id);
      double load = it == totals.end()
                        ? 0.0
                        : r.load_weight * it->second / r.shared_capacity;
      sum_load += load;
      max_load = std::max(max_load, load);
    }
    value = problem.objective.c * max_load + sum_load;
  }
  // Keeping the current mapping: no migration flags, transit at current
  // locations is zero by construction.
  for (const auto& [u, hosts] : embedding.mapping) {
    for (const auto& v : hosts) value += problem.migration.transit_at(u, v);
  }
  return value;
}

ReembedPlan reembed(const SubstrateState& state, const ObjectiveConfig& objective,
                    const MigrationInputs& inputs, const milp::SolverConfig& solver) {
  ReembedPlan plan;
  SubstrateState scratch = state;
  for (const auto& [id, committed] : state.committed()) {
    MigrationContext migration = migration_context_for(scratch, id, inputs);
    scratch.withdraw(id);
    EmbeddingProblem problem =
        make_problem(scratch, committed.request, objective, migration);
    mip::MipModel model = mip::build(problem);
    milp::MilpSolution solution = milp::solve_milp(model, solver);

    ReembedEntry entry;
    entry.request_id = id;
    if (solution.status == milp::Status::Infeasible ||
        (solution.status == milp::Status::TimeLimit && solution.raw.empty())) {
      // Keeping in place is always feasible, so this indicates numerical
      // trouble; report the request as kept.
      entry.feasible = false;
      entry.proposed = committed.embedding;
      entry.status_quo_objective = 0;
      scratch.commit(committed.request, committed.embedding);
      plan.entries.push_back(std::move(entry));
      continue;
    }

    Embedding proposed = decode_solution(problem, model, solution);
    CheckReport report = check_embedding(problem, proposed);
    if (!report.clean()) {
      throw Error("reembed: solver produced an invalid plan entry:\n" +
                  report.to_text());
    }
    entry.status_quo_objective = status_quo_objective(problem, committed.embedding);
    entry.improvement = entry.status_quo_objective - proposed.objective;
    entry.migration_cost = proposed.migration_cost;
    entry.migrate = entry.improvement > 1e-9 && !proposed.migrations.empty();
    bool adopt = entry.improvement > 1e-9;
    entry.proposed = std::move(proposed);
    plan.entries.push_back(entry);
    if (adopt) {
      plan.total_improvement += entry.improvement;
      plan.total_migration_cost += entry.migration_cost;
      scratch.commit(committed.request, entry.proposed);
    } else {
      scratch.commit(committed.request, committed.embedding);
    }
  }
  return plan;
}

void apply_plan(SubstrateState& state, const ReembedPlan& plan) {
  for (const auto& entry : plan.entries) {
    if (!entry.feasible || entry.improvement <= 1e-9) continue;
    auto it = state.committed().find(entry.request_id);
    if (it == state.committed().end()) {
      throw Error("apply_plan: unknown request '" + entry.request_id + "'");
    }
    Request request = it->second.request;
    state.withdraw(entry.request_id);
    state.commit(request, entry.proposed);
  }
}

WhatIfResult whatif_subset(const SubstrateState& state,
                           const std::set<std::string>& subset,
                           const ObjectiveConfig& objective,
                           const milp::SolverConfig& solver,
                           const MigrationInputs& inputs) {
  if (subset.empty()) throw Error("whatif_subset: empty subset");
  WhatIfResult result;
  SubstrateState scratch(state.resources(), state.substrate());
  for (const auto& [id, committed] : state.committed()) {
    MigrationContext migration = migration_context_for(state, id, inputs);
    Request restricted = committed.request;
    for (const auto& element : restricted.elements) {
      for (const auto& substrate_element : state.substrate().elements) {
        if (!subset.count(substrate_element.id)) {
          restricted.policies.suit[{element.id, substrate_element.id}] = 0;
        }
      }
    }
    EmbeddingProblem problem = make_problem(scratch, restricted, objective, migration);
    mip::MipModel model = mip::build(problem);
    milp::MilpSolution solution = milp::solve_milp(model, solver);
    if (solution.status == milp::Status::Infeasible ||
        (solution.status == milp::Status::TimeLimit && solution.raw.empty())) {
      result.feasible = false;
      result.rejected_requests.push_back(id);
      continue;
    }
    Embedding proposed = decode_solution(problem, model, solution);
    CheckReport report = check_embedding(problem, proposed);
    if (!report.clean()) {
      throw Error("whatif_subset: invalid embedding for '" + id + "':\n" +
                  report.to_text());
    }
    result.migration_cost += proposed.migration_cost;
    result.objective += proposed.objective;
    scratch.commit(restricted, proposed);
  }
  return result;
}

CheckReport verify_embedding(const SubstrateState& state, const Request& request,
                             const Embedding& embedding,
                             const ObjectiveConfig& objective, double tolerance) {
  const SubstrateState* base = &state;
  SubstrateState scratch;
  if (state.committed().count(embedding.request_id)) {
    scratch = state;
    scratch.withdraw(embedding.request_id);
    base = &scratch;
  }
  MigrationContext migration;
  for (const auto& [u, hosts] : embedding.mapping) {
    for (const auto& v : hosts) migration.old_mapping[{u, v}] = 1;
  }
  EmbeddingProblem problem = make_problem(*base, request, objective, migration);
  return check_embedding(problem, embedding, tolerance);
}

// ---------------------------------------------------------------------------
// Checker: re-evaluates the constraint families directly from problem data.

namespace {

class Checker {
 public:
  Checker(const EmbeddingProblem& problem, const Embedding& embedding, double tol)
      : problem_(problem), e_(embedding), tol_(tol) {
    expanded_ = expand_links(problem.substrate.elements);
  }

  CheckReport run() {
    check_mapping();
    check_allocation_gates();
    check_node_requests();
    check_min_alloc();
    check_capacities();
    check_flows();
    check_migration_flags();
    return std::move(report_);
  }

 private:
  void add(const std::string& code, const std::string& subject,
           const std::string& message) {
    report_.issues.push_back({code, subject, message});
  }

  // Hosted amount of rv on v for u, derived through prop from substrate
  // allocations.
  double hosted(const std::string& u, const std::string& v,
                const std::string& rv) const {
    double sum = 0;
    for (const auto& [key, amount] : e_.allocations) {
      if (key.u == u && key.v == v && key.rv == rv) {
        sum += problem_.substrate.prop_factor(rv, key.rs) * amount;
      }
    }
    return sum;
  }

  double flow_hosted(const Flow& f, const std::string& v, const std::string& w,
                     const std::string& rv) const {
    double sum = 0;
    auto lo = e_.flow_allocations.lower_bound({f, v, w, "", ""});
    for (auto it = lo; it != e_.flow_allocations.end(); ++it) {
      const auto& key = it->first;
      if (!(key.flow.link == f.link && key.flow.source == f.source &&
            key.flow.sink == f.sink && key.v == v && key.w == w)) {
        break;
      }
      if (key.rv == rv) {
        sum += problem_.substrate.prop_factor(rv, key.rs) * it->second;
      }
    }
    return sum;
  }

  void check_mapping() {
    for (const auto& element : problem_.request) {
      const auto* hosts = e_.hosts(element.id);
      std::size_t count = hosts ? hosts->size() : 0;
      if (element.is_node()) {
        if (count != 1) {
          add("map_node", element.id,
              "virtual node mapped to " + std::to_string(count) +
                  " elements, expected exactly 1");
        }
      } else if (count < 1) {
        add("map_link", element.id, "virtual link mapped to no element");
      }
      if (!hosts) continue;
      for (const auto& v : *hosts) {
        if (!problem_.substrate.find(v)) {
          add("unknown-host", element.id, "mapped to unknown element '" + v + "'");
        } else if (problem_.policies.suit_at(element.id, v) != 1) {
          add("allowed", element.id, "mapped to unsuitable element '" + v + "'");
        }
      }
    }
    for (const auto& [u, hosts] : e_.mapping) {
      (void)hosts;
      if (!problem_.find_virtual(u)) {
        add("unknown-element", u, "mapping for unknown virtual element");
      }
    }
  }

  void check_allocation_gates() {
    for (const auto& [key, amount] : e_.allocations) {
      if (amount < -tol_) {
        add("negative-allocation", key.u, "negative allocation");
      }
      if (amount > tol_ && !e_.maps_to(key.u, key.v)) {
        add("set_new", key.u,
            "allocation of " + key.rs + " on '" + key.v + "' without mapping");
      }
      if (!problem_.find_virtual(key.u)) {
        add("unknown-element", key.u, "allocation for unknown virtual element");
      }
    }
    for (const auto& [key, amount] : e_.flow_allocations) {
      if (amount < -tol_) add("negative-flow", key.flow.link, "negative flow");
    }
  }

  void check_node_requests() {
    for (const auto* node : problem_.virtual_nodes()) {
      const auto* hosts = e_.hosts(node->id);
      if (!hosts || hosts->size() != 1) continue;  // reported in check_mapping
      const std::string& v = hosts->front();
      for (const auto& [key, req] : node->requests) {
        const auto& [rv, vt] = key;
        double amount = hosted(node->id, v, rv);
        switch (vt) {
          case ValueType::Minimum:
            if (amount < req - tol_) {
              add("req_min", node->id,
                  rv + " hosted " + std::to_string(amount) + " below minimum " +
                      std::to_string(req));
            }
            break;
          case ValueType::Maximum:
            if (amount > req + tol_) {
              add("req_max", node->id, rv + " hosted above maximum");
            }
            break;
          case ValueType::Constant:
            if (std::fabs(amount - req) > tol_) {
              add("req_con", node->id,
                  rv + " hosted " + std::to_string(amount) + " != constant " +
                      std::to_string(req));
            }
            break;
        }
      }
    }
  }

  void check_min_alloc() {
    for (const auto& element : problem_.request) {
      const auto* hosts = e_.hosts(element.id);
      if (!hosts) continue;
      for (const auto& rv : element.requested_resources()) {
        const ResourceType* r = problem_.find_resource(rv);
        if (!r || r->min_alloc <= 0) continue;
        for (const auto& v : *hosts) {
          double amount = hosted(element.id, v, rv);
          if (amount < r->min_alloc - tol_) {
            add("relate_V", element.id,
                "hosted " + rv + " on '" + v + "' below min_alloc");
          }
        }
      }
    }
  }

  void check_capacities() {
    std::map<std::pair<std::string, std::string>, double> per_element;
    std::map<std::string, double> per_resource;
    for (const auto& [key, amount] : e_.allocations) {
      per_element[{key.v, key.rs}] += amount;
      per_resource[key.rs] += amount;
    }
    for (const auto& [key, total] : per_element) {
      const auto& [v, rs] = key;
      const NetworkElement* element = problem_.substrate.find(v);
      if (!element) continue;
      auto it = element->capacities.find(rs);
      double cap = it == element->capacities.end() ? 0.0 : it->second;
      if (total > cap + tol_) {
        add("ne_capacity", v,
            rs + " total " + std::to_string(total) + " exceeds capacity " +
                std::to_string(cap));
      }
    }
    for (const auto& [rs, total] : per_resource) {
      const ResourceType* r = problem_.find_resource(rs);
      if (r && !is_unbounded(r->shared_capacity) && total > r->shared_capacity + tol_) {
        add("capacity", rs, "total exceeds shared capacity");
      }
    }

    // Interface capacities bound each directed flow individually, gated by
    // the link's mapping at the arc tail.
    for (const auto& [key, amount] : e_.flow_allocations) {
      if (amount <= tol_) continue;
      double cap = problem_.substrate.interface_capacity(key.v, key.w, key.rs);
      if (!e_.maps_to(key.flow.link, key.v)) {
        add("direction", key.flow.link,
            "flow leaves '" + key.v + "' where the link is not mapped");
      } else if (amount > cap + tol_) {
        add("direction", key.flow.link,
            "flow " + std::to_string(amount) + " over (" + key.v + "," + key.w +
                ") exceeds interface capacity " + std::to_string(cap));
      }
    }
  }

  void check_flows() {
    for (const auto* link : problem_.virtual_links()) {
      auto flows_it = problem_.flows.find(link->id);
      if (flows_it == problem_.flows.end()) continue;
      for (const auto& f : flows_it->second) {
        const auto* src_hosts = e_.hosts(f.source);
        const auto* sink_hosts = e_.hosts(f.sink);
        if (!src_hosts || src_hosts->size() != 1 || !sink_hosts ||
            sink_hosts->size() != 1) {
          continue;  // endpoint mapping issues reported elsewhere
        }
        const std::string& src = src_hosts->front();
        const std::string& sink = sink_hosts->front();

        for (const auto& [key, req] : link->requests) {
          const auto& [rv, vt] = key;
          for (const auto& element : problem_.substrate.elements) {
            const std::string& v = element.id;
            double net = 0;
            auto adj = expanded_.adjacency.find(v);
            if (adj != expanded_.adjacency.end()) {
              for (const auto& w : adj->second) {
                net += flow_hosted(f, v, w, rv) - flow_hosted(f, w, v, rv);
              }
            }
            bool at_src = v == src;
            bool at_sink = v == sink;
            switch (vt) {
              case ValueType::Minimum:
                if (at_sink) break;  // selector suspends the invariant
                if (net < (at_src ? req : 0.0) - tol_) {
                  add("req_fmin", f.id(),
                      "net outflow " + std::to_string(net) + " at '" + v +
                          "' below requirement");
                }
                break;
              case ValueType::Maximum:
                if (at_sink) break;
                if (net > (at_src ? req : 0.0) + tol_) {
                  add("req_fmax", f.id(), "net outflow at '" + v + "' above maximum");
                }
                break;
              case ValueType::Constant: {
                double expected = (at_src ? req : 0.0) - (at_sink ? req : 0.0);
                if (std::fabs(net - expected) > tol_) {
                  add("req_fconst", f.id(),
                      "net outflow " + std::to_string(net) + " at '" + v +
                          "' != " + std::to_string(expected));
                }
                break;
              }
            }
          }
        }

        // Envelope: the element allocation covers each single flow's
        // in/out use, not their sum.
        for (const auto& element : problem_.substrate.elements) {
          const std::string& v = element.id;
          auto adj = expanded_.adjacency.find(v);
          if (adj == expanded_.adjacency.end()) continue;
          for (const auto& rv : link->requested_resources()) {
            for (const auto& rs : problem_.substrate_resource_ids()) {
              if (problem_.substrate.prop_factor(rv, rs) <= 0) continue;
              double out = 0, in = 0;
              for (const auto& w : adj->second) {
                auto o = e_.flow_allocations.find({f, v, w, rv, rs});
                if (o != e_.flow_allocations.end()) out += o->second;
                auto i = e_.flow_allocations.find({f, w, v, rv, rs});
                if (i != e_.flow_allocations.end()) in += i->second;
              }
              auto a = e_.allocations.find({link->id, v, rv, rs});
              double alloc = a == e_.allocations.end() ? 0.0 : a->second;
              if (std::max(out, in) > alloc + tol_) {
                add("exp_envelope", f.id(),
                    "flow through '" + v + "' exceeds the element allocation");
              }
            }
          }
        }
      }
    }
  }

  void check_migration_flags() {
    for (const auto& element : problem_.request) {
      double old_sum = 0;
      bool left_behind = false;
      for (const auto& [key, value] : problem_.migration.old_mapping) {
        if (key.first != element.id || value != 1) continue;
        old_sum += 1;
        if (!e_.maps_to(element.id, key.second)) left_behind = true;
      }
      bool flagged = e_.migrations.count(element.id) > 0;
      if (old_sum == 0 && flagged) {
        add("new", element.id, "fresh element flagged as migrated");
      }
      if (left_behind && !flagged) {
        add("migrated", element.id,
            "element left a previous location without the migration flag");
      }
    }
  }

  const EmbeddingProblem& problem_;
  const Embedding& e_;
  double tol_;
  ExpandedGraph expanded_;
  CheckReport report_;
};

}  // namespace

CheckReport check_embedding(const EmbeddingProblem& problem, const Embedding& embedding,
                            double tolerance) {
  return Checker(problem, embedding, tolerance).run();
}

}  // namespace vne::engine
