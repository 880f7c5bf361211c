#include "vne/mip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vne::mip {

std::string to_string(Relation rel) {
  switch (rel) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

int MipModel::index_of(const std::string& name) const {
  auto it = variable_index.find(name);
  return it == variable_index.end() ? -1 : it->second;
}

const Variable* MipModel::find_variable(const std::string& name) const {
  int idx = index_of(name);
  return idx < 0 ? nullptr : &variables[idx];
}

double MipModel::objective_value(const std::vector<double>& x) const {
  double value = 0;
  for (const auto& [idx, coeff] : objective) value += coeff * x[idx];
  return value;
}

double MipModel::max_violation(const std::vector<double>& x) const {
  double worst = 0;
  for (std::size_t j = 0; j < variables.size(); ++j) {
    worst = std::max(worst, variables[j].lower - x[j]);
    if (!is_unbounded(variables[j].upper)) {
      worst = std::max(worst, x[j] - variables[j].upper);
    }
  }
  for (const auto& row : constraints) {
    double lhs = 0;
    for (const auto& [idx, coeff] : row.terms) lhs += coeff * x[idx];
    switch (row.relation) {
      case Relation::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::fabs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

std::size_t MipModel::count_family(const std::string& family) const {
  std::size_t count = 0;
  for (const auto& row : constraints) {
    if (row.family == family) ++count;
  }
  return count;
}

ModelBuilder::ModelBuilder(const EmbeddingProblem& problem) : problem_(problem) {
  expanded_ = expand_links(problem.substrate.elements);
  arcs_ = expanded_.arcs();
  for (const auto& [v, w] : arcs_) {
    out_neighbors_[v].push_back(w);
    in_neighbors_[w].push_back(v);
  }
}

int ModelBuilder::add_var(const std::string& name, double lower, double upper,
                          Integrality integrality, VarKey key) {
  if (lookup_.count(name)) throw Error("duplicate variable name: " + name);
  int idx = static_cast<int>(model_.variables.size());
  model_.variables.push_back({name, lower, upper, integrality, std::move(key)});
  lookup_[name] = idx;
  return idx;
}

void ModelBuilder::add_row(std::string name,
                           std::vector<std::pair<int, double>> terms,
                           Relation rel, double rhs, const std::string& family,
                           const std::string& origin) {
  // Aggregate repeated variable references so rows stay canonical.
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> merged;
  for (const auto& [idx, coeff] : terms) {
    if (!merged.empty() && merged.back().first == idx) {
      merged.back().second += coeff;
    } else {
      merged.emplace_back(idx, coeff);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& t) { return t.second == 0.0; }),
               merged.end());
  model_.constraints.push_back(
      {std::move(name), std::move(merged), rel, rhs, family, origin});
}

namespace {
std::string cat(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ".";
    out += p;
  }
  return out;
}
}  // namespace

int ModelBuilder::var_new(const std::string& u, const std::string& v) const {
  return lookup_.at(cat({"new", u, v}));
}
int ModelBuilder::var_newf(const Flow& f, const std::string& v) const {
  return lookup_.at(cat({"newf", f.id(), v}));
}
int ModelBuilder::var_mig(const std::string& u) const {
  return lookup_.at(cat({"mig", u}));
}
int ModelBuilder::var_alloc_v(const std::string& u, const std::string& v,
                              const std::string& rv) const {
  return lookup_.at(cat({"allocV", u, v, rv}));
}
int ModelBuilder::var_alloc_s(const std::string& u, const std::string& v,
                              const std::string& rv, const std::string& rs) const {
  return lookup_.at(cat({"allocS", u, v, rv, rs}));
}
int ModelBuilder::var_flow_v(const Flow& f, const std::string& v,
                             const std::string& w, const std::string& rv) const {
  return lookup_.at(cat({"flowV", f.id(), v, w, rv}));
}
int ModelBuilder::var_flow_s(const Flow& f, const std::string& v,
                             const std::string& w, const std::string& rv,
                             const std::string& rs) const {
  return lookup_.at(cat({"flowS", f.id(), v, w, rv, rs}));
}
int ModelBuilder::var_load(const std::string& rs) const {
  return lookup_.at(cat({"load", rs}));
}

std::vector<std::string> ModelBuilder::hosts_of(const std::string& rv) const {
  std::vector<std::string> out;
  for (const auto& rs : problem_.substrate_resource_ids()) {
    if (problem_.substrate.prop_factor(rv, rs) > 0) out.push_back(rs);
  }
  return out;
}

double ModelBuilder::big_m(const Flow&, const std::string& rv) const {
  // Smallest safe selector constant: one plus the total virtual-unit flow
  // the substrate interfaces could ever carry for rv. prop scaling keeps the
  // bound valid when a unit of substrate resource hosts more than one
  // virtual unit.
  double total = 0;
  for (const auto& [v, w] : arcs_) {
    for (const auto& rs : hosts_of(rv)) {
      total += problem_.substrate.prop_factor(rv, rs) *
               problem_.substrate.interface_capacity(v, w, rs);
    }
  }
  return 1.0 + total;
}

double ModelBuilder::epsilon_f(const NetworkElement& link) const {
  double eps = 1.0;
  bool any = false;
  for (const auto& rv : link.requested_resources()) {
    const ResourceType* r = problem_.find_resource(rv);
    if (!r) continue;
    eps = std::min(eps, r->min_alloc);
    any = true;
  }
  return any ? eps : 0.0;
}

void ModelBuilder::add_variables() {
  const auto& S = problem_.substrate.elements;

  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      VarKey key;
      key.family = VarKey::Family::New;
      key.u = u.id;
      key.v = v.id;
      add_var(cat({"new", u.id, v.id}), 0, 1, Integrality::Binary, key);
    }
  }
  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& v : S) {
        VarKey key;
        key.family = VarKey::Family::NewFlow;
        key.u = link->id;
        key.v = v.id;
        key.fsrc = f.source;
        key.fsink = f.sink;
        add_var(cat({"newf", f.id(), v.id}), 0, 1, Integrality::Binary, key);
      }
    }
  }
  for (const auto& u : problem_.request) {
    VarKey key;
    key.family = VarKey::Family::Mig;
    key.u = u.id;
    add_var(cat({"mig", u.id}), 0, 1, Integrality::Binary, key);
  }
  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      for (const auto& rv : u.requested_resources()) {
        VarKey key;
        key.family = VarKey::Family::AllocV;
        key.u = u.id;
        key.v = v.id;
        key.rv = rv;
        add_var(cat({"allocV", u.id, v.id, rv}), 0, kUnbounded,
                Integrality::Continuous, key);
      }
    }
  }
  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      for (const auto& rv : u.requested_resources()) {
        for (const auto& rs : hosts_of(rv)) {
          VarKey key;
          key.family = VarKey::Family::AllocS;
          key.u = u.id;
          key.v = v.id;
          key.rv = rv;
          key.rs = rs;
          add_var(cat({"allocS", u.id, v.id, rv, rs}), 0, kUnbounded,
                  Integrality::Continuous, key);
        }
      }
    }
  }
  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& [v, w] : arcs_) {
        for (const auto& rv : link->requested_resources()) {
          VarKey key;
          key.family = VarKey::Family::FlowV;
          key.u = link->id;
          key.v = v;
          key.w = w;
          key.rv = rv;
          key.fsrc = f.source;
          key.fsink = f.sink;
          add_var(cat({"flowV", f.id(), v, w, rv}), 0, kUnbounded,
                  Integrality::Continuous, key);
        }
      }
    }
  }
  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& [v, w] : arcs_) {
        for (const auto& rv : link->requested_resources()) {
          for (const auto& rs : hosts_of(rv)) {
            VarKey key;
            key.family = VarKey::Family::FlowS;
            key.u = link->id;
            key.v = v;
            key.w = w;
            key.rv = rv;
            key.rs = rs;
            key.fsrc = f.source;
            key.fsink = f.sink;
            add_var(cat({"flowS", f.id(), v, w, rv, rs}), 0, kUnbounded,
                    Integrality::Continuous, key);
          }
        }
      }
    }
  }
  for (const auto& rs : problem_.substrate_resource_ids()) {
    VarKey key;
    key.family = VarKey::Family::Load;
    key.rs = rs;
    add_var(cat({"load", rs}), 0, kUnbounded, Integrality::Continuous, key);
  }
  VarKey key;
  key.family = VarKey::Family::MaxLoad;
  add_var("max_load", 0, kUnbounded, Integrality::Continuous, key);
}

void ModelBuilder::build_node_family() {
  const auto& S = problem_.substrate.elements;

  for (const auto* u : problem_.virtual_nodes()) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& v : S) terms.emplace_back(var_new(u->id, v.id), 1.0);
    add_row(cat({"map_node", u->id}), std::move(terms), Relation::Equal, 1.0,
            "map_node", u->id);
  }

  // set_new gates allocations behind the mapping selector. Emitted for links
  // as well as nodes so that alloc > 0 implies new = 1 for every element.
  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      for (const auto& rv : u.requested_resources()) {
        for (const auto& rs : hosts_of(rv)) {
          auto cap_it = v.capacities.find(rs);
          double cap = cap_it == v.capacities.end() ? 0.0 : cap_it->second;
          add_row(cat({"set_new", u.id, v.id, rv, rs}),
                  {{var_alloc_s(u.id, v.id, rv, rs), 1.0},
                   {var_new(u.id, v.id), -cap}},
                  Relation::LessEqual, 0.0, "set_new", u.id + "," + v.id);
        }
      }
    }
  }

  for (const auto* u : problem_.virtual_nodes()) {
    for (const auto& v : S) {
      for (const auto& [key, req] : u->requests) {
        const auto& [rv, vt] = key;
        std::vector<std::pair<int, double>> terms{
            {var_alloc_v(u->id, v.id, rv), 1.0},
            {var_new(u->id, v.id), -req}};
        switch (vt) {
          case ValueType::Minimum:
            add_row(cat({"req_min", u->id, v.id, rv}), std::move(terms),
                    Relation::GreaterEqual, 0.0, "req_min", u->id);
            break;
          case ValueType::Maximum:
            add_row(cat({"req_max", u->id, v.id, rv}), std::move(terms),
                    Relation::LessEqual, 0.0, "req_max", u->id);
            break;
          case ValueType::Constant:
            add_row(cat({"req_con", u->id, v.id, rv}), std::move(terms),
                    Relation::Equal, 0.0, "req_con", u->id);
            break;
        }
      }
    }
  }
}

void ModelBuilder::build_mapping_family() {
  const auto& S = problem_.substrate.elements;

  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      for (const auto& rv : u.requested_resources()) {
        const ResourceType* r = problem_.find_resource(rv);
        if (!r || r->min_alloc <= 0) continue;
        add_row(cat({"relate_V", u.id, v.id, rv}),
                {{var_alloc_v(u.id, v.id, rv), 1.0},
                 {var_new(u.id, v.id), -r->min_alloc}},
                Relation::GreaterEqual, 0.0, "relate_V", u.id + "," + v.id);
      }
    }
  }

  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      add_row(cat({"allowed", u.id, v.id}), {{var_new(u.id, v.id), 1.0}},
              Relation::LessEqual,
              static_cast<double>(problem_.policies.suit_at(u.id, v.id)),
              "allowed", u.id + "," + v.id);
    }
  }

  for (const auto& v : S) {
    for (const auto& rs : problem_.substrate_resource_ids()) {
      std::vector<std::pair<int, double>> terms;
      for (const auto& u : problem_.request) {
        for (const auto& rv : u.requested_resources()) {
          if (problem_.substrate.prop_factor(rv, rs) > 0) {
            terms.emplace_back(var_alloc_s(u.id, v.id, rv, rs), 1.0);
          }
        }
      }
      if (terms.empty()) continue;
      auto cap_it = v.capacities.find(rs);
      double cap = cap_it == v.capacities.end() ? 0.0 : cap_it->second;
      add_row(cat({"ne_capacity", v.id, rs}), std::move(terms),
              Relation::LessEqual, cap, "ne_capacity", v.id);
    }
  }

  for (const auto& rs : problem_.substrate_resource_ids()) {
    const ResourceType* r = problem_.find_resource(rs);
    std::vector<std::pair<int, double>> terms;
    for (const auto& u : problem_.request) {
      for (const auto& v : S) {
        for (const auto& rv : u.requested_resources()) {
          if (problem_.substrate.prop_factor(rv, rs) > 0) {
            terms.emplace_back(var_alloc_s(u.id, v.id, rv, rs), 1.0);
          }
        }
      }
    }
    if (!is_unbounded(r->shared_capacity) && !terms.empty()) {
      add_row(cat({"capacity", rs}), terms, Relation::LessEqual,
              r->shared_capacity, "capacity", rs);
    }
    if (!is_unbounded(r->shared_capacity) && r->shared_capacity > 0 &&
        !terms.empty()) {
      std::vector<std::pair<int, double>> load_terms;
      double scale = r->load_weight / r->shared_capacity;
      for (const auto& [idx, coeff] : terms) {
        load_terms.emplace_back(idx, coeff * scale);
      }
      load_terms.emplace_back(var_load(rs), -1.0);
      add_row(cat({"load", rs}), std::move(load_terms), Relation::LessEqual,
              0.0, "load", rs);
    } else if (is_unbounded(r->shared_capacity) && !terms.empty() &&
               problem_.objective.kind == ObjectiveKind::LoadBalance) {
      model_.notes.push_back("load row skipped for resource '" + rs +
                             "': shared capacity unbounded");
    }
  }

  for (const auto& rs : problem_.substrate_resource_ids()) {
    add_row(cat({"max_load", rs}),
            {{var_load(rs), 1.0}, {lookup_.at("max_load"), -1.0}},
            Relation::LessEqual, 0.0, "max_load", rs);
  }
}

void ModelBuilder::build_resource_relation_family() {
  const auto& S = problem_.substrate.elements;

  for (const auto& u : problem_.request) {
    for (const auto& v : S) {
      for (const auto& rv : u.requested_resources()) {
        std::vector<std::pair<int, double>> terms;
        for (const auto& rs : hosts_of(rv)) {
          terms.emplace_back(var_alloc_s(u.id, v.id, rv, rs),
                             problem_.substrate.prop_factor(rv, rs));
        }
        terms.emplace_back(var_alloc_v(u.id, v.id, rv), -1.0);
        add_row(cat({"resource", u.id, v.id, rv}), std::move(terms),
                Relation::Equal, 0.0, "resource", u.id + "," + v.id);
      }
    }
  }

  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& [v, w] : arcs_) {
        for (const auto& rv : link->requested_resources()) {
          std::vector<std::pair<int, double>> terms;
          for (const auto& rs : hosts_of(rv)) {
            terms.emplace_back(var_flow_s(f, v, w, rv, rs),
                               problem_.substrate.prop_factor(rv, rs));
          }
          terms.emplace_back(var_flow_v(f, v, w, rv), -1.0);
          add_row(cat({"flow_res", f.id(), v, w, rv}), std::move(terms),
                  Relation::Equal, 0.0, "flow_res", f.id());
        }
      }
    }
  }
}

void ModelBuilder::build_link_family() {
  const auto& S = problem_.substrate.elements;

  for (const auto* link : problem_.virtual_links()) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& v : S) terms.emplace_back(var_new(link->id, v.id), 1.0);
    add_row(cat({"map_link", link->id}), std::move(terms),
            Relation::GreaterEqual, 1.0, "map_link", link->id);
  }

  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& v : S) {
        add_row(cat({"map_src", f.id(), v.id}),
                {{var_new(link->id, v.id), 1.0}, {var_new(f.source, v.id), -1.0}},
                Relation::GreaterEqual, 0.0, "map_src", f.id());
        add_row(cat({"map_sink", f.id(), v.id}),
                {{var_new(link->id, v.id), 1.0}, {var_new(f.sink, v.id), -1.0}},
                Relation::GreaterEqual, 0.0, "map_sink", f.id());
      }
    }
  }

  // Net-outflow constraints: demanded at the flow's source, suspended at the
  // sink through the big-M selector, preservation elsewhere.
  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& v : S) {
        for (const auto& [key, req] : link->requests) {
          const auto& [rv, vt] = key;
          std::vector<std::pair<int, double>> terms;
          if (auto it = out_neighbors_.find(v.id); it != out_neighbors_.end()) {
            for (const auto& w : it->second) {
              terms.emplace_back(var_flow_v(f, v.id, w, rv), 1.0);
            }
          }
          if (auto it = in_neighbors_.find(v.id); it != in_neighbors_.end()) {
            for (const auto& w : it->second) {
              terms.emplace_back(var_flow_v(f, w, v.id, rv), -1.0);
            }
          }
          terms.emplace_back(var_new(f.source, v.id), -req);
          const double m = big_m(f, rv);
          switch (vt) {
            case ValueType::Minimum: {
              terms.emplace_back(var_new(f.sink, v.id), m);
              std::string name = cat({"req_fmin", f.id(), v.id, rv});
              model_.annotations[name] = "big_m=" + std::to_string(m);
              add_row(std::move(name), std::move(terms),
                      Relation::GreaterEqual, 0.0, "req_fmin", f.id());
              break;
            }
            case ValueType::Maximum: {
              terms.emplace_back(var_new(f.sink, v.id), -m);
              std::string name = cat({"req_fmax", f.id(), v.id, rv});
              model_.annotations[name] = "big_m=" + std::to_string(m);
              add_row(std::move(name), std::move(terms), Relation::LessEqual,
                      0.0, "req_fmax", f.id());
              break;
            }
            case ValueType::Constant: {
              terms.emplace_back(var_new(f.sink, v.id), req);
              add_row(cat({"req_fconst", f.id(), v.id, rv}), std::move(terms),
                      Relation::Equal, 0.0, "req_fconst", f.id());
              break;
            }
          }
        }
      }
    }
  }
}

void ModelBuilder::build_link_allocation_family() {
  const auto& S = problem_.substrate.elements;

  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& v : S) {
        for (const auto& rv : link->requested_resources()) {
          for (const auto& rs : hosts_of(rv)) {
            std::vector<std::pair<int, double>> out_terms, in_terms;
            if (auto it = out_neighbors_.find(v.id); it != out_neighbors_.end()) {
              for (const auto& w : it->second) {
                out_terms.emplace_back(var_flow_s(f, v.id, w, rv, rs), 1.0);
              }
            }
            if (auto it = in_neighbors_.find(v.id); it != in_neighbors_.end()) {
              for (const auto& w : it->second) {
                in_terms.emplace_back(var_flow_s(f, w, v.id, rv, rs), 1.0);
              }
            }
            int alloc = var_alloc_s(link->id, v.id, rv, rs);
            out_terms.emplace_back(alloc, -1.0);
            in_terms.emplace_back(alloc, -1.0);
            add_row(cat({"exp_out", f.id(), v.id, rv, rs}), std::move(out_terms),
                    Relation::LessEqual, 0.0, "exp_out", f.id());
            add_row(cat({"exp_in", f.id(), v.id, rv, rs}), std::move(in_terms),
                    Relation::LessEqual, 0.0, "exp_in", f.id());
          }
        }
      }
    }
  }

  for (const auto* link : problem_.virtual_links()) {
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& [v, w] : arcs_) {
        for (const auto& rv : link->requested_resources()) {
          for (const auto& rs : hosts_of(rv)) {
            double cap = problem_.substrate.interface_capacity(v, w, rs);
            add_row(cat({"direction", f.id(), v, w, rv, rs}),
                    {{var_flow_s(f, v, w, rv, rs), 1.0},
                     {var_new(link->id, v), -cap}},
                    Relation::LessEqual, 0.0, "direction", f.id());
          }
        }
      }
    }
  }

  // relate_f ties the mapping flag to actual traversal in hosted (virtual)
  // units. Elements hosting the flow's endpoints are exempt so that pure
  // local links stay valid with only their nominal allocation.
  for (const auto* link : problem_.virtual_links()) {
    const double eps = epsilon_f(*link);
    if (eps <= 0) continue;
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& v : S) {
        for (const auto& rv : link->requested_resources()) {
          std::vector<std::pair<int, double>> terms;
          if (auto it = out_neighbors_.find(v.id); it != out_neighbors_.end()) {
            for (const auto& w : it->second) {
              terms.emplace_back(var_flow_v(f, v.id, w, rv), 1.0);
            }
          }
          if (auto it = in_neighbors_.find(v.id); it != in_neighbors_.end()) {
            for (const auto& w : it->second) {
              terms.emplace_back(var_flow_v(f, w, v.id, rv), 1.0);
            }
          }
          terms.emplace_back(var_new(link->id, v.id), -eps);
          terms.emplace_back(var_new(f.source, v.id), eps);
          terms.emplace_back(var_new(f.sink, v.id), eps);
          add_row(cat({"relate_f", f.id(), v.id, rv}), std::move(terms),
                  Relation::GreaterEqual, 0.0, "relate_f", f.id());
        }
      }
    }
  }

  // new(f, v) appears in no core constraint; it is tied in conservatively for
  // per-flow footprint reporting and does not alter feasibility.
  for (const auto* link : problem_.virtual_links()) {
    const double eps = epsilon_f(*link);
    for (const auto& f : problem_.flows.at(link->id)) {
      for (const auto& v : S) {
        add_row(cat({"flow_map", f.id(), v.id}),
                {{var_newf(f, v.id), 1.0}, {var_new(link->id, v.id), -1.0}},
                Relation::LessEqual, 0.0, "flow_map", f.id());
        if (eps <= 0) continue;
        std::vector<std::pair<int, double>> terms;
        for (const auto& rv : link->requested_resources()) {
          if (auto it = out_neighbors_.find(v.id); it != out_neighbors_.end()) {
            for (const auto& w : it->second) {
              terms.emplace_back(var_flow_v(f, v.id, w, rv), 1.0);
            }
          }
          if (auto it = in_neighbors_.find(v.id); it != in_neighbors_.end()) {
            for (const auto& w : it->second) {
              terms.emplace_back(var_flow_v(f, w, v.id, rv), 1.0);
            }
          }
        }
        terms.emplace_back(var_newf(f, v.id), -eps);
        terms.emplace_back(var_new(f.source, v.id), eps);
        terms.emplace_back(var_new(f.sink, v.id), eps);
        add_row(cat({"flow_presence", f.id(), v.id}), std::move(terms),
                Relation::GreaterEqual, 0.0, "flow_presence", f.id());
      }
    }
  }
}

void ModelBuilder::build_migration_family() {
  for (const auto& u : problem_.request) {
    double old_sum = 0;
    for (const auto& [key, value] : problem_.migration.old_mapping) {
      if (key.first == u.id) old_sum += value;
    }
    add_row(cat({"new", u.id}), {{var_mig(u.id), 1.0}}, Relation::LessEqual,
            old_sum, "new", u.id);
  }
  for (const auto& [key, value] : problem_.migration.old_mapping) {
    if (value != 1) continue;
    const auto& [u, v] = key;
    add_row(cat({"migrated", u, v}),
            {{var_new(u, v), -1.0}, {var_mig(u), -1.0}}, Relation::LessEqual,
            -1.0, "migrated", u + "," + v);
  }
}

void ModelBuilder::build_objective() {
  std::map<int, double> terms;

  if (problem_.objective.kind == ObjectiveKind::LoadBalance) {
    double c = problem_.objective.c;
    double floor = problem_.sum_load_weights();
    if (c < floor - 1e-12) {
      throw Error("objective config: c=" + std::to_string(c) +
                  " below sum of load weights " + std::to_string(floor));
    }
    terms[lookup_.at("max_load")] += c;
    for (const auto& rs : problem_.substrate_resource_ids()) {
      terms[var_load(rs)] += 1.0;
    }
  } else {
    for (const auto& u : problem_.request) {
      for (const auto& v : problem_.substrate.elements) {
        double weight = problem_.policies.weight_at(u.id, v.id);
        for (const auto& rv : u.requested_resources()) {
          for (const auto& rs : hosts_of(rv)) {
            terms[var_alloc_s(u.id, v.id, rv, rs)] += weight;
          }
        }
      }
    }
  }

  // Migration terms are always part of the objective; they vanish for fresh
  // requests because mig is forced to zero and transit defaults to zero.
  for (const auto& u : problem_.request) {
    auto it = problem_.migration.penalty.find(u.id);
    double penalty = it == problem_.migration.penalty.end() ? 1.0 : it->second;
    terms[var_mig(u.id)] += penalty;
    for (const auto& v : problem_.substrate.elements) {
      double transit = problem_.migration.transit_at(u.id, v.id);
      if (transit != 0) terms[var_new(u.id, v.id)] += transit;
    }
  }

  model_.objective.assign(terms.begin(), terms.end());
}

MipModel ModelBuilder::take() {
  model_.variable_index = lookup_;

  // Flag request shapes the program cannot strictly enforce: maximum or
  // constant bandwidth routed over half-duplex (shared symmetric) substrate
  // resources.
  for (const auto* link : problem_.virtual_links()) {
    for (const auto& [key, req] : link->requests) {
      (void)req;
      const auto& [rv, vt] = key;
      if (vt == ValueType::Minimum) continue;
      for (const auto& rs : hosts_of(rv)) {
        const ResourceType* r = problem_.find_resource(rs);
        if (r && r->attribute_path.find("/symmetric/") != std::string::npos) {
          model_.notes.push_back(
              "link '" + link->id + "': " + to_string(vt) + " request on '" +
              rv + "' may be hosted on half-duplex substrate resource '" + rs +
              "'; maximum/constant bandwidth is not strictly enforceable there");
        }
      }
    }
  }
  return std::move(model_);
}

MipModel build(const EmbeddingProblem& problem) {
  ModelBuilder builder(problem);
  builder.add_variables();
  builder.build_node_family();
  builder.build_mapping_family();
  builder.build_resource_relation_family();
  builder.build_link_family();
  builder.build_link_allocation_family();
  builder.build_migration_family();
  builder.build_objective();
  return builder.take();
}

}  // namespace vne::mip
