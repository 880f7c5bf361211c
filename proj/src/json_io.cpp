#include "vne/json_io.hpp"

#include <fstream>
#include <sstream>

namespace vne::json_io {

namespace {

ValueType parse_value_type(const std::string& s) {
  if (s == "minimum" || s == "min") return ValueType::Minimum;
  if (s == "maximum" || s == "max") return ValueType::Maximum;
  if (s == "constant" || s == "const") return ValueType::Constant;
  throw Error("unknown request value type '" + s + "'");
}

double parse_capacity(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "unbounded") return kUnbounded;
    throw Error("capacity must be a number or \"unbounded\"");
  }
  return v.get<double>();
}

json capacity_to_json(double v) {
  if (is_unbounded(v)) return "unbounded";
  return v;
}

NetworkElement parse_element(const json& doc, ElementKind kind, Layer layer) {
  NetworkElement element;
  element.id = doc.at("id").get<std::string>();
  element.kind = kind;
  element.layer = layer;
  if (doc.contains("endpoints")) {
    element.endpoints = doc.at("endpoints").get<std::vector<std::string>>();
  }
  if (doc.contains("capacities")) {
    for (const auto& [rs, cap] : doc.at("capacities").items()) {
      element.capacities[rs] = cap.get<double>();
    }
  }
  if (doc.contains("requests")) {
    for (const auto& entry : doc.at("requests")) {
      element.requests[{entry.at("resource").get<std::string>(),
                        parse_value_type(entry.at("type").get<std::string>())}] =
          entry.at("value").get<double>();
    }
  }
  return element;
}

json element_to_json(const NetworkElement& element) {
  json out;
  out["id"] = element.id;
  if (!element.endpoints.empty()) out["endpoints"] = element.endpoints;
  if (!element.capacities.empty()) {
    json caps = json::object();
    for (const auto& [rs, cap] : element.capacities) caps[rs] = cap;
    out["capacities"] = caps;
  }
  if (!element.requests.empty()) {
    json reqs = json::array();
    for (const auto& [key, value] : element.requests) {
      reqs.push_back(
          {{"resource", key.first}, {"type", to_string(key.second)}, {"value", value}});
    }
    out["requests"] = reqs;
  }
  return out;
}

}  // namespace

std::vector<ResourceType> parse_resources(const json& section) {
  std::vector<ResourceType> out;
  for (const auto& entry : section) {
    ResourceType r;
    r.id = entry.at("id").get<std::string>();
    r.attribute_path = entry.at("attribute_path").get<std::string>();
    std::string klass = entry.at("class").get<std::string>();
    if (klass == "virtual") {
      r.klass = Layer::Virtual;
      r.shared_capacity = kUnbounded;
      r.load_weight = 1.0;
    } else if (klass == "substrate") {
      r.klass = Layer::Substrate;
    } else {
      throw Error("resource class must be 'virtual' or 'substrate'");
    }
    if (entry.contains("shared_capacity")) {
      r.shared_capacity = parse_capacity(entry.at("shared_capacity"));
    }
    if (entry.contains("load_weight")) r.load_weight = entry.at("load_weight").get<double>();
    if (entry.contains("min_alloc")) r.min_alloc = entry.at("min_alloc").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

json resources_to_json(const std::vector<ResourceType>& resources) {
  json out = json::array();
  for (const auto& r : resources) {
    json entry;
    entry["id"] = r.id;
    entry["attribute_path"] = r.attribute_path;
    entry["class"] = r.klass == Layer::Virtual ? "virtual" : "substrate";
    if (r.klass == Layer::Substrate) {
      entry["shared_capacity"] = capacity_to_json(r.shared_capacity);
      entry["load_weight"] = r.load_weight;
    } else if (r.min_alloc != 0) {
      entry["min_alloc"] = r.min_alloc;
    }
    out.push_back(entry);
  }
  return out;
}

SubstrateGraph parse_substrate(const json& section) {
  SubstrateGraph graph;
  if (section.contains("nodes")) {
    for (const auto& doc : section.at("nodes")) {
      graph.elements.push_back(parse_element(doc, ElementKind::Node, Layer::Substrate));
    }
  }
  if (section.contains("links")) {
    for (const auto& doc : section.at("links")) {
      graph.elements.push_back(parse_element(doc, ElementKind::Link, Layer::Substrate));
    }
  }
  if (section.contains("interface_capacities")) {
    for (const auto& entry : section.at("interface_capacities")) {
      std::string rs = entry.at("resource").get<std::string>();
      double cap = entry.at("capacity").get<double>();
      if (entry.contains("between")) {
        auto pair = entry.at("between").get<std::vector<std::string>>();
        if (pair.size() != 2) throw Error("'between' needs exactly two element ids");
        graph.interface_capacities[{pair[0], pair[1], rs}] = cap;
        graph.interface_capacities[{pair[1], pair[0], rs}] = cap;
      } else {
        graph.interface_capacities[{entry.at("from").get<std::string>(),
                                    entry.at("to").get<std::string>(), rs}] = cap;
      }
    }
  }
  return graph;
}

json substrate_to_json(const SubstrateGraph& substrate) {
  json nodes = json::array(), links = json::array();
  for (const auto& element : substrate.elements) {
    (element.is_node() ? nodes : links).push_back(element_to_json(element));
  }
  json caps = json::array();
  for (const auto& [key, cap] : substrate.interface_capacities) {
    caps.push_back({{"from", std::get<0>(key)},
                    {"to", std::get<1>(key)},
                    {"resource", std::get<2>(key)},
                    {"capacity", cap}});
  }
  return {{"nodes", nodes}, {"links", links}, {"interface_capacities", caps}};
}

engine::Request parse_request(const json& request_section, const json* policies_section,
                              const std::vector<std::string>& substrate_ids) {
  engine::Request request;
  if (request_section.contains("id")) {
    request.id = request_section.at("id").get<std::string>();
  }
  if (request_section.contains("nodes")) {
    for (const auto& doc : request_section.at("nodes")) {
      request.elements.push_back(parse_element(doc, ElementKind::Node, Layer::Virtual));
    }
  }
  if (request_section.contains("links")) {
    for (const auto& doc : request_section.at("links")) {
      NetworkElement link = parse_element(doc, ElementKind::Link, Layer::Virtual);
      if (doc.contains("flows")) {
        std::vector<Flow> flows;
        for (const auto& pair : doc.at("flows")) {
          auto p = pair.get<std::vector<std::string>>();
          if (p.size() != 2) throw Error("flow entries need [source, sink]");
          flows.push_back({link.id, p[0], p[1]});
        }
        request.flow_overrides[link.id] = std::move(flows);
      }
      request.elements.push_back(std::move(link));
    }
  }
  if (policies_section && !policies_section->is_null()) {
    const json& policies = *policies_section;
    if (policies.contains("suit")) {
      for (const auto& entry : policies.at("suit")) {
        std::string u = entry.at("element").get<std::string>();
        if (entry.contains("allowed")) {
          request.policies.restrict(
              u, entry.at("allowed").get<std::vector<std::string>>(), substrate_ids);
        } else {
          request.policies.suit[{u, entry.at("target").get<std::string>()}] =
              entry.at("value").get<int>();
        }
      }
    }
    if (policies.contains("weight")) {
      for (const auto& entry : policies.at("weight")) {
        request.policies.weight[{entry.at("element").get<std::string>(),
                                 entry.at("target").get<std::string>()}] =
            entry.at("value").get<double>();
      }
    }
  }
  return request;
}

json request_to_json(const engine::Request& request) {
  json nodes = json::array(), links = json::array();
  for (const auto& element : request.elements) {
    json doc = element_to_json(element);
    if (element.is_link()) {
      auto it = request.flow_overrides.find(element.id);
      if (it != request.flow_overrides.end()) {
        json flows = json::array();
        for (const auto& f : it->second) flows.push_back({f.source, f.sink});
        doc["flows"] = flows;
      }
      links.push_back(doc);
    } else {
      nodes.push_back(doc);
    }
  }
  json out{{"id", request.id}, {"nodes", nodes}, {"links", links}};
  json suit = json::array(), weight = json::array();
  for (const auto& [key, value] : request.policies.suit) {
    suit.push_back({{"element", key.first}, {"target", key.second}, {"value", value}});
  }
  for (const auto& [key, value] : request.policies.weight) {
    weight.push_back({{"element", key.first}, {"target", key.second}, {"value", value}});
  }
  out["policies"] = {{"suit", suit}, {"weight", weight}};
  return out;
}

MigrationContext parse_migration(const json& section) {
  MigrationContext migration;
  if (section.contains("old")) {
    for (const auto& entry : section.at("old")) {
      migration.old_mapping[{entry.at("element").get<std::string>(),
                             entry.at("location").get<std::string>()}] = 1;
    }
  }
  if (section.contains("penalty")) {
    for (const auto& entry : section.at("penalty")) {
      migration.penalty[entry.at("element").get<std::string>()] =
          entry.at("value").get<double>();
    }
  }
  if (section.contains("transit")) {
    for (const auto& entry : section.at("transit")) {
      migration.transit[{entry.at("element").get<std::string>(),
                         entry.at("target").get<std::string>()}] =
          entry.at("value").get<double>();
    }
  }
  return migration;
}

ObjectiveConfig parse_objective(const json& section) {
  ObjectiveConfig config;
  std::string kind = section.value("kind", "resource_min");
  if (kind == "resource_min") {
    config.kind = ObjectiveKind::ResourceMin;
  } else if (kind == "load_balance") {
    config.kind = ObjectiveKind::LoadBalance;
  } else {
    throw Error("objective kind must be 'resource_min' or 'load_balance'");
  }
  if (section.contains("c")) config.c = section.at("c").get<double>();
  return config;
}

json objective_to_json(const ObjectiveConfig& objective) {
  json out;
  out["kind"] =
      objective.kind == ObjectiveKind::ResourceMin ? "resource_min" : "load_balance";
  if (objective.c >= 0) out["c"] = objective.c;
  return out;
}

EmbeddingProblem parse_problem(const json& doc) {
  EmbeddingProblem problem;
  problem.resources = parse_resources(doc.at("resources"));
  problem.substrate = parse_substrate(doc.at("substrate"));
  std::vector<std::string> substrate_ids;
  for (const auto& element : problem.substrate.elements) {
    substrate_ids.push_back(element.id);
  }
  const json* policies = doc.contains("policies") ? &doc.at("policies") : nullptr;
  engine::Request request = parse_request(doc.at("request"), policies, substrate_ids);
  problem.request_id = request.id;
  problem.request = std::move(request.elements);
  problem.policies = std::move(request.policies);
  problem.flows = std::move(request.flow_overrides);
  if (doc.contains("migration")) {
    problem.migration = parse_migration(doc.at("migration"));
  }
  if (doc.contains("prop")) {
    for (const auto& entry : doc.at("prop")) {
      problem.substrate.prop[{entry.at("virtual").get<std::string>(),
                              entry.at("substrate").get<std::string>()}] =
          entry.at("factor").get<double>();
    }
  }
  if (doc.contains("objective")) {
    problem.objective = parse_objective(doc.at("objective"));
  }
  finalize_problem(problem);
  return problem;
}

json problem_to_json(const EmbeddingProblem& problem) {
  json out;
  out["resources"] = resources_to_json(problem.resources);
  out["substrate"] = substrate_to_json(problem.substrate);
  engine::Request request;
  request.id = problem.request_id;
  request.elements = problem.request;
  request.policies = problem.policies;
  request.flow_overrides = problem.flows;
  json request_doc = request_to_json(request);
  out["policies"] = request_doc.at("policies");
  request_doc.erase("policies");
  out["request"] = request_doc;
  json old_entries = json::array(), penalties = json::array(), transits = json::array();
  for (const auto& [key, value] : problem.migration.old_mapping) {
    if (value == 1) {
      old_entries.push_back({{"element", key.first}, {"location", key.second}});
    }
  }
  for (const auto& [u, p] : problem.migration.penalty) {
    penalties.push_back({{"element", u}, {"value", p}});
  }
  for (const auto& [key, t] : problem.migration.transit) {
    transits.push_back({{"element", key.first}, {"target", key.second}, {"value", t}});
  }
  out["migration"] = {{"old", old_entries}, {"penalty", penalties}, {"transit", transits}};
  json prop = json::array();
  for (const auto& [key, factor] : problem.substrate.prop) {
    prop.push_back(
        {{"virtual", key.first}, {"substrate", key.second}, {"factor", factor}});
  }
  out["prop"] = prop;
  out["objective"] = objective_to_json(problem.objective);
  return out;
}

engine::SubstrateState parse_state(const json& doc) {
  SubstrateGraph graph = parse_substrate(doc.at("substrate"));
  if (doc.contains("prop")) {
    for (const auto& entry : doc.at("prop")) {
      graph.prop[{entry.at("virtual").get<std::string>(),
                  entry.at("substrate").get<std::string>()}] =
          entry.at("factor").get<double>();
    }
  }
  engine::SubstrateState state(parse_resources(doc.at("resources")), std::move(graph));
  if (doc.contains("committed")) {
    std::vector<std::string> substrate_ids;
    for (const auto& element : state.substrate().elements) {
      substrate_ids.push_back(element.id);
    }
    for (const auto& entry : doc.at("committed")) {
      const json& request_doc = entry.at("request");
      const json* policies =
          request_doc.contains("policies") ? &request_doc.at("policies") : nullptr;
      engine::Request request = parse_request(request_doc, policies, substrate_ids);
      engine::Embedding embedding = parse_embedding(entry.at("embedding"));
      state.commit(request, embedding);
    }
  }
  return state;
}

json state_to_json(const engine::SubstrateState& state) {
  json out;
  out["resources"] = resources_to_json(state.resources());
  out["substrate"] = substrate_to_json(state.substrate());
  json prop = json::array();
  for (const auto& [key, factor] : state.substrate().prop) {
    prop.push_back(
        {{"virtual", key.first}, {"substrate", key.second}, {"factor", factor}});
  }
  out["prop"] = prop;
  json committed = json::array();
  for (const auto& [id, entry] : state.committed()) {
    (void)id;
    committed.push_back({{"request", request_to_json(entry.request)},
                         {"embedding", embedding_to_json(entry.embedding)}});
  }
  out["committed"] = committed;
  return out;
}

engine::Embedding parse_embedding(const json& doc) {
  engine::Embedding embedding;
  embedding.request_id = doc.at("request_id").get<std::string>();
  for (const auto& entry : doc.at("mapping")) {
    embedding.mapping[entry.at("element").get<std::string>()] =
        entry.at("hosts").get<std::vector<std::string>>();
  }
  for (auto& [u, hosts] : embedding.mapping) {
    (void)u;
    std::sort(hosts.begin(), hosts.end());
  }
  if (doc.contains("allocations")) {
    for (const auto& entry : doc.at("allocations")) {
      embedding.allocations[{entry.at("element").get<std::string>(),
                             entry.at("host").get<std::string>(),
                             entry.at("virtual_resource").get<std::string>(),
                             entry.at("substrate_resource").get<std::string>()}] =
          entry.at("amount").get<double>();
    }
  }
  if (doc.contains("flow_allocations")) {
    for (const auto& entry : doc.at("flow_allocations")) {
      Flow flow{entry.at("link").get<std::string>(),
                entry.at("source").get<std::string>(),
                entry.at("sink").get<std::string>()};
      embedding.flow_allocations[{flow, entry.at("from").get<std::string>(),
                                  entry.at("to").get<std::string>(),
                                  entry.at("virtual_resource").get<std::string>(),
                                  entry.at("substrate_resource").get<std::string>()}] =
          entry.at("amount").get<double>();
    }
  }
  if (doc.contains("migrations")) {
    for (const auto& u : doc.at("migrations")) {
      embedding.migrations.insert(u.get<std::string>());
    }
  }
  embedding.objective = doc.value("objective", 0.0);
  embedding.migration_cost = doc.value("migration_cost", 0.0);
  return embedding;
}

json embedding_to_json(const engine::Embedding& embedding) {
  json out;
  out["request_id"] = embedding.request_id;
  json mapping = json::array();
  for (const auto& [u, hosts] : embedding.mapping) {
    mapping.push_back({{"element", u}, {"hosts", hosts}});
  }
  out["mapping"] = mapping;
  json allocations = json::array();
  for (const auto& [key, amount] : embedding.allocations) {
    allocations.push_back({{"element", key.u},
                           {"host", key.v},
                           {"virtual_resource", key.rv},
                           {"substrate_resource", key.rs},
                           {"amount", amount}});
  }
  out["allocations"] = allocations;
  json flows = json::array();
  for (const auto& [key, amount] : embedding.flow_allocations) {
    flows.push_back({{"link", key.flow.link},
                     {"source", key.flow.source},
                     {"sink", key.flow.sink},
                     {"from", key.v},
                     {"to", key.w},
                     {"virtual_resource", key.rv},
                     {"substrate_resource", key.rs},
                     {"amount", amount}});
  }
  out["flow_allocations"] = flows;
  out["migrations"] = json(embedding.migrations);
  out["objective"] = embedding.objective;
  out["migration_cost"] = embedding.migration_cost;
  out["solver"] = {{"status", milp::to_string(embedding.solver_status)},
                   {"nodes", embedding.solver_stats.nodes},
                   {"lp_iterations", embedding.solver_stats.lp_iterations},
                   {"wall_seconds", embedding.solver_stats.wall_seconds}};
  return out;
}

json rejection_to_json(const engine::Rejection& rejection) {
  return {{"rejected", true},
          {"status", milp::to_string(rejection.status)},
          {"note", rejection.note},
          {"infeasible_families", rejection.infeasible_families}};
}

json plan_to_json(const engine::ReembedPlan& plan) {
  json entries = json::array();
  for (const auto& entry : plan.entries) {
    entries.push_back({{"request_id", entry.request_id},
                       {"migrate", entry.migrate},
                       {"feasible", entry.feasible},
                       {"status_quo_objective", entry.status_quo_objective},
                       {"proposed_objective", entry.proposed.objective},
                       {"improvement", entry.improvement},
                       {"migration_cost", entry.migration_cost},
                       {"proposed", embedding_to_json(entry.proposed)}});
  }
  return {{"entries", entries},
          {"total_improvement", plan.total_improvement},
          {"total_migration_cost", plan.total_migration_cost}};
}

json whatif_to_json(const engine::WhatIfResult& result) {
  return {{"feasible", result.feasible},
          {"migration_cost", result.migration_cost},
          {"objective", result.objective},
          {"rejected_requests", result.rejected_requests}};
}

json check_report_to_json(const engine::CheckReport& report) {
  json issues = json::array();
  for (const auto& issue : report.issues) {
    issues.push_back(
        {{"code", issue.code}, {"subject", issue.subject}, {"message", issue.message}});
  }
  return {{"clean", report.clean()}, {"issues", issues}};
}

json validation_report_to_json(const ValidationReport& report) {
  json issues = json::array();
  for (const auto& issue : report.issues) {
    issues.push_back(
        {{"code", issue.code}, {"subject", issue.subject}, {"message", issue.message}});
  }
  return {{"clean", report.clean()}, {"issues", issues}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw Error("JSON parse error in '" + path + "': " + err.what());
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace vne::json_io
