#include "support/fixtures.hpp"

#include <algorithm>

namespace vne::testing {

std::vector<ResourceType> basic_resources(double min_alloc_bw, double shared_slots,
                                          double shared_bw) {
  ResourceType slots_v{"slots_v", "/node/slots", Layer::Virtual, kUnbounded, 1.0, 0.0};
  ResourceType bw_v{"bw_v", "/link/symmetric/bandwidth", Layer::Virtual, kUnbounded,
                    1.0, min_alloc_bw};
  ResourceType slots{"slots", "/node/slots", Layer::Substrate, shared_slots, 1.0, 0.0};
  ResourceType bw{"bw", "/link/symmetric/bandwidth", Layer::Substrate, shared_bw, 1.0,
                  0.0};
  return {slots_v, bw_v, slots, bw};
}

SubstrateBuilder& SubstrateBuilder::node(const std::string& id, double slots,
                                         double bw) {
  NetworkElement element;
  element.id = id;
  element.kind = ElementKind::Node;
  element.layer = Layer::Substrate;
  element.capacities["slots"] = slots;
  if (bw > 0) element.capacities["bw"] = bw;
  graph_.elements.push_back(std::move(element));
  return *this;
}

SubstrateBuilder& SubstrateBuilder::link(const std::string& a, const std::string& b,
                                         double bw) {
  NetworkElement element;
  element.id = a + "--" + b;
  element.kind = ElementKind::Link;
  element.layer = Layer::Substrate;
  element.endpoints = {a, b};
  element.capacities["bw"] = bw;
  graph_.interface_capacities[{a, element.id, "bw"}] = bw;
  graph_.interface_capacities[{element.id, a, "bw"}] = bw;
  graph_.interface_capacities[{b, element.id, "bw"}] = bw;
  graph_.interface_capacities[{element.id, b, "bw"}] = bw;
  graph_.elements.push_back(std::move(element));
  return *this;
}

SubstrateBuilder& SubstrateBuilder::interface_cap(const std::string& from,
                                                  const std::string& to,
                                                  const std::string& resource,
                                                  double cap) {
  graph_.interface_capacities[{from, to, resource}] = cap;
  return *this;
}

SubstrateGraph SubstrateBuilder::build() const {
  SubstrateGraph out = graph_;
  if (out.prop.empty()) {
    out.prop[{"slots_v", "slots"}] = 1.0;
    out.prop[{"bw_v", "bw"}] = 1.0;
  }
  return out;
}

NetworkElement virtual_node(const std::string& id, double slots, ValueType vt) {
  NetworkElement element;
  element.id = id;
  element.kind = ElementKind::Node;
  element.layer = Layer::Virtual;
  element.requests[{"slots_v", vt}] = slots;
  return element;
}

NetworkElement virtual_link(const std::string& id,
                            const std::vector<std::string>& endpoints, double bw,
                            ValueType vt) {
  NetworkElement element;
  element.id = id;
  element.kind = ElementKind::Link;
  element.layer = Layer::Virtual;
  element.endpoints = endpoints;
  element.requests[{"bw_v", vt}] = bw;
  return element;
}

EmbeddingProblem make_problem(std::vector<ResourceType> resources,
                              SubstrateGraph substrate,
                              std::vector<NetworkElement> request,
                              PolicyMatrices policies, MigrationContext migration,
                              ObjectiveConfig objective) {
  EmbeddingProblem problem;
  problem.resources = std::move(resources);
  problem.substrate = std::move(substrate);
  if (problem.substrate.prop.empty()) {
    problem.substrate.prop[{"slots_v", "slots"}] = 1.0;
    problem.substrate.prop[{"bw_v", "bw"}] = 1.0;
  }
  problem.request = std::move(request);
  problem.policies = std::move(policies);
  problem.migration = std::move(migration);
  problem.objective = objective;
  finalize_problem(problem);
  return problem;
}

SubstrateGraph path_substrate(int nodes, double slots, double bw) {
  SubstrateBuilder builder;
  for (int i = 0; i < nodes; ++i) {
    builder.node("s" + std::to_string(i), slots, bw);
  }
  for (int i = 0; i + 1 < nodes; ++i) {
    builder.link("s" + std::to_string(i), "s" + std::to_string(i + 1), bw);
  }
  return builder.build();
}

SubstrateGraph triangle_substrate(double slots, double bw) {
  SubstrateBuilder builder;
  builder.node("sA", slots, bw).node("sB", slots, bw).node("sC", slots, bw);
  builder.link("sA", "sB", bw).link("sB", "sC", bw).link("sA", "sC", bw);
  return builder.build();
}

std::vector<std::string> substrate_ids(const SubstrateGraph& graph) {
  std::vector<std::string> out;
  for (const auto& element : graph.elements) out.push_back(element.id);
  return out;
}

EmbeddingProblem random_instance(Rng& rng, const CorpusOptions& options) {
  // Substrate: random connected node set (tree plus an occasional chord).
  int n_s = static_cast<int>(
      rng.range(options.min_substrate_nodes, options.max_substrate_nodes));
  SubstrateBuilder builder;
  std::vector<std::string> nodes;
  for (int i = 0; i < n_s; ++i) {
    std::string id = "s" + std::to_string(i);
    builder.node(id, static_cast<double>(rng.range(2, 5)),
                 static_cast<double>(rng.range(2, 6)));
    nodes.push_back(id);
  }
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < n_s; ++i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    edges.insert({j, i});
  }
  if (n_s >= 3 && rng.real01() < 0.5) {
    int a = static_cast<int>(rng.below(n_s));
    int b = static_cast<int>(rng.below(n_s));
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  }
  for (const auto& [a, b] : edges) {
    builder.link(nodes[a], nodes[b], static_cast<double>(rng.range(2, 6)));
  }
  SubstrateGraph substrate = builder.build();

  // Request: 1..max virtual nodes, links among them.
  int n_v = static_cast<int>(rng.range(1, options.max_virtual_nodes));
  bool broadcast = options.force_broadcast && n_v >= 3;
  std::vector<NetworkElement> request;
  std::vector<std::string> vnode_ids;
  for (int i = 0; i < n_v; ++i) {
    std::string id = "u" + std::to_string(i);
    ValueType vt = rng.real01() < 0.7 ? ValueType::Constant : ValueType::Minimum;
    request.push_back(virtual_node(id, static_cast<double>(rng.range(1, 2)), vt));
    vnode_ids.push_back(id);
  }
  int n_l = n_v >= 2 ? static_cast<int>(rng.range(0, options.max_virtual_links)) : 0;
  if (broadcast) n_l = std::max(1, n_l);
  std::set<std::pair<int, int>> used_pairs;
  for (int i = 0; i < n_l; ++i) {
    std::string id = "e" + std::to_string(i);
    double demand = static_cast<double>(rng.range(1, 2));
    if (broadcast && i == 0) {
      request.push_back(virtual_link(id, {vnode_ids[0], vnode_ids[1], vnode_ids[2]},
                                     demand));
      continue;
    }
    int a = static_cast<int>(rng.below(n_v));
    int b = static_cast<int>(rng.below(n_v));
    if (a == b) continue;
    if (!used_pairs.insert({std::min(a, b), std::max(a, b)}).second) continue;
    ValueType vt = rng.real01() < 0.8 ? ValueType::Constant : ValueType::Minimum;
    request.push_back(virtual_link(id, {vnode_ids[a], vnode_ids[b]}, demand, vt));
  }

  // Node suitability: random nonempty subsets of substrate nodes; weights in
  // [0.2, 1] so placement cost varies.
  PolicyMatrices policies;
  std::vector<std::string> all_ids = substrate_ids(substrate);
  for (const auto& u : vnode_ids) {
    std::vector<std::string> hosts;
    for (const auto& v : nodes) {
      if (rng.real01() < 0.7) hosts.push_back(v);
    }
    if (hosts.empty()) hosts.push_back(nodes[rng.below(nodes.size())]);
    policies.restrict(u, hosts, all_ids);
    for (const auto& v : hosts) {
      policies.weight[{u, v}] = 0.2 + 0.8 * rng.real01();
    }
  }

  double min_alloc_bw = rng.real01() < 0.5 ? 0.0 : 0.5;
  ObjectiveConfig objective{ObjectiveKind::ResourceMin, -1.0};
  double shared_slots = kUnbounded, shared_bw = kUnbounded;
  if (options.allow_load_balance && rng.real01() < 0.25) {
    objective.kind = ObjectiveKind::LoadBalance;
    shared_slots = 0;
    shared_bw = 0;
    for (const auto& element : substrate.elements) {
      auto slots = element.capacities.find("slots");
      if (slots != element.capacities.end()) shared_slots += slots->second;
      auto bw = element.capacities.find("bw");
      if (bw != element.capacities.end()) shared_bw += bw->second;
    }
  }
  return make_problem(basic_resources(min_alloc_bw, shared_slots, shared_bw),
                      std::move(substrate), std::move(request), std::move(policies),
                      MigrationContext{}, objective);
}

}  // namespace vne::testing
