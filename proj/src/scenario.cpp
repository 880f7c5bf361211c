#include "vne/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "vne/json_io.hpp"

namespace vne::scenario {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::VPN: return "vpn";
    case ScenarioKind::OC: return "oc";
    case ScenarioKind::DC: return "dc";
  }
  return "?";
}

ScenarioKind scenario_from_string(const std::string& s) {
  if (s == "vpn") return ScenarioKind::VPN;
  if (s == "oc") return ScenarioKind::OC;
  if (s == "dc") return ScenarioKind::DC;
  throw Error("unknown scenario '" + s + "' (expected vpn, oc, or dc)");
}

double ScenarioConfig::effective_freedom() const {
  if (scenario == ScenarioKind::VPN) return 0.0;
  if (scenario == ScenarioKind::DC) return 1.0;
  return freedom;
}

ScenarioConfig parse_config(const nlohmann::json& doc) {
  ScenarioConfig config;
  if (doc.contains("scenario")) {
    config.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
  }
  if (doc.contains("freedom")) config.freedom = doc.at("freedom").get<double>();
  auto range = [&](const char* key, std::pair<int, int>& out) {
    if (doc.contains(key)) {
      auto v = doc.at(key).get<std::vector<int>>();
      if (v.size() != 2 || v[0] < 0 || v[1] < v[0]) {
        throw Error(std::string("config: ") + key + " must be [lo, hi]");
      }
      out = {v[0], v[1]};
    }
  };
  range("cr_range", config.cr_range);
  range("ap_range", config.ap_range);
  if (doc.contains("substrate_size")) config.substrate_size = doc.at("substrate_size").get<int>();
  if (doc.contains("element_capacity_slots")) {
    config.element_capacity_slots = doc.at("element_capacity_slots").get<double>();
  }
  if (doc.contains("interface_bandwidth")) {
    config.interface_bandwidth = doc.at("interface_bandwidth").get<double>();
  }
  if (doc.contains("node_bandwidth")) config.node_bandwidth = doc.at("node_bandwidth").get<double>();
  if (doc.contains("node_slot_demand")) config.node_slot_demand = doc.at("node_slot_demand").get<double>();
  if (doc.contains("link_bandwidth_demand")) {
    config.link_bandwidth_demand = doc.at("link_bandwidth_demand").get<double>();
  }
  if (doc.contains("repetitions")) config.repetitions = doc.at("repetitions").get<int>();
  if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("migration")) config.migration = doc.at("migration").get<bool>();
  if (doc.contains("request_budget")) config.request_budget = doc.at("request_budget").get<int>();
  if (doc.contains("objective")) config.objective = json_io::parse_objective(doc.at("objective"));
  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    if (s.contains("deterministic")) config.solver.deterministic = s.at("deterministic").get<bool>();
    if (s.contains("workers")) config.solver.workers = s.at("workers").get<int>();
    if (s.contains("time_limit")) config.solver.time_limit_seconds = s.at("time_limit").get<double>();
    if (s.contains("mip_gap")) config.solver.mip_gap = s.at("mip_gap").get<double>();
    if (s.contains("feasibility_only")) config.solver.feasibility_only = s.at("feasibility_only").get<bool>();
  }
  if (doc.contains("topology_file")) config.topology_file = doc.at("topology_file").get<std::string>();
  if (doc.contains("topology")) {
    for (const auto& edge : doc.at("topology").at("edges")) {
      auto pair = edge.get<std::vector<std::string>>();
      if (pair.size() != 2) throw Error("config: topology edges need two node ids");
      config.topology_edges.emplace_back(pair[0], pair[1]);
    }
  }
  if (config.scenario == ScenarioKind::VPN && config.freedom > 0) {
    throw Error("config: the VPN scenario requires freedom = 0");
  }
  if (config.scenario == ScenarioKind::DC && config.freedom >= 0 && config.freedom < 1) {
    throw Error("config: the DC scenario requires freedom = 1");
  }
  return config;
}

TopologyDoc parse_topology(const std::string& text) {
  TopologyDoc doc;
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string token;
    while (ls >> token) tokens.push_back(token);
    if (tokens.empty()) continue;
    if (tokens[0] == "node") {
      if (tokens.size() < 2 || tokens.size() > 3) {
        throw Error("topology line " + std::to_string(line_no) + ": expected 'node <id> [slots]'");
      }
      nodes.insert(tokens[1]);
      if (tokens.size() == 3) {
        try {
          doc.node_slots[tokens[1]] = std::stod(tokens[2]);
        } catch (const std::exception&) {
          throw Error("topology line " + std::to_string(line_no) + ": bad slot count");
        }
      }
      continue;
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw Error("topology line " + std::to_string(line_no) +
                  ": expected '<nodeA> <nodeB> [bandwidth]'");
    }
    if (tokens[0] == tokens[1]) {
      throw Error("topology line " + std::to_string(line_no) + ": self-loop edge");
    }
    auto edge = tokens[0] < tokens[1] ? std::make_pair(tokens[0], tokens[1])
                                      : std::make_pair(tokens[1], tokens[0]);
    nodes.insert(edge.first);
    nodes.insert(edge.second);
    if (!edges.insert(edge).second) {
      doc.warnings.push_back("duplicate edge " + edge.first + " " + edge.second +
                             " at line " + std::to_string(line_no) + " (deduplicated)");
    }
    if (tokens.size() == 3) {
      try {
        doc.edge_bandwidth[edge] = std::stod(tokens[2]);
      } catch (const std::exception&) {
        throw Error("topology line " + std::to_string(line_no) + ": bad bandwidth");
      }
    }
  }
  doc.nodes.assign(nodes.begin(), nodes.end());
  doc.edges.assign(edges.begin(), edges.end());

  // Connectivity warning (accepted).
  if (!doc.nodes.empty()) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [a, b] : doc.edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::set<std::string> seen{doc.nodes.front()};
    std::vector<std::string> queue{doc.nodes.front()};
    while (!queue.empty()) {
      std::string v = queue.back();
      queue.pop_back();
      for (const auto& w : adj[v]) {
        if (seen.insert(w).second) queue.push_back(w);
      }
    }
    if (seen.size() != doc.nodes.size()) {
      doc.warnings.push_back("topology is disconnected (" +
                             std::to_string(seen.size()) + " of " +
                             std::to_string(doc.nodes.size()) + " nodes reachable)");
    }
  }
  return doc;
}

TopologyDoc subset_topology(const TopologyDoc& doc, int size, Rng& rng) {
  if (size <= 0 || static_cast<std::size_t>(size) > doc.nodes.size()) {
    throw Error("subset size " + std::to_string(size) + " out of range");
  }
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : doc.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& [v, neighbors] : adj) {
    (void)v;
    std::sort(neighbors.begin(), neighbors.end());
  }

  const int retries = 64;
  for (int attempt = 0; attempt < retries; ++attempt) {
    std::set<std::string> chosen;
    std::string current = doc.nodes[rng.below(doc.nodes.size())];
    chosen.insert(current);
    long steps = 0;
    long step_cap = 200L * size + 200;
    while (static_cast<int>(chosen.size()) < size && steps++ < step_cap) {
      const auto& neighbors = adj[current];
      if (neighbors.empty()) break;
      current = neighbors[rng.below(neighbors.size())];
      chosen.insert(current);
    }
    if (static_cast<int>(chosen.size()) != size) continue;

    TopologyDoc out;
    out.nodes.assign(chosen.begin(), chosen.end());
    for (const auto& edge : doc.edges) {
      if (chosen.count(edge.first) && chosen.count(edge.second)) {
        out.edges.push_back(edge);
        auto bw = doc.edge_bandwidth.find(edge);
        if (bw != doc.edge_bandwidth.end()) out.edge_bandwidth[edge] = bw->second;
      }
    }
    for (const auto& node : out.nodes) {
      auto slots = doc.node_slots.find(node);
      if (slots != doc.node_slots.end()) out.node_slots[node] = slots->second;
    }
    return out;
  }
  throw Error("could not extract a connected subset of size " + std::to_string(size));
}

std::vector<ResourceType> default_resources(const ScenarioConfig& config) {
  (void)config;
  ResourceType slots_v{"slots_v", "/node/slots", Layer::Virtual, kUnbounded, 1.0, 0.0};
  ResourceType bw_v{"bw_v", "/link/symmetric/bandwidth", Layer::Virtual, kUnbounded, 1.0, 0.0};
  ResourceType slots{"slots", "/node/slots", Layer::Substrate, kUnbounded, 1.0, 0.0};
  ResourceType bw{"bw", "/link/symmetric/bandwidth", Layer::Substrate, kUnbounded, 1.0, 0.0};
  return {slots_v, bw_v, slots, bw};
}

SubstrateGraph build_substrate(const TopologyDoc& doc, const ScenarioConfig& config) {
  SubstrateGraph graph;
  double total_slots = 0, total_bw = 0;
  for (const auto& node : doc.nodes) {
    NetworkElement element;
    element.id = node;
    element.kind = ElementKind::Node;
    element.layer = Layer::Substrate;
    auto slots = doc.node_slots.find(node);
    double capacity = slots != doc.node_slots.end() ? slots->second
                                                    : config.element_capacity_slots;
    element.capacities["slots"] = capacity;
    element.capacities["bw"] = config.node_bandwidth;
    total_slots += capacity;
    total_bw += config.node_bandwidth;
    graph.elements.push_back(std::move(element));
  }
  for (const auto& edge : doc.edges) {
    NetworkElement element;
    element.id = edge.first + "--" + edge.second;
    element.kind = ElementKind::Link;
    element.layer = Layer::Substrate;
    element.endpoints = {edge.first, edge.second};
    auto bw = doc.edge_bandwidth.find(edge);
    double capacity = bw != doc.edge_bandwidth.end() ? bw->second
                                                     : config.interface_bandwidth;
    element.capacities["bw"] = capacity;
    total_bw += capacity;
    for (const auto& endpoint : element.endpoints) {
      graph.interface_capacities[{endpoint, element.id, "bw"}] = capacity;
      graph.interface_capacities[{element.id, endpoint, "bw"}] = capacity;
    }
    graph.elements.push_back(std::move(element));
  }
  graph.prop[{"slots_v", "slots"}] = 1.0;
  graph.prop[{"bw_v", "bw"}] = 1.0;
  (void)total_slots;
  (void)total_bw;
  return graph;
}

engine::SubstrateState load_topology(const std::string& text,
                                     const ScenarioConfig& config,
                                     std::vector<std::string>* warnings) {
  TopologyDoc doc = parse_topology(text);
  if (warnings) *warnings = doc.warnings;
  if (config.substrate_size > 0 &&
      static_cast<std::size_t>(config.substrate_size) < doc.nodes.size()) {
    Rng rng(config.seed * 0x9e3779b9ULL + 17);
    doc = subset_topology(doc, config.substrate_size, rng);
  }
  std::vector<ResourceType> resources = default_resources(config);
  SubstrateGraph graph = build_substrate(doc, config);

  // The shared capacity of each substrate resource defaults to the total
  // over all elements, which makes the load-balancing objective meaningful.
  double total_slots = 0, total_bw = 0;
  for (const auto& element : graph.elements) {
    auto slots = element.capacities.find("slots");
    if (slots != element.capacities.end()) total_slots += slots->second;
    auto bw = element.capacities.find("bw");
    if (bw != element.capacities.end()) total_bw += bw->second;
  }
  for (auto& r : resources) {
    if (r.id == "slots") r.shared_capacity = total_slots;
    if (r.id == "bw") r.shared_capacity = total_bw;
  }
  return engine::SubstrateState(std::move(resources), std::move(graph));
}

GeneratedRequest generate_request(const ScenarioConfig& config,
                                  const engine::SubstrateState& state, Rng& rng,
                                  int request_index) {
  std::vector<std::string> substrate_nodes;
  std::vector<std::string> substrate_ids;
  for (const auto& element : state.substrate().elements) {
    substrate_ids.push_back(element.id);
    if (element.is_node()) substrate_nodes.push_back(element.id);
  }

  int cr = static_cast<int>(rng.range(config.cr_range.first, config.cr_range.second));
  int ap = static_cast<int>(rng.range(config.ap_range.first, config.ap_range.second));
  int total = std::max(1, cr + ap);
  if (static_cast<std::size_t>(total) > substrate_nodes.size()) {
    throw Error("generate_request: request size " + std::to_string(total) +
                " exceeds substrate node count " +
                std::to_string(substrate_nodes.size()));
  }

  double freedom = config.effective_freedom();
  int flexible = freedom >= 0 ? static_cast<int>(std::lround(freedom * total))
                              : std::min(cr, total);
  flexible = std::min(flexible, total);

  // Sample the request topology as a connected substrate subgraph.
  TopologyDoc substrate_doc;
  substrate_doc.nodes = substrate_nodes;
  for (const auto& element : state.substrate().elements) {
    if (element.is_link() && element.endpoints.size() == 2) {
      auto edge = element.endpoints[0] < element.endpoints[1]
                      ? std::make_pair(element.endpoints[0], element.endpoints[1])
                      : std::make_pair(element.endpoints[1], element.endpoints[0]);
      substrate_doc.edges.push_back(edge);
    }
  }
  std::sort(substrate_doc.edges.begin(), substrate_doc.edges.end());
  substrate_doc.edges.erase(
      std::unique(substrate_doc.edges.begin(), substrate_doc.edges.end()),
      substrate_doc.edges.end());
  TopologyDoc sampled = subset_topology(substrate_doc, total, rng);

  GeneratedRequest out;
  out.cr_count = flexible;
  out.ap_count = total - flexible;
  engine::Request& request = out.request;
  request.id = "r" + std::to_string(request_index);

  // Deterministic flexible-set selection: shuffle sampled nodes.
  std::vector<std::string> order = sampled.nodes;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  std::set<std::string> flexible_set(order.begin(), order.begin() + flexible);

  std::map<std::string, std::string> virtual_of;
  int node_counter = 0;
  for (const auto& substrate_node : sampled.nodes) {
    NetworkElement node;
    node.id = request.id + "_n" + std::to_string(node_counter++);
    node.kind = ElementKind::Node;
    node.layer = Layer::Virtual;
    node.requests[{"slots_v", ValueType::Constant}] = config.node_slot_demand;
    virtual_of[substrate_node] = node.id;
    out.origin[node.id] = substrate_node;
    if (!flexible_set.count(substrate_node)) {
      request.policies.restrict(node.id, {substrate_node}, substrate_ids);
    }
    request.elements.push_back(std::move(node));
  }
  int link_counter = 0;
  for (const auto& edge : sampled.edges) {
    NetworkElement link;
    link.id = request.id + "_l" + std::to_string(link_counter++);
    link.kind = ElementKind::Link;
    link.layer = Layer::Virtual;
    link.endpoints = {virtual_of.at(edge.first), virtual_of.at(edge.second)};
    link.requests[{"bw_v", ValueType::Constant}] = config.link_bandwidth_demand;
    request.elements.push_back(std::move(link));
  }
  return out;
}

ExperimentResult run_experiment(const ScenarioConfig& config) {
  std::string topology_text;
  if (!config.topology_file.empty()) {
    topology_text = json_io::read_text_file(config.topology_file);
  } else if (!config.topology_edges.empty()) {
    std::ostringstream os;
    for (const auto& [a, b] : config.topology_edges) os << a << " " << b << "\n";
    topology_text = os.str();
  } else {
    throw Error("run_experiment: no topology configured");
  }

  ExperimentResult result;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    ScenarioConfig rep_config = config;
    rep_config.seed = config.seed * 1000003ULL + static_cast<std::uint64_t>(rep);
    engine::SubstrateState state = load_topology(topology_text, rep_config);
    Rng rng(rep_config.seed);

    for (int index = 0; index < config.request_budget; ++index) {
      GeneratedRequest generated = generate_request(config, state, rng, index);
      engine::EmbedOutcome outcome =
          engine::embed(state, generated.request, config.objective, config.solver);

      RunRecord record;
      record.run = rep;
      record.request_index = index;
      record.accepted = outcome.accepted();
      if (outcome.accepted()) {
        const engine::Embedding& embedding = *outcome.embedding;
        record.wall_ms = embedding.solver_stats.wall_seconds * 1000.0;
        record.nodes_explored = embedding.solver_stats.nodes;
        record.objective = embedding.objective;
        state.commit(generated.request, embedding);
        if (config.migration) {
          engine::ReembedPlan plan = engine::reembed(
              state, config.objective, config.migration_inputs, config.solver);
          int migrated = 0;
          for (const auto& entry : plan.entries) {
            if (entry.feasible && entry.improvement > 1e-9) {
              migrated += static_cast<int>(entry.proposed.migrations.size());
            }
          }
          engine::apply_plan(state, plan);
          record.migrations = migrated;
        }
      } else {
        record.wall_ms = outcome.rejection->solver_stats.wall_seconds * 1000.0;
        record.nodes_explored = outcome.rejection->solver_stats.nodes;
      }
      result.records.push_back(record);
      if (!record.accepted) break;  // first rejection ends the run
    }
  }

  std::vector<double> walls;
  for (const auto& record : result.records) {
    if (record.accepted) ++result.accepted;
    walls.push_back(record.wall_ms);
  }
  if (!walls.empty()) {
    std::sort(walls.begin(), walls.end());
    double sum = 0;
    for (double w : walls) sum += w;
    result.mean_wall_ms = sum / static_cast<double>(walls.size());
    result.median_wall_ms = walls[walls.size() / 2];
    result.max_wall_ms = walls.back();
  }
  return result;
}

std::string emit_metrics(const std::vector<RunRecord>& records, MetricsFormat format) {
  std::ostringstream os;
  char buf[160];
  if (format == MetricsFormat::CsvTable) {
    os << "run,request_index,accepted,wall_ms,nodes_explored,objective,migrations\n";
    for (const auto& r : records) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.3f,%ld,%.6f,%d\n", r.run,
                    r.request_index, r.accepted ? 1 : 0, r.wall_ms,
                    r.nodes_explored, r.objective, r.migrations);
      os << buf;
    }
  } else {
    for (const auto& r : records) {
      std::snprintf(buf, sizeof(buf),
                    "{\"run\":%d,\"request_index\":%d,\"accepted\":%s,"
                    "\"wall_ms\":%.3f,\"nodes_explored\":%ld,\"objective\":%.6f,"
                    "\"migrations\":%d}\n",
                    r.run, r.request_index, r.accepted ? "true" : "false",
                    r.wall_ms, r.nodes_explored, r.objective, r.migrations);
      os << buf;
    }
  }
  return os.str();
}

std::vector<RunRecord> parse_metrics_csv(const std::string& text) {
  std::vector<RunRecord> records;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    RunRecord r;
    int accepted = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%ld,%lf,%d", &r.run,
                    &r.request_index, &accepted, &r.wall_ms, &r.nodes_explored,
                    &r.objective, &r.migrations) != 7) {
      throw Error("metrics CSV: malformed line '" + line + "'");
    }
    r.accepted = accepted != 0;
    records.push_back(r);
  }
  return records;
}

}  // namespace vne::scenario
