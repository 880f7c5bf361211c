#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vne/engine.hpp"
#include "vne/model.hpp"

namespace vne::scenario {

enum class ScenarioKind { VPN, OC, DC };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& s);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::OC;
  // Fraction of virtual nodes with free placement. Negative: derive from the
  // sampled CR/AP counts. VPN forces 0, DC forces 1.
  double freedom = -1.0;
  std::pair<int, int> cr_range{1, 3};
  std::pair<int, int> ap_range{1, 7};
  int substrate_size = 25;
  double element_capacity_slots = 15;
  double interface_bandwidth = 15;
  double node_bandwidth = 15;
  double node_slot_demand = 1;
  double link_bandwidth_demand = 1;
  int repetitions = 10;
  std::uint64_t seed = 1;
  bool migration = false;
  int request_budget = 1000;
  ObjectiveConfig objective{ObjectiveKind::LoadBalance, -1.0};
  milp::SolverConfig solver;
  engine::MigrationInputs migration_inputs;
  std::string topology_file;
  std::vector<std::pair<std::string, std::string>> topology_edges;  // inline

  double effective_freedom() const;
};

ScenarioConfig parse_config(const nlohmann::json& doc);

// Undirected edge list: "a b [bandwidth]" lines, plus optional
// "node a [slots]" annotations. '#' starts a comment.
struct TopologyDoc {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // canonical a < b
  std::map<std::pair<std::string, std::string>, double> edge_bandwidth;
  std::map<std::string, double> node_slots;
  std::vector<std::string> warnings;  // duplicate edges, disconnected graph
};

TopologyDoc parse_topology(const std::string& text);
// Seeded random-walk extraction of a connected node subset of the given
// size, with the induced edges.
TopologyDoc subset_topology(const TopologyDoc& doc, int size, Rng& rng);

std::vector<ResourceType> default_resources(const ScenarioConfig& config);
SubstrateGraph build_substrate(const TopologyDoc& doc, const ScenarioConfig& config);

// parse + optional connected-subset extraction + substrate construction.
engine::SubstrateState load_topology(const std::string& text,
                                     const ScenarioConfig& config,
                                     std::vector<std::string>* warnings = nullptr);

struct GeneratedRequest {
  engine::Request request;
  int cr_count = 0;
  int ap_count = 0;
  // substrate node each virtual node was sampled from (APs are pinned there)
  std::map<std::string, std::string> origin;
};

GeneratedRequest generate_request(const ScenarioConfig& config,
                                  const engine::SubstrateState& state, Rng& rng,
                                  int request_index);

struct RunRecord {
  int run = 0;
  int request_index = 0;
  bool accepted = false;
  double wall_ms = 0;
  long nodes_explored = 0;
  double objective = 0;
  int migrations = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  int accepted = 0;
  double mean_wall_ms = 0;
  double median_wall_ms = 0;
  double max_wall_ms = 0;
};

ExperimentResult run_experiment(const ScenarioConfig& config);

enum class MetricsFormat { CsvTable, JsonLines };

std::string emit_metrics(const std::vector<RunRecord>& records, MetricsFormat format);
std::vector<RunRecord> parse_metrics_csv(const std::string& text);

}  // namespace vne::scenario
