#pragma once

#include <string>
#include <vector>

#include "vne/engine.hpp"
#include "vne/model.hpp"

namespace vne::testing {

// slots + symmetric bandwidth, identity prop; the default resource universe
// for small instances.
std::vector<ResourceType> basic_resources(double min_alloc_bw = 0.0,
                                          double shared_slots = kUnbounded,
                                          double shared_bw = kUnbounded);

class SubstrateBuilder {
 public:
  SubstrateBuilder& node(const std::string& id, double slots, double bw = 0.0);
  // Adds a link element "<a>--<b>" with symmetric interface capacities.
  SubstrateBuilder& link(const std::string& a, const std::string& b, double bw);
  // Directed interface capacity override.
  SubstrateBuilder& interface_cap(const std::string& from, const std::string& to,
                                  const std::string& resource, double cap);
  // Identity prop for the basic slots/bandwidth universe is filled in unless
  // the caller installed a prop map already.
  SubstrateGraph build() const;

 private:
  SubstrateGraph graph_;
};

NetworkElement virtual_node(const std::string& id, double slots,
                            ValueType vt = ValueType::Constant);
NetworkElement virtual_link(const std::string& id,
                            const std::vector<std::string>& endpoints, double bw,
                            ValueType vt = ValueType::Constant);

EmbeddingProblem make_problem(std::vector<ResourceType> resources,
                              SubstrateGraph substrate,
                              std::vector<NetworkElement> request,
                              PolicyMatrices policies = {},
                              MigrationContext migration = {},
                              ObjectiveConfig objective = {});

// Path substrate A - B - C - ... with uniform capacities.
SubstrateGraph path_substrate(int nodes, double slots, double bw);
SubstrateGraph triangle_substrate(double slots, double bw);

struct CorpusOptions {
  int min_substrate_nodes = 2;
  int max_substrate_nodes = 4;
  int max_virtual_nodes = 3;
  int max_virtual_links = 2;
  bool force_broadcast = false;  // 3-endpoint link when possible
  bool allow_load_balance = true;
};

// Random small instance for oracle comparison: fresh (no migration), node
// suitability restricted to substrate nodes, demands at least the minimum
// allocation unit.
EmbeddingProblem random_instance(Rng& rng, const CorpusOptions& options);

std::vector<std::string> substrate_ids(const SubstrateGraph& graph);

}  // namespace vne::testing
