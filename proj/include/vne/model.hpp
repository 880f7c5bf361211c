#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vne/common.hpp"

namespace vne {

enum class Layer { Virtual, Substrate };
enum class ElementKind { Node, Link };
enum class ValueType { Minimum, Maximum, Constant };

std::string to_string(Layer layer);
std::string to_string(ElementKind kind);
std::string to_string(ValueType vt);

// A virtual or substrate resource attribute, e.g. "/node/cpu" or
// "/link/symmetric/bandwidth". Substrate resources may carry a shared
// capacity across the whole substrate and a load weight; virtual resources
// may carry a minimum allocation unit.
struct ResourceType {
  std::string id;
  std::string attribute_path;
  Layer klass = Layer::Substrate;
  double shared_capacity = kUnbounded;  // substrate only
  double load_weight = 1.0;             // substrate only, in [0,1]
  double min_alloc = 0.0;               // virtual only
};

// Unified vertex type for nodes and links, virtual or substrate. Links keep
// their endpoint node ids; multi-endpoint links model shared channels.
struct NetworkElement {
  std::string id;
  ElementKind kind = ElementKind::Node;
  Layer layer = Layer::Substrate;
  std::vector<std::string> endpoints;               // links only
  std::map<std::string, double> capacities;         // substrate: resource -> cap
  std::map<std::pair<std::string, ValueType>, double> requests;  // virtual

  bool is_node() const { return kind == ElementKind::Node; }
  bool is_link() const { return kind == ElementKind::Link; }
  // Resource ids with at least one request entry, in id order.
  std::vector<std::string> requested_resources() const;
  std::optional<double> request(const std::string& resource, ValueType vt) const;
};

// Result of replacing every link element by a vertex: a bipartite-ish graph
// whose edges connect link vertices with their endpoint nodes.
struct ExpandedGraph {
  std::vector<std::string> vertices;  // element ids, ascending
  std::vector<std::pair<std::string, std::string>> edges;  // canonical a < b
  std::map<std::string, std::vector<std::string>> adjacency;

  bool has_vertex(const std::string& id) const;
  // All ordered (v, w) pairs with {v, w} an edge, ascending.
  std::vector<std::pair<std::string, std::string>> arcs() const;
  // Hop distance between two vertices, -1 if disconnected.
  int distance(const std::string& from, const std::string& to) const;
};

struct SubstrateGraph {
  std::vector<NetworkElement> elements;  // sorted by id
  // (v, w, resource) -> capacity of the directed interface v -> w.
  std::map<std::tuple<std::string, std::string, std::string>, double>
      interface_capacities;
  // (virtual resource, substrate resource) -> proportionality factor.
  std::map<std::pair<std::string, std::string>, double> prop;

  const NetworkElement* find(const std::string& id) const;
  double interface_capacity(const std::string& v, const std::string& w,
                            const std::string& resource) const;
  double prop_factor(const std::string& rv, const std::string& rs) const;
};

// Sparse suitability and placement-weight matrices; absent entries default
// to 1 (no restriction, unit weight).
struct PolicyMatrices {
  std::map<std::pair<std::string, std::string>, int> suit;
  std::map<std::pair<std::string, std::string>, double> weight;

  int suit_at(const std::string& u, const std::string& v) const;
  double weight_at(const std::string& u, const std::string& v) const;
  // Convenience: restrict element u to exactly the given hosts.
  void restrict(const std::string& u, const std::vector<std::string>& hosts,
                const std::vector<std::string>& all_substrate_ids);
};

// Existing mapping plus migration cost inputs. Empty old mapping means a
// fresh request; penalties default at problem finalization (links get the
// epsilon rule, nodes 1.0).
struct MigrationContext {
  std::map<std::pair<std::string, std::string>, int> old_mapping;
  std::map<std::string, double> penalty;
  std::map<std::pair<std::string, std::string>, double> transit;

  bool fresh() const { return old_mapping.empty(); }
  int old_at(const std::string& u, const std::string& v) const;
  double transit_at(const std::string& u, const std::string& v) const;
};

// One source-sink commodity of an expanded virtual link.
struct Flow {
  std::string link;
  std::string source;
  std::string sink;

  std::string id() const { return link + ":" + source + ">" + sink; }
  bool operator<(const Flow& o) const {
    return std::tie(link, source, sink) < std::tie(o.link, o.source, o.sink);
  }
};

enum class ObjectiveKind { ResourceMin, LoadBalance };

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::ResourceMin;
  // Load priority factor for LoadBalance; must be >= sum of load weights.
  // Negative means "use the minimal legal value" (filled at finalize).
  double c = -1.0;
};

// The complete MIP input: one substrate, one request, policies, migration
// context, flow expansion, and the objective choice.
struct EmbeddingProblem {
  std::string request_id = "request";
  std::vector<ResourceType> resources;  // sorted by id
  SubstrateGraph substrate;
  std::vector<NetworkElement> request;  // sorted by id
  PolicyMatrices policies;
  MigrationContext migration;
  std::map<std::string, std::vector<Flow>> flows;  // link id -> flows
  ObjectiveConfig objective;

  const ResourceType* find_resource(const std::string& id) const;
  const NetworkElement* find_virtual(const std::string& id) const;
  std::vector<const NetworkElement*> virtual_nodes() const;
  std::vector<const NetworkElement*> virtual_links() const;
  std::vector<std::string> substrate_resource_ids() const;
  double sum_load_weights() const;
};

struct ValidationIssue {
  std::string code;     // stable machine-readable tag
  std::string subject;  // offending element/resource id
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool clean() const { return issues.empty(); }
  std::string to_text() const;
};

// Replaces each link with a vertex and connects it to its endpoints.
// Idempotent: applying it to an already expanded element set (links carry
// their endpoints either way) yields the same graph.
ExpandedGraph expand_links(const std::vector<NetworkElement>& elements);

// Decomposes a shared channel into one flow per unordered endpoint pair,
// oriented source = lexicographically smaller id. Links may override this
// by declaring their flow set explicitly (directed links).
std::vector<Flow> expand_flows(const NetworkElement& link);

// Structural validation; an empty report guarantees the MIP builder will
// not fail on structural grounds.
ValidationReport validate_problem(const EmbeddingProblem& problem);

// Fills derived defaults in place: sorts element/resource tables, expands
// missing flow sets, applies the link penalty epsilon rule and the default
// node penalty, and resolves the objective's c. Call before build/validate.
void finalize_problem(EmbeddingProblem& problem);

}  // namespace vne
