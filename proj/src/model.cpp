#include "vne/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace vne {

std::string to_string(Layer layer) {
  return layer == Layer::Virtual ? "virtual" : "substrate";
}

std::string to_string(ElementKind kind) {
  return kind == ElementKind::Node ? "node" : "link";
}

std::string to_string(ValueType vt) {
  switch (vt) {
    case ValueType::Minimum: return "minimum";
    case ValueType::Maximum: return "maximum";
    case ValueType::Constant: return "constant";
  }
  return "?";
}

std::vector<std::string> NetworkElement::requested_resources() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : requests) {
    (void)value;
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

std::optional<double> NetworkElement::request(const std::string& resource,
                                              ValueType vt) const {
  auto it = requests.find({resource, vt});
  if (it == requests.end()) return std::nullopt;
  return it->second;
}

bool ExpandedGraph::has_vertex(const std::string& id) const {
  return std::binary_search(vertices.begin(), vertices.end(), id);
}

std::vector<std::pair<std::string, std::string>> ExpandedGraph::arcs() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    out.emplace_back(a, b);
    out.emplace_back(b, a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int ExpandedGraph::distance(const std::string& from,
                            const std::string& to) const {
  if (!has_vertex(from) || !has_vertex(to)) return -1;
  std::map<std::string, int> dist;
  std::deque<std::string> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    std::string v = queue.front();
    queue.pop_front();
    if (v == to) return dist[v];
    auto it = adjacency.find(v);
    if (it == adjacency.end()) continue;
    for (const auto& w : it->second) {
      if (dist.emplace(w, dist[v] + 1).second) queue.push_back(w);
    }
  }
  return -1;
}

const NetworkElement* SubstrateGraph::find(const std::string& id) const {
  auto it = std::lower_bound(
      elements.begin(), elements.end(), id,
      [](const NetworkElement& e, const std::string& key) { return e.id < key; });
  if (it == elements.end() || it->id != id) return nullptr;
  return &*it;
}

double SubstrateGraph::interface_capacity(const std::string& v,
                                          const std::string& w,
                                          const std::string& resource) const {
  auto it = interface_capacities.find({v, w, resource});
  return it == interface_capacities.end() ? 0.0 : it->second;
}

double SubstrateGraph::prop_factor(const std::string& rv,
                                   const std::string& rs) const {
  auto it = prop.find({rv, rs});
  return it == prop.end() ? 0.0 : it->second;
}

int PolicyMatrices::suit_at(const std::string& u, const std::string& v) const {
  auto it = suit.find({u, v});
  return it == suit.end() ? 1 : it->second;
}

double PolicyMatrices::weight_at(const std::string& u,
                                 const std::string& v) const {
  auto it = weight.find({u, v});
  return it == weight.end() ? 1.0 : it->second;
}

void PolicyMatrices::restrict(const std::string& u,
                              const std::vector<std::string>& hosts,
                              const std::vector<std::string>& all_substrate_ids) {
  std::set<std::string> allowed(hosts.begin(), hosts.end());
  for (const auto& v : all_substrate_ids) {
    suit[{u, v}] = allowed.count(v) ? 1 : 0;
  }
}

int MigrationContext::old_at(const std::string& u, const std::string& v) const {
  auto it = old_mapping.find({u, v});
  return it == old_mapping.end() ? 0 : it->second;
}

double MigrationContext::transit_at(const std::string& u,
                                    const std::string& v) const {
  auto it = transit.find({u, v});
  return it == transit.end() ? 0.0 : it->second;
}

const ResourceType* EmbeddingProblem::find_resource(const std::string& id) const {
  for (const auto& r : resources) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const NetworkElement* EmbeddingProblem::find_virtual(const std::string& id) const {
  for (const auto& e : request) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::vector<const NetworkElement*> EmbeddingProblem::virtual_nodes() const {
  std::vector<const NetworkElement*> out;
  for (const auto& e : request) {
    if (e.is_node()) out.push_back(&e);
  }
  return out;
}

std::vector<const NetworkElement*> EmbeddingProblem::virtual_links() const {
  std::vector<const NetworkElement*> out;
  for (const auto& e : request) {
    if (e.is_link()) out.push_back(&e);
  }
  return out;
}

std::vector<std::string> EmbeddingProblem::substrate_resource_ids() const {
  std::vector<std::string> out;
  for (const auto& r : resources) {
    if (r.klass == Layer::Substrate) out.push_back(r.id);
  }
  return out;
}

double EmbeddingProblem::sum_load_weights() const {
  double sum = 0;
  for (const auto& r : resources) {
    if (r.klass == Layer::Substrate) sum += r.load_weight;
  }
  return sum;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& issue : issues) {
    os << issue.code << " [" << issue.subject << "]: " << issue.message << "\n";
  }
  return os.str();
}

ExpandedGraph expand_links(const std::vector<NetworkElement>& elements) {
  ExpandedGraph graph;
  std::set<std::string> node_ids;
  for (const auto& e : elements) {
    graph.vertices.push_back(e.id);
    if (e.is_node()) node_ids.insert(e.id);
  }
  std::sort(graph.vertices.begin(), graph.vertices.end());
  graph.vertices.erase(
      std::unique(graph.vertices.begin(), graph.vertices.end()),
      graph.vertices.end());

  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& e : elements) {
    if (!e.is_link()) continue;
    for (const auto& endpoint : e.endpoints) {
      if (!node_ids.count(endpoint)) {
        throw Error("expand_links: link '" + e.id +
                    "' references missing node '" + endpoint + "'");
      }
      edges.insert(e.id < endpoint ? std::make_pair(e.id, endpoint)
                                   : std::make_pair(endpoint, e.id));
    }
  }
  graph.edges.assign(edges.begin(), edges.end());
  for (const auto& [a, b] : graph.edges) {
    graph.adjacency[a].push_back(b);
    graph.adjacency[b].push_back(a);
  }
  for (auto& [v, neighbors] : graph.adjacency) {
    (void)v;
    std::sort(neighbors.begin(), neighbors.end());
  }
  return graph;
}

std::vector<Flow> expand_flows(const NetworkElement& link) {
  if (!link.is_link()) {
    throw Error("expand_flows: element '" + link.id + "' is not a link");
  }
  std::vector<std::string> endpoints = link.endpoints;
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                  endpoints.end());
  if (endpoints.size() < 2) {
    throw Error("expand_flows: link '" + link.id +
                "' needs at least 2 distinct endpoints");
  }
  std::vector<Flow> flows;
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    for (std::size_t j = i + 1; j < endpoints.size(); ++j) {
      flows.push_back({link.id, endpoints[i], endpoints[j]});
    }
  }
  return flows;
}

namespace {

void sort_elements(std::vector<NetworkElement>& elements) {
  std::sort(elements.begin(), elements.end(),
            [](const NetworkElement& a, const NetworkElement& b) {
              return a.id < b.id;
            });
}

}  // namespace

void finalize_problem(EmbeddingProblem& problem) {
  std::sort(problem.resources.begin(), problem.resources.end(),
            [](const ResourceType& a, const ResourceType& b) {
              return a.id < b.id;
            });
  sort_elements(problem.substrate.elements);
  sort_elements(problem.request);

  for (const auto& element : problem.request) {
    if (element.is_link() && !problem.flows.count(element.id)) {
      problem.flows[element.id] = expand_flows(element);
    }
  }

  // Migration penalties: explicit values win; otherwise nodes get 1.0 and
  // links the epsilon rule (1e-6 of the largest penalty in the problem).
  double largest = 0;
  for (const auto& [u, p] : problem.migration.penalty) {
    (void)u;
    largest = std::max(largest, p);
  }
  for (const auto& element : problem.request) {
    if (problem.migration.penalty.count(element.id)) continue;
    if (element.is_node()) {
      problem.migration.penalty[element.id] = 1.0;
      largest = std::max(largest, 1.0);
    }
  }
  const double epsilon = 1e-6 * (largest > 0 ? largest : 1.0);
  for (const auto& element : problem.request) {
    if (element.is_link() && !problem.migration.penalty.count(element.id)) {
      problem.migration.penalty[element.id] = epsilon;
    }
  }

  if (problem.objective.c < 0) {
    problem.objective.c = problem.sum_load_weights();
  }
}

namespace {

void check_element(const EmbeddingProblem& problem, const NetworkElement& e,
                   const std::set<std::string>& layer_node_ids,
                   ValidationReport& report) {
  auto add = [&](const std::string& code, const std::string& message) {
    report.issues.push_back({code, e.id, message});
  };

  if (e.is_link()) {
    if (e.endpoints.size() < 2) {
      add("link-endpoints", "link has fewer than 2 endpoints");
    }
    for (const auto& endpoint : e.endpoints) {
      if (!layer_node_ids.count(endpoint)) {
        add("dangling-endpoint",
            "endpoint '" + endpoint + "' is not a node of the same layer");
      }
    }
  } else if (!e.endpoints.empty()) {
    add("node-endpoints", "node carries endpoints");
  }

  if (e.layer == Layer::Virtual) {
    if (!e.capacities.empty()) {
      add("virtual-capacities", "virtual element carries capacities");
    }
    std::set<std::string> constant, ranged;
    for (const auto& [key, value] : e.requests) {
      const auto& [rid, vt] = key;
      const ResourceType* r = problem.find_resource(rid);
      if (!r) {
        add("unknown-resource", "request references unknown resource '" + rid + "'");
      } else if (r->klass != Layer::Virtual) {
        add("resource-class", "request references substrate resource '" + rid + "'");
      }
      if (value < 0) add("negative-request", "negative request for '" + rid + "'");
      if (vt == ValueType::Constant) {
        constant.insert(rid);
      } else {
        ranged.insert(rid);
      }
    }
    for (const auto& rid : constant) {
      if (ranged.count(rid)) {
        add("constant-conflict",
            "resource '" + rid + "' mixes constant with minimum/maximum");
      }
    }
  } else {
    if (!e.requests.empty()) {
      add("substrate-requests", "substrate element carries requests");
    }
    for (const auto& [rid, cap] : e.capacities) {
      const ResourceType* r = problem.find_resource(rid);
      if (!r) {
        add("unknown-resource", "capacity references unknown resource '" + rid + "'");
      } else if (r->klass != Layer::Substrate) {
        add("resource-class", "capacity references virtual resource '" + rid + "'");
      }
      if (cap < 0) add("negative-capacity", "negative capacity for '" + rid + "'");
    }
  }
}

}  // namespace

ValidationReport validate_problem(const EmbeddingProblem& problem) {
  ValidationReport report;
  auto add = [&](const std::string& code, const std::string& subject,
                 const std::string& message) {
    report.issues.push_back({code, subject, message});
  };

  std::set<std::string> seen_paths[2];
  for (const auto& r : problem.resources) {
    int klass = r.klass == Layer::Virtual ? 0 : 1;
    if (r.attribute_path.empty()) {
      add("empty-attribute-path", r.id, "resource has empty attribute path");
    } else if (!seen_paths[klass].insert(r.attribute_path).second) {
      add("duplicate-attribute-path", r.id,
          "attribute path '" + r.attribute_path + "' repeats within its class");
    }
    if (r.load_weight < 0 || r.load_weight > 1) {
      add("load-weight-range", r.id, "load weight outside [0,1]");
    }
    if (r.min_alloc < 0) add("negative-min-alloc", r.id, "negative min_alloc");
    if (!is_unbounded(r.shared_capacity) && r.shared_capacity < 0) {
      add("negative-shared-capacity", r.id, "negative shared capacity");
    }
  }

  std::set<std::string> substrate_nodes, virtual_nodes, substrate_ids, virtual_ids;
  for (const auto& e : problem.substrate.elements) {
    substrate_ids.insert(e.id);
    if (e.is_node()) substrate_nodes.insert(e.id);
  }
  for (const auto& e : problem.request) {
    virtual_ids.insert(e.id);
    if (e.is_node()) virtual_nodes.insert(e.id);
  }
  if (substrate_ids.size() != problem.substrate.elements.size()) {
    add("duplicate-id", "substrate", "duplicate substrate element ids");
  }
  if (virtual_ids.size() != problem.request.size()) {
    add("duplicate-id", "request", "duplicate virtual element ids");
  }

  for (const auto& e : problem.substrate.elements) {
    check_element(problem, e, substrate_nodes, report);
  }
  for (const auto& e : problem.request) {
    check_element(problem, e, virtual_nodes, report);
  }

  // prop route coverage: every requested virtual resource needs at least one
  // substrate resource able to host it, else the request is trivially
  // infeasible and must be reported.
  std::set<std::string> used;
  for (const auto& e : problem.request) {
    for (const auto& rid : e.requested_resources()) used.insert(rid);
  }
  for (const auto& rid : used) {
    bool hosted = false;
    for (const auto& rs : problem.substrate_resource_ids()) {
      if (problem.substrate.prop_factor(rid, rs) > 0) {
        hosted = true;
        break;
      }
    }
    if (!hosted) {
      add("no-prop-route", rid, "no substrate resource can host " + rid);
    }
  }
  for (const auto& [key, factor] : problem.substrate.prop) {
    if (factor < 0) add("negative-prop", key.first, "negative prop factor");
  }

  // Interface capacities may only connect elements adjacent after expansion.
  try {
    ExpandedGraph expanded = expand_links(problem.substrate.elements);
    std::set<std::pair<std::string, std::string>> arcs;
    for (const auto& arc : expanded.arcs()) arcs.insert(arc);
    for (const auto& [key, cap] : problem.substrate.interface_capacities) {
      const auto& [v, w, rid] = key;
      if (!arcs.count({v, w})) {
        add("interface-not-adjacent", v,
            "interface capacity on non-adjacent pair (" + v + ", " + w + ")");
      }
      if (!problem.find_resource(rid)) {
        add("unknown-resource", rid, "interface capacity references unknown resource");
      }
      if (cap < 0) add("negative-capacity", v, "negative interface capacity");
    }
  } catch (const Error& err) {
    add("substrate-expansion", "substrate", err.what());
  }

  for (const auto& [key, value] : problem.policies.suit) {
    if (value != 0 && value != 1) add("suit-range", key.first, "suit not in {0,1}");
    if (!virtual_ids.count(key.first)) {
      add("unknown-element", key.first, "suit row for unknown virtual element");
    }
    if (!substrate_ids.count(key.second)) {
      add("unknown-element", key.second, "suit column for unknown substrate element");
    }
  }
  for (const auto& [key, value] : problem.policies.weight) {
    if (value < 0 || value > 1) add("weight-range", key.first, "weight outside [0,1]");
  }

  for (const auto& [key, value] : problem.migration.old_mapping) {
    if (value != 0 && value != 1) add("old-range", key.first, "old not in {0,1}");
    if (!virtual_ids.count(key.first)) {
      add("unknown-element", key.first, "old mapping for unknown virtual element");
    }
    if (!substrate_ids.count(key.second)) {
      add("unknown-element", key.second, "old mapping onto unknown substrate element");
    }
  }
  for (const auto& nid : virtual_nodes) {
    int count = 0;
    for (const auto& [key, value] : problem.migration.old_mapping) {
      if (key.first == nid && value == 1) ++count;
    }
    if (count > 1) {
      add("old-multiplicity", nid, "virtual node has multiple old locations");
    }
  }
  for (const auto& [u, p] : problem.migration.penalty) {
    if (p <= 0) add("penalty-range", u, "penalty must be positive");
  }
  for (const auto& [key, t] : problem.migration.transit) {
    if (t < 0) add("negative-transit", key.first, "negative transit cost");
  }

  // Flow sets must cover every virtual link, with endpoints drawn from the
  // link's own endpoint set.
  for (const auto& e : problem.request) {
    if (!e.is_link()) continue;
    auto it = problem.flows.find(e.id);
    if (it == problem.flows.end() || it->second.empty()) {
      add("missing-flows", e.id, "virtual link has no flow set");
      continue;
    }
    std::set<std::string> endpoint_set(e.endpoints.begin(), e.endpoints.end());
    for (const auto& flow : it->second) {
      if (!endpoint_set.count(flow.source) || !endpoint_set.count(flow.sink)) {
        add("flow-endpoints", e.id,
            "flow (" + flow.source + ", " + flow.sink +
                ") uses non-endpoints of the link");
      }
      if (flow.source == flow.sink) {
        add("flow-endpoints", e.id, "flow source equals sink");
      }
    }
  }

  if (problem.objective.kind == ObjectiveKind::LoadBalance &&
      problem.objective.c >= 0 &&
      problem.objective.c < problem.sum_load_weights() - 1e-12) {
    add("objective-c", "objective",
        "load priority factor c below the sum of load weights");
  }

  return report;
}

}  // namespace vne
