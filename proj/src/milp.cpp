#include "vne/milp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <queue>
#include <set>
#include <thread>

namespace vne::milp {

namespace {

using Clock = std::chrono::steady_clock;

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  double inherited_bound;  // parent LP value, a valid lower bound
  std::vector<BoundChange> diffs;
  long id = 0;  // creation order, tie-breaker for best-bound selection
};

struct Shared {
  const mip::MipModel& model;
  lp::LpProblem problem;
  std::vector<int> binaries;
  SolverConfig config;
  Clock::time_point start;

  std::mutex mutex;
  bool have_incumbent = false;
  double incumbent_value = 0;
  std::vector<double> incumbent_x;
  std::atomic<long> nodes{0};
  std::atomic<long> lp_iterations{0};
  std::atomic<bool> stop{false};  // feasibility_only stop

  bool time_up() const {
    if (is_unbounded(config.time_limit_seconds)) return false;
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    return elapsed >= config.time_limit_seconds;
  }

  double cutoff_unlocked() const {
    if (!have_incumbent) return kUnbounded;
    double slack = std::max(1e-9, config.mip_gap * std::max(1.0, std::fabs(incumbent_value)));
    return incumbent_value - slack;
  }
};

int pick_branch_variable(const Shared& shared, const std::vector<double>& x,
                         double tol) {
  int best = -1;
  double best_frac = tol;
  for (int j : shared.binaries) {
    double frac = std::fabs(x[j] - std::round(x[j]));
    if (frac > best_frac + 1e-12) {
      best_frac = frac;
      best = j;
    } else if (best >= 0 && frac > best_frac - 1e-12 &&
               shared.model.variables[j].name < shared.model.variables[best].name) {
      best = j;
    }
  }
  return best;
}

void apply_node(lp::Simplex& simplex, const Shared& shared,
                std::vector<int>& currently_changed, const Node& node) {
  for (int var : currently_changed) {
    simplex.set_bound(var, shared.problem.lower[var], shared.problem.upper[var]);
  }
  currently_changed.clear();
  for (const auto& change : node.diffs) {
    simplex.set_bound(change.var, change.lower, change.upper);
    currently_changed.push_back(change.var);
  }
}

// Re-optimizes with escalating recovery; returns the LP status. Throws only
// if even a from-scratch solve cannot produce a trustworthy point.
lp::LpStatus resolve_node(lp::Simplex& simplex) {
  lp::LpStatus status = simplex.reoptimize();
  if (status == lp::LpStatus::Optimal &&
      simplex.max_current_violation() <= 1e-6) {
    return status;
  }
  if (status == lp::LpStatus::Infeasible || status == lp::LpStatus::Unbounded) {
    return status;
  }
  simplex.rebuild_from_basis();
  status = simplex.reoptimize();
  if (status == lp::LpStatus::Optimal &&
      simplex.max_current_violation() <= 1e-6) {
    return status;
  }
  if (status == lp::LpStatus::Infeasible || status == lp::LpStatus::Unbounded) {
    return status;
  }
  status = simplex.solve_from_scratch();
  if (status == lp::LpStatus::Optimal && simplex.max_current_violation() > 1e-6) {
    throw Error("milp: LP node solution failed independent feasibility check");
  }
  return status;
}

// Processes one solved node: updates the incumbent or emits children.
// Children are ordered so that a LIFO pops the 1-branch first: fixing a
// mapping to 1 keeps the current LP support and reaches an incumbent in
// linear depth, while 0-first enumerates equal-cost reroutes of the
// relaxation plateau before any incumbent can prune them.
std::vector<Node> process_node(Shared& shared, lp::Simplex& simplex,
                               const Node& node, long& next_id) {
  std::vector<Node> children;
  lp::LpStatus status = resolve_node(simplex);
  if (status == lp::LpStatus::Infeasible) return children;
  if (status == lp::LpStatus::Unbounded) {
    throw Error("milp: relaxation unbounded");
  }
  if (status != lp::LpStatus::Optimal) {
    throw Error("milp: LP did not converge at a node");
  }

  double value = simplex.objective();
  std::vector<double> x = simplex.values();

  {
    std::lock_guard<std::mutex> lock(shared.mutex);
    if (value >= shared.cutoff_unlocked()) return children;
  }

  int branch = pick_branch_variable(shared, x, shared.config.tolerance);
  if (branch < 0) {
    std::lock_guard<std::mutex> lock(shared.mutex);
    if (!shared.have_incumbent || value < shared.incumbent_value - 1e-12) {
      shared.have_incumbent = true;
      shared.incumbent_value = value;
      shared.incumbent_x = std::move(x);
      if (shared.config.feasibility_only) shared.stop = true;
    }
    return children;
  }

  Node one{value, node.diffs, next_id++};
  one.diffs.push_back({branch, 1.0, 1.0});
  Node zero{value, node.diffs, next_id++};
  zero.diffs.push_back({branch, 0.0, 0.0});
  children.push_back(std::move(zero));
  children.push_back(std::move(one));  // popped first by the DFS stack
  return children;
}

MilpSolution finish(Shared& shared, double best_open_bound, bool exhausted) {
  MilpSolution sol;
  sol.stats.nodes = shared.nodes.load();
  sol.stats.lp_iterations = shared.lp_iterations.load();
  sol.stats.wall_seconds =
      std::chrono::duration<double>(Clock::now() - shared.start).count();

  if (shared.have_incumbent) {
    sol.objective = shared.incumbent_value;
    sol.bound = exhausted ? shared.incumbent_value
                          : std::min(best_open_bound, shared.incumbent_value);
    sol.raw = shared.incumbent_x;
    for (std::size_t j = 0; j < shared.model.variables.size(); ++j) {
      double v = sol.raw[j];
      if (shared.model.variables[j].integrality == mip::Integrality::Binary) {
        v = std::round(v);
        sol.raw[j] = v;
      }
      sol.values[shared.model.variables[j].name] = v;
    }
    if (shared.time_up() && !exhausted) {
      sol.status = Status::TimeLimit;
    } else if (exhausted ||
               shared.incumbent_value - sol.bound <=
                   shared.config.mip_gap *
                       std::max(1.0, std::fabs(shared.incumbent_value)) + 1e-9) {
      sol.status = Status::Optimal;
    } else {
      sol.status = Status::Feasible;
    }
  } else {
    sol.status = shared.time_up() && !exhausted ? Status::TimeLimit : Status::Infeasible;
    sol.bound = best_open_bound;
  }
  return sol;
}

MilpSolution solve_dfs(Shared& shared, lp::Simplex& simplex) {
  long next_id = 0;
  std::vector<Node> stack;
  stack.push_back({-kUnbounded, {}, next_id++});
  std::vector<int> currently_changed;
  bool exhausted = true;

  while (!stack.empty()) {
    if (shared.time_up() || shared.stop) {
      exhausted = false;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    {
      std::lock_guard<std::mutex> lock(shared.mutex);
      if (node.inherited_bound >= shared.cutoff_unlocked()) continue;
    }
    shared.nodes.fetch_add(1);
    apply_node(simplex, shared, currently_changed, node);
    long before = simplex.iterations();
    auto children = process_node(shared, simplex, node, next_id);
    shared.lp_iterations.fetch_add(simplex.iterations() - before);
    static const bool trace = std::getenv("VNE_MILP_TRACE") != nullptr;
    if (trace) {
      std::fprintf(stderr, "[milp] nodes=%ld stack=%zu iters=%ld depth=%zu\n",
                   shared.nodes.load(), stack.size(), shared.lp_iterations.load(),
                   node.diffs.size());
    }
    for (auto& child : children) stack.push_back(std::move(child));
  }

  double best_open = kUnbounded;
  for (const auto& node : stack) {
    best_open = std::min(best_open, node.inherited_bound);
  }
  if (stack.empty()) best_open = shared.have_incumbent ? shared.incumbent_value : kUnbounded;
  return finish(shared, best_open, exhausted && stack.empty());
}

struct BestBoundQueue {
  struct Entry {
    double bound;
    long id;
    bool operator<(const Entry& o) const {
      // std::priority_queue is a max-heap; invert for best-bound-first.
      if (bound != o.bound) return bound > o.bound;
      return id > o.id;
    }
  };
  std::priority_queue<Entry> order;
  std::map<long, Node> nodes;

  void push(Node node) {
    order.push({node.inherited_bound, node.id});
    nodes.emplace(node.id, std::move(node));
  }
  bool empty() const { return nodes.empty(); }
  double best_bound() const { return order.empty() ? kUnbounded : order.top().bound; }
  Node pop() {
    Entry top = order.top();
    order.pop();
    Node node = std::move(nodes.at(top.id));
    nodes.erase(top.id);
    return node;
  }
};

MilpSolution solve_pool(Shared& shared, const lp::Simplex& root_simplex) {
  BestBoundQueue queue;
  std::mutex queue_mutex;
  std::condition_variable cv;
  int active = 0;
  long next_id = 1;
  bool exhausted = true;

  {
    std::lock_guard<std::mutex> lock(queue_mutex);
    queue.push({-kUnbounded, {}, 0});
  }

  int workers = std::max(1, shared.config.workers);
  auto worker = [&]() {
    lp::Simplex simplex = root_simplex;  // private tableau per worker
    std::vector<int> currently_changed;
    std::unique_lock<std::mutex> lock(queue_mutex);
    while (true) {
      cv.wait(lock, [&] { return !queue.empty() || active == 0 || shared.stop; });
      if (shared.stop || shared.time_up()) {
        if (!queue.empty()) exhausted = false;
        break;
      }
      if (queue.empty()) {
        if (active == 0) break;
        continue;
      }
      Node node = queue.pop();
      ++active;
      lock.unlock();

      bool pruned = false;
      {
        std::lock_guard<std::mutex> inc_lock(shared.mutex);
        pruned = node.inherited_bound >= shared.cutoff_unlocked();
      }
      std::vector<Node> children;
      if (!pruned) {
        shared.nodes.fetch_add(1);
        apply_node(simplex, shared, currently_changed, node);
        long before = simplex.iterations();
        long local_id = 0;
        children = process_node(shared, simplex, node, local_id);
        shared.lp_iterations.fetch_add(simplex.iterations() - before);
      }

      lock.lock();
      for (auto& child : children) {
        child.id = next_id++;
        queue.push(std::move(child));
      }
      --active;
      cv.notify_all();
    }
    cv.notify_all();
  };

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int i = 0; i < workers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  double best_open;
  {
    std::lock_guard<std::mutex> lock(queue_mutex);
    best_open = queue.empty()
                    ? (shared.have_incumbent ? shared.incumbent_value : kUnbounded)
                    : queue.best_bound();
    if (!queue.empty()) exhausted = false;
  }
  return finish(shared, best_open, exhausted);
}

}  // namespace

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Feasible: return "feasible";
    case Status::Infeasible: return "infeasible";
    case Status::TimeLimit: return "time_limit";
  }
  return "?";
}

double MilpSolution::value_of(const std::string& name) const {
  auto it = values.find(name);
  return it == values.end() ? 0.0 : it->second;
}

MilpSolution solve_milp(const mip::MipModel& model, const SolverConfig& config) {
  Shared shared{model, lp::LpProblem::from_model(model), {}, config, Clock::now(),
                {}, false, 0.0, {}};
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    if (model.variables[j].integrality == mip::Integrality::Binary) {
      shared.binaries.push_back(static_cast<int>(j));
    }
  }

  lp::Simplex simplex(shared.problem);
  lp::LpStatus root = simplex.solve_from_scratch();
  shared.lp_iterations.fetch_add(simplex.iterations());
  if (root == lp::LpStatus::Infeasible) {
    MilpSolution sol;
    sol.status = Status::Infeasible;
    sol.bound = kUnbounded;
    sol.stats.lp_iterations = shared.lp_iterations.load();
    sol.stats.wall_seconds =
        std::chrono::duration<double>(Clock::now() - shared.start).count();
    std::set<std::string> families;
    for (int row : simplex.violated_rows()) {
      families.insert(model.constraints[row].family);
    }
    sol.infeasible_families.assign(families.begin(), families.end());
    return sol;
  }
  if (root == lp::LpStatus::Unbounded) throw Error("milp: relaxation unbounded");
  if (root != lp::LpStatus::Optimal) throw Error("milp: root LP failed: " + lp::to_string(root));
  if (simplex.max_current_violation() > 1e-6) {
    simplex.rebuild_from_basis();
    if (simplex.reoptimize() != lp::LpStatus::Optimal ||
        simplex.max_current_violation() > 1e-6) {
      throw Error("milp: root LP solution failed independent feasibility check");
    }
  }

  if (config.deterministic || config.workers <= 1) {
    return solve_dfs(shared, simplex);
  }
  return solve_pool(shared, simplex);
}

}  // namespace vne::milp
