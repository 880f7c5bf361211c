#pragma once

#include <map>
#include <string>
#include <vector>

#include "vne/lp.hpp"
#include "vne/mip.hpp"

namespace vne::milp {

enum class Status { Optimal, Feasible, Infeasible, TimeLimit };

std::string to_string(Status status);

struct SolverConfig {
  enum class Mode { BuiltIn, External };
  Mode mode = Mode::BuiltIn;
  bool deterministic = true;
  int workers = 1;
  double time_limit_seconds = kUnbounded;
  double mip_gap = 0.0;           // relative; 0 means prove optimality
  bool feasibility_only = false;  // stop at the first incumbent
  double tolerance = 1e-6;        // integrality / feasibility, absolute
};

struct SolverStats {
  long nodes = 0;
  long lp_iterations = 0;
  double wall_seconds = 0.0;
};

struct MilpSolution {
  Status status = Status::Infeasible;
  std::map<std::string, double> values;  // binaries reported rounded
  std::vector<double> raw;               // by variable index
  double objective = 0.0;
  double bound = 0.0;  // best dual bound
  SolverStats stats;
  std::vector<std::string> infeasible_families;  // root certificate, if any

  double value_of(const std::string& name) const;
};

// Exact branch and bound over the LP relaxation: most-fractional binary
// branching (ties by variable name), 0-branch explored first, DFS in
// deterministic mode and best-bound node selection otherwise. Throws on
// unbounded relaxations and unrecoverable numerical trouble.
MilpSolution solve_milp(const mip::MipModel& model, const SolverConfig& config);

}  // namespace vne::milp
