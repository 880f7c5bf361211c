#pragma once

#include "vne/model.hpp"

namespace vne::testing {

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  long mappings_tried = 0;
};

// Brute-force optimum: enumerate every assignment of virtual nodes to
// suitable substrate elements; for each assignment pin the suitability rows
// to singletons and solve the remaining flow LP exactly. Independent of the
// branch-and-bound path it is used to check.
OracleResult brute_force_optimum(const EmbeddingProblem& problem);

// Independent multi-commodity-flow feasibility check for freedom-0 problems
// (every virtual node restricted to exactly one substrate node). Builds a
// plain flow LP directly from the graph, bypassing the MIP builder.
bool mcf_feasible(const EmbeddingProblem& problem);

}  // namespace vne::testing
