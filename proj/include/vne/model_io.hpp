#pragma once

#include <map>
#include <string>
#include <vector>

#include "vne/milp.hpp"
#include "vne/mip.hpp"

namespace vne::model_io {

enum class ModelFormat { LpText, MpsText };

// Deterministically sanitized export names (<= 255 chars, LP/MPS-safe
// alphabet). Throws listing the colliding names if sanitization collides.
std::vector<std::string> export_names(const mip::MipModel& model);

std::string export_model(const mip::MipModel& model, ModelFormat format);
mip::MipModel import_model(const std::string& text, ModelFormat format);

struct ImportedSolution {
  milp::MilpSolution solution;
  std::vector<std::string> missing;  // model variables absent from the file
};

// Accepts plain "variable value" lines and the common solver listing format
// (header lines such as "objective value: ..." are skipped). Unknown
// variables are rejected; absent ones default to zero with a warning.
ImportedSolution import_solution(const mip::MipModel& model, const std::string& text);

}  // namespace vne::model_io
