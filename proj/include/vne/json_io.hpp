#pragma once

#include <string>

#include <json.hpp>

#include "vne/engine.hpp"
#include "vne/model.hpp"

namespace vne::json_io {

using nlohmann::json;

// Full problem document: resources, substrate, request, policies, migration,
// prop, objective. See docs/problem.schema.json.
EmbeddingProblem parse_problem(const json& doc);
json problem_to_json(const EmbeddingProblem& problem);

// Pieces, reusable for state/request documents.
std::vector<ResourceType> parse_resources(const json& section);
SubstrateGraph parse_substrate(const json& section);
engine::Request parse_request(const json& request_section, const json* policies_section,
                              const std::vector<std::string>& substrate_ids);
MigrationContext parse_migration(const json& section);
ObjectiveConfig parse_objective(const json& section);

json resources_to_json(const std::vector<ResourceType>& resources);
json substrate_to_json(const SubstrateGraph& substrate);
json request_to_json(const engine::Request& request);
json objective_to_json(const ObjectiveConfig& objective);

engine::SubstrateState parse_state(const json& doc);
json state_to_json(const engine::SubstrateState& state);

engine::Embedding parse_embedding(const json& doc);
json embedding_to_json(const engine::Embedding& embedding);
json rejection_to_json(const engine::Rejection& rejection);
json plan_to_json(const engine::ReembedPlan& plan);
json whatif_to_json(const engine::WhatIfResult& result);
json check_report_to_json(const engine::CheckReport& report);
json validation_report_to_json(const ValidationReport& report);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace vne::json_io
