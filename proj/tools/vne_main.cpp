#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "vne/engine.hpp"
#include "vne/json_io.hpp"
#include "vne/mip.hpp"
#include "vne/model_io.hpp"
#include "vne/scenario.hpp"

namespace {

using vne::json_io::json;

struct SolverFlags {
  bool deterministic = false;
  int workers = 1;
  double time_limit = -1;
  double mip_gap = 0;
  bool feasibility_only = false;
  double tolerance = 1e-6;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--deterministic", deterministic,
                  "fixed node order and branching; forces one worker");
    cmd->add_option("--workers", workers, "worker threads (non-deterministic mode)");
    cmd->add_option("--time-limit", time_limit, "solver time limit in seconds");
    cmd->add_option("--mip-gap", mip_gap, "relative optimality gap (default 0)");
    cmd->add_flag("--feasibility-only", feasibility_only, "stop at the first incumbent");
    cmd->add_option("--tolerance", tolerance, "integrality/feasibility tolerance");
  }

  vne::milp::SolverConfig config() const {
    vne::milp::SolverConfig out;
    out.deterministic = deterministic;
    out.workers = workers;
    if (time_limit > 0) out.time_limit_seconds = time_limit;
    out.mip_gap = mip_gap;
    out.feasibility_only = feasibility_only;
    out.tolerance = tolerance;
    return out;
  }
};

vne::ObjectiveConfig objective_from_flag(const std::string& name) {
  if (name == "resource") return {vne::ObjectiveKind::ResourceMin, -1.0};
  if (name == "load") return {vne::ObjectiveKind::LoadBalance, -1.0};
  throw vne::Error("--objective must be 'resource' or 'load'");
}

std::set<std::string> read_subset(const std::string& path) {
  std::string text = vne::json_io::read_text_file(path);
  std::set<std::string> subset;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    for (const auto& id : json::parse(text)) subset.insert(id.get<std::string>());
  } else {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string id;
      while (ls >> id) subset.insert(id);
    }
  }
  return subset;
}

void print_doc(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    vne::json_io::write_text_file(out_path, doc.dump(2) + "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CloudNet embedding engine: builds and solves the embedding MIP"};
  app.require_subcommand(1);

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "embed a request against a state");
  std::string embed_state, embed_request, embed_objective = "resource";
  std::string embed_out, embed_save_state;
  SolverFlags embed_solver;
  embed_cmd->add_option("--state", embed_state, "state document")->required();
  embed_cmd->add_option("--request", embed_request, "request document")->required();
  embed_cmd->add_option("--objective", embed_objective, "load | resource");
  embed_cmd->add_option("--out", embed_out, "output file (default stdout)");
  embed_cmd->add_option("--save-state", embed_save_state,
                        "write the state with the embedding committed");
  embed_solver.attach(embed_cmd);

  // reembed
  auto* reembed_cmd = app.add_subcommand("reembed", "migration-aware re-optimization plan");
  std::string reembed_state, reembed_objective = "resource", reembed_out;
  std::string reembed_save_state;
  double reembed_penalty = 1.0, reembed_transit = 0.0;
  SolverFlags reembed_solver;
  reembed_cmd->add_option("--state", reembed_state, "state document")->required();
  reembed_cmd->add_option("--objective", reembed_objective, "load | resource");
  reembed_cmd->add_option("--node-penalty", reembed_penalty,
                          "default destination-independent migration penalty");
  reembed_cmd->add_option("--transit", reembed_transit,
                          "default transit cost to non-current locations");
  reembed_cmd->add_option("--out", reembed_out, "output file (default stdout)");
  reembed_cmd->add_option("--save-state", reembed_save_state,
                          "apply beneficial plan entries and write the state");
  reembed_solver.attach(reembed_cmd);

  // whatif
  auto* whatif_cmd = app.add_subcommand("whatif", "re-solve on a substrate subset");
  std::string whatif_state, whatif_subset_file, whatif_objective = "resource", whatif_out;
  SolverFlags whatif_solver;
  whatif_cmd->add_option("--state", whatif_state, "state document")->required();
  whatif_cmd->add_option("--subset", whatif_subset_file,
                         "allowed substrate element ids (JSON array or lines)")
      ->required();
  whatif_cmd->add_option("--objective", whatif_objective, "load | resource");
  whatif_cmd->add_option("--out", whatif_out, "output file (default stdout)");
  whatif_solver.attach(whatif_cmd);

  // experiment
  auto* experiment_cmd = app.add_subcommand("experiment", "seeded scenario runs");
  std::string experiment_config, experiment_dir = ".";
  long long experiment_seed = -1;
  bool experiment_deterministic = false;
  experiment_cmd->add_option("--config", experiment_config,
                             "scenario config (default: $VNE_CONFIG)");
  experiment_cmd->add_option("--out", experiment_dir, "output directory");
  experiment_cmd->add_option("--seed", experiment_seed, "override the config seed");
  experiment_cmd->add_flag("--deterministic", experiment_deterministic,
                           "force the deterministic solver");

  // export-model
  auto* export_cmd = app.add_subcommand("export-model", "write the MIP as LP/MPS text");
  std::string export_problem, export_format = "lp", export_out;
  export_cmd->add_option("--problem", export_problem, "problem document")->required();
  export_cmd->add_option("--format", export_format, "lp | mps");
  export_cmd->add_option("--out", export_out, "output file (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check an embedding document");
  std::string verify_state, verify_embedding, verify_request;
  verify_cmd->add_option("--state", verify_state, "state document")->required();
  verify_cmd->add_option("--embedding", verify_embedding, "embedding document")->required();
  verify_cmd->add_option("--request", verify_request,
                         "request document (defaults to the committed one)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "structural problem validation");
  std::string validate_problem;
  validate_cmd->add_option("--problem", validate_problem, "problem document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*embed_cmd) {
      vne::engine::SubstrateState state =
          vne::json_io::parse_state(vne::json_io::load_json_file(embed_state));
      std::vector<std::string> substrate_ids;
      for (const auto& element : state.substrate().elements) {
        substrate_ids.push_back(element.id);
      }
      json request_doc = vne::json_io::load_json_file(embed_request);
      const json* policies =
          request_doc.contains("policies") ? &request_doc.at("policies") : nullptr;
      vne::engine::Request request =
          vne::json_io::parse_request(request_doc, policies, substrate_ids);
      vne::engine::EmbedOutcome outcome =
          vne::engine::embed(state, request, objective_from_flag(embed_objective),
                             embed_solver.config());
      if (!outcome.accepted()) {
        print_doc(vne::json_io::rejection_to_json(*outcome.rejection), embed_out);
        return 1;
      }
      print_doc(vne::json_io::embedding_to_json(*outcome.embedding), embed_out);
      if (!embed_save_state.empty()) {
        state.commit(request, *outcome.embedding);
        vne::json_io::write_text_file(
            embed_save_state, vne::json_io::state_to_json(state).dump(2) + "\n");
      }
      return 0;
    }

    if (*reembed_cmd) {
      vne::engine::SubstrateState state =
          vne::json_io::parse_state(vne::json_io::load_json_file(reembed_state));
      vne::engine::MigrationInputs inputs;
      inputs.default_node_penalty = reembed_penalty;
      inputs.default_transit = reembed_transit;
      vne::engine::ReembedPlan plan =
          vne::engine::reembed(state, objective_from_flag(reembed_objective), inputs,
                               reembed_solver.config());
      print_doc(vne::json_io::plan_to_json(plan), reembed_out);
      if (!reembed_save_state.empty()) {
        vne::engine::apply_plan(state, plan);
        vne::json_io::write_text_file(
            reembed_save_state, vne::json_io::state_to_json(state).dump(2) + "\n");
      }
      return 0;
    }

    if (*whatif_cmd) {
      vne::engine::SubstrateState state =
          vne::json_io::parse_state(vne::json_io::load_json_file(whatif_state));
      std::set<std::string> subset = read_subset(whatif_subset_file);
      vne::engine::WhatIfResult result =
          vne::engine::whatif_subset(state, subset,
                                     objective_from_flag(whatif_objective),
                                     whatif_solver.config());
      print_doc(vne::json_io::whatif_to_json(result), whatif_out);
      return 0;
    }

    if (*experiment_cmd) {
      if (experiment_config.empty()) {
        const char* env = std::getenv("VNE_CONFIG");
        if (!env || !*env) {
          throw vne::Error("experiment: no --config and VNE_CONFIG is unset");
        }
        experiment_config = env;
      }
      json config_doc = vne::json_io::load_json_file(experiment_config);
      vne::scenario::ScenarioConfig config = vne::scenario::parse_config(config_doc);
      if (experiment_seed >= 0) {
        config.seed = static_cast<std::uint64_t>(experiment_seed);
      } else if (!config_doc.contains("seed")) {
        std::random_device rd;
        config.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::cerr << "seed: " << config.seed << " (no --seed given; use this to replay)\n";
      }
      if (experiment_deterministic) config.solver.deterministic = true;
      if (!config.topology_file.empty() &&
          !std::filesystem::path(config.topology_file).is_absolute()) {
        config.topology_file =
            (std::filesystem::path(experiment_config).parent_path() /
             config.topology_file)
                .string();
      }
      vne::scenario::ExperimentResult result = vne::scenario::run_experiment(config);
      std::filesystem::create_directories(experiment_dir);
      vne::json_io::write_text_file(
          experiment_dir + "/metrics.csv",
          vne::scenario::emit_metrics(result.records,
                                      vne::scenario::MetricsFormat::CsvTable));
      vne::json_io::write_text_file(
          experiment_dir + "/metrics.jsonl",
          vne::scenario::emit_metrics(result.records,
                                      vne::scenario::MetricsFormat::JsonLines));
      json summary{{"accepted", result.accepted},
                   {"records", result.records.size()},
                   {"mean_wall_ms", result.mean_wall_ms},
                   {"median_wall_ms", result.median_wall_ms},
                   {"max_wall_ms", result.max_wall_ms},
                   {"seed", config.seed}};
      vne::json_io::write_text_file(experiment_dir + "/summary.json",
                                    summary.dump(2) + "\n");
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*export_cmd) {
      vne::EmbeddingProblem problem =
          vne::json_io::parse_problem(vne::json_io::load_json_file(export_problem));
      vne::ValidationReport report = vne::validate_problem(problem);
      if (!report.clean()) {
        std::cerr << "problem is not valid:\n" << report.to_text();
        return 2;
      }
      vne::model_io::ModelFormat format;
      if (export_format == "lp") {
        format = vne::model_io::ModelFormat::LpText;
      } else if (export_format == "mps") {
        format = vne::model_io::ModelFormat::MpsText;
      } else {
        throw vne::Error("--format must be 'lp' or 'mps'");
      }
      std::string text = vne::model_io::export_model(vne::mip::build(problem), format);
      if (export_out.empty()) {
        std::cout << text;
      } else {
        vne::json_io::write_text_file(export_out, text);
      }
      return 0;
    }

    if (*verify_cmd) {
      vne::engine::SubstrateState state =
          vne::json_io::parse_state(vne::json_io::load_json_file(verify_state));
      vne::engine::Embedding embedding =
          vne::json_io::parse_embedding(vne::json_io::load_json_file(verify_embedding));
      vne::engine::Request request;
      if (!verify_request.empty()) {
        std::vector<std::string> substrate_ids;
        for (const auto& element : state.substrate().elements) {
          substrate_ids.push_back(element.id);
        }
        json request_doc = vne::json_io::load_json_file(verify_request);
        const json* policies =
            request_doc.contains("policies") ? &request_doc.at("policies") : nullptr;
        request = vne::json_io::parse_request(request_doc, policies, substrate_ids);
      } else {
        auto it = state.committed().find(embedding.request_id);
        if (it == state.committed().end()) {
          throw vne::Error("verify: request '" + embedding.request_id +
                           "' is not committed; pass --request");
        }
        request = it->second.request;
      }
      vne::engine::CheckReport report =
          vne::engine::verify_embedding(state, request, embedding);
      print_doc(vne::json_io::check_report_to_json(report), "");
      return report.clean() ? 0 : 1;
    }

    if (*validate_cmd) {
      vne::EmbeddingProblem problem =
          vne::json_io::parse_problem(vne::json_io::load_json_file(validate_problem));
      vne::ValidationReport report = vne::validate_problem(problem);
      print_doc(vne::json_io::validation_report_to_json(report), "");
      return report.clean() ? 0 : 1;
    }
  } catch (const vne::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
