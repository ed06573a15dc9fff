// Command-line surface for the reputation market simulator: reference-table
// and schedule-curve reproduction, scripted case studies, custom scenario
// runs from JSON configs, and single-parameter sweeps. Every command writes
// CSV artifacts plus a manifest with checksums; identical inputs produce
// byte-identical outputs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "repsim/repsim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

fs::path ensure_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw repsim::IoError("cannot create output directory '" + dir + "': " + ec.message());
  // Probe writability up front so failures map to one diagnostic.
  const fs::path probe = path / ".repsim_probe";
  {
    std::ofstream out(probe, std::ios::binary);
    if (!out) throw repsim::IoError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return path;
}

void emit_artifact(const std::string& out_dir, const repsim::ReportArtifact& artifact) {
  const fs::path dir = ensure_dir(out_dir);
  const repsim::EmittedFile file = repsim::write_artifact_csv(dir, artifact);
  repsim::write_manifest(dir, artifact.name, artifact.metadata["parameters"],
                         artifact.metadata.value("seed", 0), {file});
  std::cout << "wrote " << (dir / file.name).string() << "\n";
}

void run_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                  const std::string& out_dir) {
  repsim::ScenarioConfig config = repsim::load_scenario(config_path);
  if (seed) config.seed = *seed;
  const fs::path dir = ensure_dir(out_dir);
  const repsim::SimulationTrace trace = repsim::run_scenario(config);
  const std::vector<repsim::EmittedFile> files = repsim::write_trace_csvs(dir, trace);
  repsim::write_manifest(dir, "simulate", nlohmann::json(config), config.seed, files);
  std::cout << "wrote " << files.size() << " trace files to " << dir.string() << "\n";
}

void run_sweep(const std::string& config_path, const std::string& param,
               std::vector<double> values, const std::string& out_dir) {
  if (values.empty()) throw repsim::ConfigError("sweep needs at least one value");
  std::sort(values.begin(), values.end());

  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw repsim::IoError("cannot open config file '" + config_path + "'");
  nlohmann::json base;
  try {
    base = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw repsim::ConfigError(std::string("malformed config JSON: ") + e.what());
  }

  std::string pointer = "/" + param;
  std::replace(pointer.begin(), pointer.end(), '.', '/');

  const fs::path dir = ensure_dir(out_dir);
  std::string summary = "param,value,seller,final_reputation,final_share\n";
  for (double value : values) {
    nlohmann::json doc = base;
    try {
      doc[nlohmann::json::json_pointer(pointer)] = value;
    } catch (const nlohmann::json::exception& e) {
      throw repsim::ConfigError("cannot set sweep parameter '" + param + "': " + e.what());
    }
    const repsim::ScenarioConfig config = repsim::parse_scenario(doc.dump());
    const repsim::SimulationTrace trace = repsim::run_scenario(config);

    std::string run_name = param + "_" + repsim::format_number(value);
    std::replace(run_name.begin(), run_name.end(), '.', '_');
    const fs::path run_dir = ensure_dir((dir / run_name).string());
    const std::vector<repsim::EmittedFile> files = repsim::write_trace_csvs(run_dir, trace);
    repsim::write_manifest(run_dir, "simulate", nlohmann::json(config), config.seed, files);

    // Final standing per seller identity, in slot order.
    std::vector<repsim::AgentId> sellers;
    for (const auto& rec : trace.shares) {
      bool seen = false;
      for (const auto& s : sellers) seen = seen || s == rec.seller;
      if (!seen) sellers.push_back(rec.seller);
    }
    for (const auto& seller : sellers) {
      summary += param;
      summary += ',';
      summary += repsim::format_number(value);
      summary += ',';
      summary += repsim::to_string(seller);
      summary += ',';
      summary += repsim::format_number(repsim::final_mean_reputation(trace, seller));
      summary += ',';
      summary += repsim::format_number(repsim::final_market_share(trace, seller));
      summary += '\n';
    }
  }
  const repsim::EmittedFile summary_file =
      repsim::write_named_csv(dir, "sweep_summary.csv", summary);
  repsim::write_manifest(dir, "sweep",
                         nlohmann::json{{"config", config_path},
                                        {"param", param},
                                        {"values", values}},
                         0, {summary_file});
  std::cout << "wrote sweep results for " << values.size() << " values to "
            << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reputation market simulator: experience-weighted dynamic "
               "reputation engine, commercial scoring baselines, and an "
               "adversary suite over a deterministic e-market loop."};
  app.require_subcommand(1);

  struct TableCmd {
    const char* name;
    const char* help;
    repsim::ReportArtifact (*emit)();
  };
  const TableCmd table_cmds[] = {
      {"table3", "Reputation change vs transaction value, undiscounted", repsim::emit_table3},
      {"table4", "Reputation change vs transaction value, discounted (beta=0.6)",
       repsim::emit_table4},
      {"fig1", "Individual/shared weight schedule vs pair experience", repsim::emit_fig1},
      {"fig2", "Reputation change curves for beta=0 and beta=0.6", []() {
         return repsim::emit_fig2();
       }},
      {"fig4", "Ballot-stuffing decay under repeat transactions", repsim::emit_fig4},
      {"case1", "Value-imbalance case study (five honest, one large cheat)",
       repsim::emit_case1},
      {"case2", "Ballot-stuffing case study (stuffed shared reputation)",
       repsim::emit_case2},
  };

  std::string out_dir = ".";
  for (const TableCmd& cmd : table_cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->callback([&out_dir, &cmd]() { emit_artifact(out_dir, cmd.emit()); });
  }

  std::string config_path;
  std::optional<std::uint64_t> seed;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a scenario config");
  simulate->add_option("--config", config_path, "Scenario JSON document")->required();
  simulate->add_option("--seed", seed, "Override the config's RNG seed");
  simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
  simulate->callback([&]() { run_simulate(config_path, seed, out_dir); });

  std::string sweep_param;
  std::vector<double> sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario across parameter values");
  sweep->add_option("--config", config_path, "Scenario JSON document")->required();
  sweep->add_option("--param", sweep_param, "Dotted config path, e.g. params.lambda")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory")->capture_default_str();
  sweep->callback([&]() { run_sweep(config_path, sweep_param, sweep_values, out_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const repsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const repsim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
