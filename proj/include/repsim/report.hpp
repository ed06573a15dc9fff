#pragma once
// Report artifacts: the pinned-parameter reference tables and schedule
// curves, scripted case-study traces, and CSV/manifest emission. Figure
// commands emit data, not images. Numbers are written in decimal with at
// least six significant digits, and a manifest records enough (command,
// parameters, seed, checksums) to regenerate every file byte-identically.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "repsim/config.hpp"
#include "repsim/sim.hpp"

namespace repsim {

constexpr int kArtifactVersion = 1;

// ---------------------------------------------------------------------------
// Number formatting

// Decimal notation, >= 6 significant digits, no exponent form. Integral
// values print bare. Stable: formatting the parse of a formatted value
// reproduces the same text.
inline std::string format_number(double x) {
  if (!std::isfinite(x)) throw IoError("non-finite value in artifact");
  if (x == 0.0) return "0";
  char buf[512];
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
  }
  const int exp10 = static_cast<int>(std::floor(std::log10(std::abs(x))));
  int precision = 5 - exp10;
  if (precision < 0) precision = 0;
  if (precision > 40) precision = 40;
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

inline std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

// ---------------------------------------------------------------------------
// Artifacts

struct ReportArtifact {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;  // parameters, seed, artifact version
};

inline std::string to_csv(const ReportArtifact& artifact) {
  std::string out;
  for (std::size_t i = 0; i < artifact.columns.size(); ++i) {
    if (i) out += ',';
    out += artifact.columns[i];
  }
  out += '\n';
  for (const auto& row : artifact.rows) {
    if (row.size() != artifact.columns.size())
      throw IoError("artifact row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

constexpr double kReferenceR = 0.45;
constexpr double kReferenceLambda = 0.001;
constexpr double kValueGrid[] = {100.0, 400.0, 800.0, 1500.0, 2500.0};

inline ReportArtifact value_table(const std::string& name, double beta) {
  ReportArtifact artifact;
  artifact.name = name;
  artifact.columns = {"value", "discounted_eta", "delta"};
  for (double x : kValueGrid) {
    const double eta = compute_eta(x, kReferenceLambda);
    const double discounted = eta / (1.0 + beta);
    const double delta = compute_delta(kReferenceR, eta, beta);
    artifact.rows.push_back({x, discounted, delta});
  }
  artifact.metadata = {{"artifact_version", kArtifactVersion},
                       {"name", name},
                       {"seed", 0},
                       {"parameters",
                        {{"r", kReferenceR},
                         {"lambda", kReferenceLambda},
                         {"beta", beta},
                         {"grid", kValueGrid}}}};
  return artifact;
}

}  // namespace detail

// Per-transaction reputation change over the reference value grid at the
// pinned operating point (R = 0.45, lambda = 0.001), undiscounted.
inline ReportArtifact emit_table3() { return detail::value_table("table3", 0.0); }

// Same grid with the pair-repetition discount at beta = 0.6.
inline ReportArtifact emit_table4() { return detail::value_table("table4", 0.6); }

// Relative weight of individual vs shared reputation as pair experience
// grows: percentages over n = 0..100 at gain rate 0.01. The weights cross at
// n = 50 and the shared weight hits zero at n = 100.
inline ReportArtifact emit_fig1() {
  ReportArtifact artifact;
  artifact.name = "fig1";
  artifact.columns = {"n", "ir_weight_pct", "sr_weight_pct"};
  const double rate = 0.01;
  for (long n = 0; n <= 100; ++n) {
    const double alpha = alpha_schedule(n, rate);
    artifact.rows.push_back(
        {static_cast<double>(n), alpha * 100.0, (1.0 - alpha) * 100.0});
  }
  artifact.metadata = {{"artifact_version", kArtifactVersion},
                       {"name", "fig1"},
                       {"seed", 0},
                       {"parameters", {{"alpha_rate", rate}, {"n_max", 100}}}};
  return artifact;
}

// Reputation change vs transaction value for the undiscounted and the
// beta = 0.6 discounted update, over a configurable grid. The undiscounted
// curve dominates pointwise.
inline ReportArtifact emit_fig2(std::span<const double> grid = detail::kValueGrid) {
  ReportArtifact artifact;
  artifact.name = "fig2";
  artifact.columns = {"value", "delta_beta_0", "delta_beta_0_6"};
  for (double x : grid) {
    const double eta = compute_eta(x, detail::kReferenceLambda);
    artifact.rows.push_back({x, compute_delta(detail::kReferenceR, eta, 0.0),
                             compute_delta(detail::kReferenceR, eta, 0.6)});
  }
  artifact.metadata = {{"artifact_version", kArtifactVersion},
                       {"name", "fig2"},
                       {"seed", 0},
                       {"parameters",
                        {{"r", detail::kReferenceR},
                         {"lambda", detail::kReferenceLambda},
                         {"betas", {0.0, 0.6}},
                         {"grid", std::vector<double>(grid.begin(), grid.end())}}}};
  return artifact;
}

// Ballot-stuffing decay: the focal pair's shared-reputation weight and
// overall reputation per transaction count, from the stuffed-start case
// study. The shared weight reaches zero at n = 100.
inline ReportArtifact emit_fig4() {
  const SimulationTrace trace = scenario_case2();
  ReportArtifact artifact;
  artifact.name = "fig4";
  artifact.columns = {"n", "sr_weight", "overall_r"};
  long n = 0;
  for (const PairSnapshot& snap : trace.snapshots) {
    artifact.rows.push_back({static_cast<double>(n), 1.0 - snap.alpha, snap.overall_r});
    ++n;
  }
  artifact.metadata = {{"artifact_version", kArtifactVersion},
                       {"name", "fig4"},
                       {"seed", 0},
                       {"parameters",
                        {{"stuffed_sr", 0.98},
                         {"transactions", 100},
                         {"alpha_rate", trace.config.params.alpha_rate},
                         {"beta_rate", trace.config.params.beta_rate}}}};
  return artifact;
}

// Value-imbalance case study: five honest transactions at 700 then one
// dishonest at 2000 from a pinned experienced pair. Conduct is encoded as
// +1 (honest) / -1 (dishonest).
inline ReportArtifact emit_case1() {
  const SimulationTrace trace = scenario_case1();
  const AgentId buyer = buyer_id(0);
  ReportArtifact artifact;
  artifact.name = "case1";
  artifact.columns = {"step", "value", "conduct", "eta", "delta", "ir", "overall_r"};
  double prev_ir = 0.35;
  for (const TraceTransaction& txn : trace.transactions) {
    double ir = 0.0, overall = 0.0;
    for (const PairSnapshot& snap : trace.snapshots)
      if (snap.tick == txn.tick && snap.buyer == buyer) {
        ir = snap.ir;
        overall = snap.overall_r;
      }
    const double eta = compute_eta(txn.value, trace.config.params.lambda);
    artifact.rows.push_back({static_cast<double>(txn.tick + 1), txn.value,
                             txn.conduct == Conduct::Honest ? 1.0 : -1.0, eta,
                             std::abs(ir - prev_ir), ir, overall});
    prev_ir = ir;
  }
  artifact.metadata = {{"artifact_version", kArtifactVersion},
                       {"name", "case1"},
                       {"seed", 0},
                       {"parameters",
                        {{"prior_transactions", 25},
                         {"starting_r", 0.35},
                         {"honest_value", 700},
                         {"dishonest_value", 2000}}}};
  return artifact;
}

// Ballot-stuffing case study: per-transaction alpha, shared weight,
// individual and overall reputation for the focal pair.
inline ReportArtifact emit_case2() {
  const SimulationTrace trace = scenario_case2();
  ReportArtifact artifact;
  artifact.name = "case2";
  artifact.columns = {"n", "alpha", "sr_weight", "ir", "overall_r"};
  long n = 0;
  for (const PairSnapshot& snap : trace.snapshots) {
    artifact.rows.push_back({static_cast<double>(n), snap.alpha, 1.0 - snap.alpha,
                             snap.ir, snap.overall_r});
    ++n;
  }
  artifact.metadata = {{"artifact_version", kArtifactVersion},
                       {"name", "case2"},
                       {"seed", 0},
                       {"parameters", {{"stuffed_sr", 0.98}, {"starting_ir", 0.18}}}};
  return artifact;
}

// ---------------------------------------------------------------------------
// File emission

struct EmittedFile {
  std::string name;
  std::uint64_t checksum = 0;
  std::size_t bytes = 0;
};

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline EmittedFile write_named_csv(const std::filesystem::path& dir,
                                   const std::string& name, std::string_view csv) {
  write_file(dir / name, csv);
  return {name, fnv1a64(csv), csv.size()};
}

inline EmittedFile write_artifact_csv(const std::filesystem::path& dir,
                                      const ReportArtifact& artifact) {
  return write_named_csv(dir, artifact.name + ".csv", to_csv(artifact));
}

// Run manifest: command, parameters, seed and a checksum per emitted file.
inline void write_manifest(const std::filesystem::path& dir, const std::string& command,
                           const nlohmann::json& parameters, std::uint64_t seed,
                           const std::vector<EmittedFile>& files) {
  nlohmann::json manifest{{"artifact_version", kArtifactVersion},
                          {"command", command},
                          {"parameters", parameters},
                          {"seed", seed}};
  auto& file_map = manifest["files"] = nlohmann::json::object();
  for (const EmittedFile& f : files)
    file_map[f.name] = {{"fnv1a64", hex64(f.checksum)}, {"bytes", f.bytes}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Trace export

inline std::string transactions_csv(const SimulationTrace& trace) {
  std::string out = "tick,buyer,seller,value,conduct,reported,forced\n";
  for (const TraceTransaction& t : trace.transactions) {
    out += format_number(static_cast<double>(t.tick));
    out += ',';
    out += to_string(t.buyer);
    out += ',';
    out += to_string(t.seller);
    out += ',';
    out += format_number(t.value);
    out += ',';
    out += to_string(t.conduct);
    out += ',';
    out += to_string(t.reported);
    out += ',';
    out += t.forced ? "1" : "0";
    out += '\n';
  }
  return out;
}

inline std::string reputations_csv(const SimulationTrace& trace) {
  std::string out = "tick,buyer,seller,overall_r,alpha,beta,ir\n";
  for (const PairSnapshot& s : trace.snapshots) {
    out += format_number(static_cast<double>(s.tick));
    out += ',';
    out += to_string(s.buyer);
    out += ',';
    out += to_string(s.seller);
    out += ',';
    out += format_number(s.overall_r);
    out += ',';
    out += format_number(s.alpha);
    out += ',';
    out += format_number(s.beta);
    out += ',';
    out += format_number(s.ir);
    out += '\n';
  }
  return out;
}

inline std::string market_share_csv(const SimulationTrace& trace) {
  std::string out = "tick,seller,wins_cumulative,share_cumulative\n";
  for (const ShareRecord& s : trace.shares) {
    out += format_number(static_cast<double>(s.tick));
    out += ',';
    out += to_string(s.seller);
    out += ',';
    out += format_number(static_cast<double>(s.wins_cumulative));
    out += ',';
    out += format_number(s.share_cumulative);
    out += '\n';
  }
  return out;
}

inline std::string attack_events_csv(const SimulationTrace& trace) {
  std::string out = "tick,class,actor,target,detail\n";
  for (const AttackEvent& e : trace.attack_events) {
    out += format_number(static_cast<double>(e.tick));
    out += ',';
    out += to_string(e.cls);
    out += ',';
    out += to_string(e.actor);
    out += ',';
    out += e.target ? to_string(*e.target) : std::string();
    out += ',';
    out += e.detail;
    out += '\n';
  }
  return out;
}

// Writes the four trace files and returns their manifest entries.
inline std::vector<EmittedFile> write_trace_csvs(const std::filesystem::path& dir,
                                                 const SimulationTrace& trace) {
  std::vector<EmittedFile> files;
  files.push_back(write_named_csv(dir, "transactions.csv", transactions_csv(trace)));
  files.push_back(write_named_csv(dir, "reputations.csv", reputations_csv(trace)));
  files.push_back(write_named_csv(dir, "market_share.csv", market_share_csv(trace)));
  files.push_back(write_named_csv(dir, "attack_events.csv", attack_events_csv(trace)));
  return files;
}

}  // namespace repsim
