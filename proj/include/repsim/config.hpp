#pragma once
// JSON scenario documents: a versioned schema covering the market shape,
// model choice, tuning parameters, seller profiles, value distribution and
// attack list. Parsing validates; serializing a parsed config round-trips.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "repsim/sim.hpp"

namespace repsim {

namespace detail {

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "drs") return ModelKind::Drs;
  if (s == "ebay_sum") return ModelKind::EbaySum;
  if (s == "amazon_avg") return ModelKind::AmazonAvg;
  throw ConfigError("unknown model kind '" + s + "'");
}

inline AttackClass attack_class_from_string(const std::string& s) {
  if (s == "ballot_stuffing") return AttackClass::BallotStuffing;
  if (s == "badmouthing") return AttackClass::Badmouthing;
  if (s == "reciprocity") return AttackClass::Reciprocity;
  if (s == "retaliation") return AttackClass::Retaliation;
  if (s == "reentry") return AttackClass::Reentry;
  if (s == "reputation_lag") return AttackClass::ReputationLag;
  if (s == "value_imbalance") return AttackClass::ValueImbalance;
  if (s == "sudden_exit") return AttackClass::SuddenExit;
  if (s == "multiple_identity") return AttackClass::MultipleIdentity;
  throw ConfigError("unknown attack class '" + s + "'");
}

inline AgentId agent_from_json(const nlohmann::json& j) {
  AgentId id;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "buyer")
    id.kind = AgentKind::Buyer;
  else if (kind == "seller")
    id.kind = AgentKind::Seller;
  else
    throw ConfigError("agent kind must be 'buyer' or 'seller'");
  id.index = j.at("index").get<int>();
  id.incarnation = j.value("incarnation", 0);
  return id;
}

inline nlohmann::json agent_to_json(const AgentId& id) {
  nlohmann::json j{{"kind", to_string(id.kind)}, {"index", id.index}};
  if (id.incarnation != 0) j["incarnation"] = id.incarnation;
  return j;
}

}  // namespace detail

inline void from_json(const nlohmann::json& j, ReputationParams& p) {
  p.alpha_rate = j.value("alpha_rate", p.alpha_rate);
  p.beta_rate = j.value("beta_rate", p.beta_rate);
  p.beta_max = j.value("beta_max", p.beta_max);
  p.lambda = j.value("lambda", p.lambda);
  p.r_min = j.value("r_min", p.r_min);
  p.r_max = j.value("r_max", p.r_max);
  p.r_initial = j.value("r_initial", p.r_initial);
  p.sr_default = j.value("sr_default", p.sr_default);
}

inline void to_json(nlohmann::json& j, const ReputationParams& p) {
  j = nlohmann::json{{"alpha_rate", p.alpha_rate}, {"beta_rate", p.beta_rate},
                     {"beta_max", p.beta_max},     {"lambda", p.lambda},
                     {"r_min", p.r_min},           {"r_max", p.r_max},
                     {"r_initial", p.r_initial},   {"sr_default", p.sr_default}};
}

inline void from_json(const nlohmann::json& j, ValueDistribution& v) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fixed") {
    v.kind = ValueDistribution::Kind::Fixed;
    v.value = j.at("value").get<double>();
  } else if (kind == "uniform") {
    v.kind = ValueDistribution::Kind::Uniform;
    v.low = j.at("low").get<double>();
    v.high = j.at("high").get<double>();
  } else if (kind == "discrete") {
    v.kind = ValueDistribution::Kind::Discrete;
    v.choices = j.at("values").get<std::vector<double>>();
  } else {
    throw ConfigError("unknown value distribution kind '" + kind + "'");
  }
}

inline void to_json(nlohmann::json& j, const ValueDistribution& v) {
  switch (v.kind) {
    case ValueDistribution::Kind::Fixed:
      j = nlohmann::json{{"kind", "fixed"}, {"value", v.value}};
      return;
    case ValueDistribution::Kind::Uniform:
      j = nlohmann::json{{"kind", "uniform"}, {"low", v.low}, {"high", v.high}};
      return;
    case ValueDistribution::Kind::Discrete:
      j = nlohmann::json{{"kind", "discrete"}, {"values", v.choices}};
      return;
  }
}

inline void from_json(const nlohmann::json& j, SellerProfile& p) {
  const std::string policy = j.at("policy").get<std::string>();
  if (policy == "honest") {
    p.kind = SellerProfile::Kind::AlwaysHonest;
  } else if (policy == "dishonest") {
    p.kind = SellerProfile::Kind::AlwaysDishonest;
  } else if (policy == "probabilistic") {
    p.kind = SellerProfile::Kind::Probabilistic;
    p.p_honest = j.at("p_honest").get<double>();
  } else if (policy == "attack_driven") {
    p.kind = SellerProfile::Kind::AttackDriven;
  } else {
    throw ConfigError("unknown seller policy '" + policy + "'");
  }
}

inline void to_json(nlohmann::json& j, const SellerProfile& p) {
  switch (p.kind) {
    case SellerProfile::Kind::AlwaysHonest: j = {{"policy", "honest"}}; return;
    case SellerProfile::Kind::AlwaysDishonest: j = {{"policy", "dishonest"}}; return;
    case SellerProfile::Kind::Probabilistic:
      j = {{"policy", "probabilistic"}, {"p_honest", p.p_honest}};
      return;
    case SellerProfile::Kind::AttackDriven: j = {{"policy", "attack_driven"}}; return;
  }
}

inline void from_json(const nlohmann::json& j, AttackSpec& a) {
  a.cls = detail::attack_class_from_string(j.at("class").get<std::string>());
  a.actors.clear();
  for (const auto& actor : j.at("actors")) a.actors.push_back(detail::agent_from_json(actor));
  if (j.contains("target")) a.target = detail::agent_from_json(j.at("target"));
  const auto& window = j.at("window");
  a.window_start = window.at(0).get<long>();
  a.window_end = window.at(1).get<long>();
  if (j.contains("params")) {
    const auto& params = j.at("params");
    a.params.threshold = params.value("threshold", a.params.threshold);
    a.params.n_identities = params.value("n_identities", a.params.n_identities);
    a.params.dishonest_identities = params.value("dishonest_identities",
                                                 a.params.dishonest_identities);
    a.params.report_delay = params.value("report_delay", a.params.report_delay);
  }
}

inline void to_json(nlohmann::json& j, const AttackSpec& a) {
  j = nlohmann::json{{"class", to_string(a.cls)},
                     {"window", {a.window_start, a.window_end}}};
  auto& actors = j["actors"] = nlohmann::json::array();
  for (const AgentId& actor : a.actors) actors.push_back(detail::agent_to_json(actor));
  if (a.target) j["target"] = detail::agent_to_json(*a.target);
  nlohmann::json params;
  if (a.params.threshold != 0.0) params["threshold"] = a.params.threshold;
  if (a.params.n_identities != 0) params["n_identities"] = a.params.n_identities;
  if (!a.params.dishonest_identities.empty())
    params["dishonest_identities"] = a.params.dishonest_identities;
  if (a.params.report_delay != 0) params["report_delay"] = a.params.report_delay;
  if (!params.empty()) j["params"] = params;
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& c) {
  c.version = j.value("version", 1);
  c.n_buyers = j.at("n_buyers").get<int>();
  c.n_sellers = j.at("n_sellers").get<int>();
  c.ticks = j.at("ticks").get<long>();
  c.seed = j.value("seed", std::uint64_t{0});
  c.model = detail::model_kind_from_string(j.value("model", std::string("drs")));
  if (j.contains("params")) c.params = j.at("params").get<ReputationParams>();
  c.epsilon = j.value("epsilon", c.epsilon);
  c.reporting_delay = j.value("reporting_delay", c.reporting_delay);
  if (j.contains("value_distribution"))
    c.values = j.at("value_distribution").get<ValueDistribution>();
  c.seller_profiles.clear();
  if (j.contains("seller_profiles"))
    c.seller_profiles = j.at("seller_profiles").get<std::vector<SellerProfile>>();
  c.attacks.clear();
  if (j.contains("attacks")) c.attacks = j.at("attacks").get<std::vector<AttackSpec>>();
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  j = nlohmann::json{{"version", c.version},
                     {"n_buyers", c.n_buyers},
                     {"n_sellers", c.n_sellers},
                     {"ticks", c.ticks},
                     {"seed", c.seed},
                     {"model", to_string(c.model)},
                     {"params", c.params},
                     {"epsilon", c.epsilon},
                     {"reporting_delay", c.reporting_delay},
                     {"value_distribution", c.values},
                     {"seller_profiles", c.seller_profiles},
                     {"attacks", c.attacks}};
}

// Parses and validates a scenario document. Malformed JSON, unknown fields'
// values, and semantic violations all surface as ConfigError.
inline ScenarioConfig parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  ScenarioConfig config;
  try {
    config = j.get<ScenarioConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config document: ") + e.what());
  }
  config.validate();
  return config;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace repsim
