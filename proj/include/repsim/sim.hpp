#pragma once
// Deterministic tick-based e-market loop. Per tick every buyer picks a
// seller (epsilon-greedy on queryable reputation), a transaction value is
// sampled, the seller's conduct resolves through its profile and any active
// attack policy, and the reputation model ingests the resulting rating.
// Identical (config, seed) pairs replay bit-identically.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repsim/attacks.hpp"
#include "repsim/baselines.hpp"
#include "repsim/core.hpp"
#include "repsim/drs.hpp"
#include "repsim/rng.hpp"

namespace repsim {

// ---------------------------------------------------------------------------
// Scenario configuration

struct ValueDistribution {
  enum class Kind { Fixed, Uniform, Discrete };

  Kind kind = Kind::Fixed;
  double value = 100.0;            // Fixed
  double low = 0.0, high = 1.0;    // Uniform
  std::vector<double> choices;     // Discrete

  double sample(Rng& rng) const {
    switch (kind) {
      case Kind::Fixed: return value;
      case Kind::Uniform: return rng.uniform(low, high);
      case Kind::Discrete: return choices[rng.below(choices.size())];
    }
    throw ConfigError("unknown value distribution");
  }

  void validate() const {
    switch (kind) {
      case Kind::Fixed:
        if (!(value >= 0.0)) throw ConfigError("fixed transaction value must be non-negative");
        return;
      case Kind::Uniform:
        if (!(low >= 0.0) || !(high >= low))
          throw ConfigError("uniform value range must satisfy 0 <= low <= high");
        return;
      case Kind::Discrete:
        if (choices.empty()) throw ConfigError("discrete value set is empty");
        for (double v : choices)
          if (!(v >= 0.0)) throw ConfigError("discrete transaction values must be non-negative");
        return;
    }
    throw ConfigError("unknown value distribution");
  }

  bool operator==(const ValueDistribution&) const = default;
};

struct SellerProfile {
  enum class Kind { AlwaysHonest, AlwaysDishonest, Probabilistic, AttackDriven };

  Kind kind = Kind::AlwaysHonest;
  double p_honest = 1.0;  // Probabilistic only

  bool operator==(const SellerProfile&) const = default;
};

struct ScenarioConfig {
  int version = 1;
  int n_buyers = 1;
  int n_sellers = 1;
  long ticks = 0;
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::Drs;
  ReputationParams params;
  double epsilon = 0.1;        // exploration fraction for seller selection
  long reporting_delay = 0;    // ticks before a rating reaches the model
  ValueDistribution values;
  std::vector<SellerProfile> seller_profiles;  // by seller index; missing entries are honest
  std::vector<AttackSpec> attacks;

  void validate() const {
    if (version != 1) throw ConfigError("unsupported config version");
    if (n_buyers < 1) throw ConfigError("need at least one buyer");
    if (n_sellers < 1) throw ConfigError("need at least one seller");
    if (ticks < 0) throw ConfigError("ticks must be non-negative");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon outside [0,1]");
    if (reporting_delay < 0) throw ConfigError("reporting delay must be non-negative");
    params.validate();
    values.validate();
    if (seller_profiles.size() > static_cast<std::size_t>(n_sellers))
      throw ConfigError("more seller profiles than sellers");
    for (const SellerProfile& p : seller_profiles)
      if (p.kind == SellerProfile::Kind::Probabilistic &&
          !(p.p_honest >= 0.0 && p.p_honest <= 1.0))
        throw ConfigError("profile honesty probability outside [0,1]");
    for (const AttackSpec& a : attacks) {
      a.validate();
      auto known = [&](const AgentId& id) {
        if (id.incarnation != 0) return false;  // configs reference first incarnations
        return id.kind == AgentKind::Buyer ? id.index >= 0 && id.index < n_buyers
                                           : id.index >= 0 && id.index < n_sellers;
      };
      for (const AgentId& actor : a.actors)
        if (!known(actor)) throw ConfigError("attack actor " + to_string(actor) + " does not exist");
      if (a.target && !known(*a.target))
        throw ConfigError("attack target " + to_string(*a.target) + " does not exist");
    }
  }

  bool operator==(const ScenarioConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Trace

struct TraceTransaction {
  long tick = 0;
  AgentId buyer;
  AgentId seller;
  double value = 0.0;
  Conduct conduct = Conduct::Honest;   // what was delivered
  Conduct reported = Conduct::Honest;  // what the buyer reported
  bool forced = false;                 // seller choice forced by an attack
};

struct TraceRating {
  long apply_tick = 0;  // tick at which the model ingested it
  Rating rating;
};

struct PairSnapshot {
  long tick = 0;
  AgentId buyer;
  AgentId seller;
  double overall_r = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double ir = 0.0;
};

struct AttackEvent {
  long tick = 0;
  AttackClass cls = AttackClass::BallotStuffing;
  AgentId actor;
  std::optional<AgentId> target;
  std::string detail;
};

struct ShareRecord {
  long tick = 0;
  AgentId seller;
  long wins_cumulative = 0;
  double share_cumulative = 0.0;
};

// Time-indexed record of everything a run did. Ratings appear in the order
// the model ingested them, so replaying them into a fresh model reproduces
// the final reputations.
struct SimulationTrace {
  ScenarioConfig config;
  std::vector<TraceTransaction> transactions;
  std::vector<TraceRating> ratings;
  std::vector<PairSnapshot> snapshots;     // end-of-tick, every buyer x seller identity
  std::vector<AttackEvent> attack_events;
  std::vector<ShareRecord> shares;         // end-of-tick, every seller identity
};

// ---------------------------------------------------------------------------
// Seller selection

// Epsilon-greedy: with probability epsilon a uniform pick, otherwise the
// highest-reputation seller with ties broken toward the lowest index.
// Consumes one uniform draw always and one index draw only when exploring.
template <class RepFn>
AgentId matching_rule(const AgentId&, std::span<const AgentId> sellers,
                      RepFn&& reputation_of, double epsilon, Rng& rng) {
  if (sellers.empty()) throw ConfigError("matching_rule: no sellers to choose from");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ConfigError("matching_rule: epsilon outside [0,1]");
  const double u = rng.unit();
  if (u < epsilon) return sellers[rng.below(sellers.size())];
  AgentId best = sellers[0];
  double best_r = reputation_of(sellers[0]);
  for (std::size_t i = 1; i < sellers.size(); ++i) {
    const double r = reputation_of(sellers[i]);
    if (r > best_r) {
      best = sellers[i];
      best_r = r;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Market loop

namespace detail {

struct SellerSlot {
  int index = 0;
  int incarnation = 0;
  bool active = true;
  SellerProfile profile;
  long wins = 0;

  AgentId id() const { return seller_id(index, incarnation); }
};

class Simulation {
 public:
  explicit Simulation(ScenarioConfig config) : config_(std::move(config)), rng_(0) {
    config_.validate();
    rng_ = Rng(config_.seed);
    model_ = make_model(config_.model, config_.params);
    for (int i = 0; i < config_.n_buyers; ++i) buyers_.push_back(buyer_id(i));
    for (int i = 0; i < config_.n_sellers; ++i) {
      SellerSlot slot;
      slot.index = i;
      slot.profile = i < static_cast<int>(config_.seller_profiles.size())
                         ? config_.seller_profiles[i]
                         : SellerProfile{};
      slots_.push_back(slot);
    }
    for (const AttackSpec& spec : config_.attacks) policies_.emplace_back(spec);
    trace_.config = config_;
  }

  SimulationTrace run() {
    for (long tick = 0; tick < config_.ticks; ++tick) step(tick);
    return std::move(trace_);
  }

 private:
  void step(long tick) {
    handle_reentries(tick);
    apply_pending(tick);

    for (const AgentId& buyer : buyers_) {
      if (active_count() == 0) break;
      transact(buyer, tick);
    }

    apply_pending(tick);
    snapshot(tick);
  }

  void handle_reentries(long tick) {
    for (const AttackPolicy& policy : policies_) {
      for (SellerSlot& slot : slots_) {
        if (slot.active && policy.reentry_at(slot.id(), tick)) {
          const AgentId old_id = slot.id();
          slot.incarnation += 1;
          slot.wins = 0;  // the fresh identity has no history
          trace_.attack_events.push_back(
              {tick, AttackClass::Reentry, old_id, slot.id(), "reentry"});
        }
      }
    }
  }

  void transact(const AgentId& buyer, long tick) {
    const std::vector<AgentId> candidates = active_sellers();

    // Attack-forced pairing wins over matching when the target is active.
    AgentId seller{};
    bool forced = false;
    for (const AttackPolicy& policy : policies_) {
      const auto target = policy.forced_seller(buyer, tick);
      if (target && is_active(*target)) {
        seller = *target;
        forced = true;
        trace_.attack_events.push_back(
            {tick, policy.cls(), buyer, seller, "forced_transaction"});
        break;
      }
    }
    if (!forced) {
      seller = matching_rule(
          buyer, std::span<const AgentId>(candidates),
          [&](const AgentId& s) { return model_->reputation(buyer, s); },
          config_.epsilon, rng_);
    }

    const double value = config_.values.sample(rng_);

    // Profile conduct is always resolved (drawing when probabilistic) so the
    // random stream does not depend on whether an attack overrides it.
    SellerSlot& slot = slot_for(seller);
    Conduct conduct = Conduct::Honest;
    switch (slot.profile.kind) {
      case SellerProfile::Kind::AlwaysHonest:
      case SellerProfile::Kind::AttackDriven:
        conduct = Conduct::Honest;
        break;
      case SellerProfile::Kind::AlwaysDishonest:
        conduct = Conduct::Dishonest;
        break;
      case SellerProfile::Kind::Probabilistic:
        conduct = rng_.unit() < slot.profile.p_honest ? Conduct::Honest
                                                      : Conduct::Dishonest;
        break;
    }
    bool exits = false;
    for (const AttackPolicy& policy : policies_) {
      if (const auto override_conduct = policy.conduct_override(seller, value, tick)) {
        conduct = *override_conduct;
        trace_.attack_events.push_back({tick, policy.cls(), seller, std::nullopt,
                                        std::string("conduct_override:") + to_string(conduct)});
        break;
      }
    }
    for (const AttackPolicy& policy : policies_)
      exits = exits || policy.exit_after(seller, value, tick);

    Conduct reported = conduct;
    for (const AttackPolicy& policy : policies_) {
      if (const auto falsified = policy.reported_conduct(buyer, seller, tick)) {
        reported = *falsified;
        if (reported != conduct)
          trace_.attack_events.push_back({tick, policy.cls(), buyer, seller,
                                          std::string("falsified_report:") + to_string(reported)});
        break;
      }
    }

    long delay = config_.reporting_delay;
    for (const AttackPolicy& policy : policies_)
      delay = std::max(delay, policy.report_delay(tick));

    Transaction txn{tick, buyer, seller, value, conduct};
    Rating rating{txn, signal_for_model(config_.model, reported)};
    ledger_.append(rating);
    pending_.insert({tick + delay, rating});

    slot.wins += 1;
    ++total_transactions_;
    trace_.transactions.push_back({tick, buyer, seller, value, conduct, reported, forced});

    if (exits) {
      slot.active = false;
      trace_.attack_events.push_back(
          {tick, AttackClass::SuddenExit, seller, std::nullopt, "exit"});
    }
  }

  void apply_pending(long tick) {
    while (!pending_.empty() && pending_.begin()->first <= tick) {
      const Rating& rating = pending_.begin()->second;
      model_->apply(rating);
      trace_.ratings.push_back({tick, rating});
      pending_.erase(pending_.begin());
    }
  }

  void snapshot(long tick) {
    const DrsModel* drs = dynamic_cast<const DrsModel*>(model_.get());
    for (const SellerSlot& slot : slots_) {
      const AgentId sid = slot.id();
      for (const AgentId& buyer : buyers_) {
        PairSnapshot snap;
        snap.tick = tick;
        snap.buyer = buyer;
        snap.seller = sid;
        snap.overall_r = model_->reputation(buyer, sid);
        if (drs) {
          const PairExperience exp = drs->state().pair(buyer, sid);
          snap.alpha = exp.alpha;
          snap.beta = exp.beta;
          snap.ir = exp.ir;
        } else {
          snap.ir = snap.overall_r;
        }
        trace_.snapshots.push_back(snap);
      }
      const double share =
          total_transactions_ == 0
              ? 0.0
              : static_cast<double>(slot.wins) / static_cast<double>(total_transactions_);
      trace_.shares.push_back({tick, sid, slot.wins, share});
    }
  }

  std::vector<AgentId> active_sellers() const {
    std::vector<AgentId> out;
    for (const SellerSlot& slot : slots_)
      if (slot.active) out.push_back(slot.id());
    return out;
  }

  int active_count() const {
    int n = 0;
    for (const SellerSlot& slot : slots_) n += slot.active ? 1 : 0;
    return n;
  }

  bool is_active(const AgentId& id) const {
    for (const SellerSlot& slot : slots_)
      if (slot.active && slot.id() == id) return true;
    return false;
  }

  SellerSlot& slot_for(const AgentId& id) {
    for (SellerSlot& slot : slots_)
      if (slot.id() == id) return slot;
    throw ConfigError("unknown seller " + to_string(id));
  }

  ScenarioConfig config_;
  Rng rng_;
  std::unique_ptr<ReputationModel> model_;
  std::vector<AgentId> buyers_;
  std::vector<SellerSlot> slots_;
  std::vector<AttackPolicy> policies_;
  Ledger ledger_;
  std::multimap<long, Rating> pending_;  // apply_tick -> rating, insertion-ordered
  long total_transactions_ = 0;
  SimulationTrace trace_;
};

}  // namespace detail

inline SimulationTrace run_scenario(const ScenarioConfig& config) {
  return detail::Simulation(config).run();
}

// ---------------------------------------------------------------------------
// Scripted case studies. Starting conditions are pinned directly (set_pair)
// because only the post-hoc numbers are known, not the generating stream.

// One experienced pair (25 prior transactions, overall reputation 0.35 with
// the shared view pinned to the same level) trades five times honestly at
// value 700, then once dishonestly at 2000. The value-sensitive update makes
// the single drop outweigh every individual rise.
inline SimulationTrace scenario_case1() {
  ReputationParams params;  // defaults
  const AgentId buyer = buyer_id(0);
  const AgentId witness = buyer_id(1);  // carries the shared view of the seller
  const AgentId seller = seller_id(3);

  DrsState state(params);
  const long prior = 25;
  state.set_pair(buyer, seller,
                 {alpha_schedule(prior, params.alpha_rate),
                  beta_schedule(prior, params.beta_rate, params.beta_max), 0.35, prior});
  state.set_pair(witness, seller,
                 {alpha_schedule(1, params.alpha_rate),
                  beta_schedule(1, params.beta_rate, params.beta_max), 0.35, 1});

  AttackSpec vim;
  vim.cls = AttackClass::ValueImbalance;
  vim.actors = {seller};
  vim.window_start = 0;
  vim.window_end = 6;
  vim.params.threshold = 1000.0;  // honest at 700, cheat at 2000
  const AttackPolicy policy = value_imbalance_policy(vim);

  SimulationTrace trace;
  trace.config.n_buyers = 2;
  trace.config.n_sellers = 4;
  trace.config.ticks = 6;
  trace.config.model = ModelKind::Drs;
  trace.config.params = params;
  trace.config.values = {ValueDistribution::Kind::Discrete, 0, 0, 0, {700.0, 2000.0}};
  trace.config.attacks = {vim};

  for (long tick = 0; tick < 6; ++tick) {
    const double value = tick < 5 ? 700.0 : 2000.0;
    const Conduct conduct = *policy.conduct_override(seller, value, tick);
    Transaction txn{tick, buyer, seller, value, conduct};
    state.record_outcome(txn);
    trace.transactions.push_back({tick, buyer, seller, value, conduct, conduct, false});
    trace.ratings.push_back({tick, Rating{txn, conduct}});
    for (const AgentId& b : {buyer, witness}) {
      const PairExperience exp = state.pair(b, seller);
      trace.snapshots.push_back({tick, b, seller, state.overall_reputation(b, seller),
                                 exp.alpha, exp.beta, exp.ir});
    }
  }
  return trace;
}

// One pair starts at individual reputation 0.18 while colluders hold the
// seller's shared reputation at a stuffed level; 100 repeat transactions
// drive the shared weight linearly to zero, after which the stuffed value
// no longer matters.
inline SimulationTrace scenario_case2(double stuffed_sr = 0.98) {
  ReputationParams params;  // alpha_rate 0.01, beta_rate 0.1 defaults
  const AgentId buyer = buyer_id(2);
  const AgentId seller = seller_id(4);
  const std::vector<AgentId> stuffers = {buyer_id(0), buyer_id(1), buyer_id(3)};

  DrsState state(params);
  state.set_pair(buyer, seller, {0.0, 0.0, 0.18, 0});
  for (const AgentId& b : stuffers)
    state.set_pair(b, seller,
                   {alpha_schedule(1, params.alpha_rate),
                    beta_schedule(1, params.beta_rate, params.beta_max), stuffed_sr, 1});

  AttackSpec bs;
  bs.cls = AttackClass::BallotStuffing;
  bs.actors = stuffers;
  bs.target = seller;
  bs.window_start = 0;
  bs.window_end = 100;

  SimulationTrace trace;
  trace.config.n_buyers = 4;
  trace.config.n_sellers = 6;
  trace.config.ticks = 100;
  trace.config.model = ModelKind::Drs;
  trace.config.params = params;
  trace.config.values = {ValueDistribution::Kind::Fixed, 100.0, 0, 0, {}};
  trace.config.attacks = {bs};

  auto snapshot = [&](long tick) {
    const PairExperience exp = state.pair(buyer, seller);
    trace.snapshots.push_back({tick, buyer, seller,
                               state.overall_reputation(buyer, seller), exp.alpha,
                               exp.beta, exp.ir});
  };
  snapshot(-1);  // state before the first transaction
  for (long tick = 0; tick < 100; ++tick) {
    Transaction txn{tick, buyer, seller, 100.0, Conduct::Honest};
    state.record_outcome(txn);
    trace.transactions.push_back({tick, buyer, seller, 100.0, Conduct::Honest,
                                  Conduct::Honest, false});
    trace.ratings.push_back({tick, Rating{txn, Conduct::Honest}});
    snapshot(tick);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Trace metrics

struct WindowStat {
  long window = 0;
  long transactions = 0;
  double share = 0.0;            // fraction of the window's transactions won
  double mean_reputation = 0.0;  // mean queryable reputation over the window
};

struct SellerSeries {
  AgentId seller;
  std::vector<WindowStat> windows;
};

// Rolling per-seller market share and mean reputation over fixed windows.
inline std::vector<SellerSeries> equilibrium_metrics(const SimulationTrace& trace,
                                                     long window_ticks = 50) {
  if (window_ticks < 1) throw ConfigError("window must be at least one tick");
  if (trace.transactions.empty() && trace.snapshots.empty()) return {};

  long max_tick = 0;
  for (const auto& t : trace.transactions) max_tick = std::max(max_tick, t.tick);
  for (const auto& s : trace.snapshots) max_tick = std::max(max_tick, s.tick);
  const long n_windows = max_tick / window_ticks + 1;

  std::map<AgentId, SellerSeries> by_seller;
  auto series = [&](const AgentId& id) -> SellerSeries& {
    auto& s = by_seller[id];
    if (s.windows.empty()) {
      s.seller = id;
      s.windows.resize(static_cast<std::size_t>(n_windows));
      for (long w = 0; w < n_windows; ++w) s.windows[w].window = w;
    }
    return s;
  };
  for (const auto& rec : trace.shares) series(rec.seller);

  std::vector<long> total_txns(static_cast<std::size_t>(n_windows), 0);
  for (const auto& txn : trace.transactions) {
    if (txn.tick < 0) continue;
    const long w = txn.tick / window_ticks;
    ++total_txns[w];
    ++series(txn.seller).windows[w].transactions;
  }

  std::map<AgentId, std::vector<std::pair<double, long>>> rep_acc;  // sum, count
  for (const auto& snap : trace.snapshots) {
    if (snap.tick < 0) continue;
    auto& acc = rep_acc[snap.seller];
    if (acc.empty()) acc.resize(static_cast<std::size_t>(n_windows), {0.0, 0});
    const long w = snap.tick / window_ticks;
    acc[w].first += snap.overall_r;
    acc[w].second += 1;
  }

  std::vector<SellerSeries> out;
  for (auto& [id, s] : by_seller) {
    for (long w = 0; w < n_windows; ++w) {
      auto& stat = s.windows[w];
      stat.share = total_txns[w] == 0
                       ? 0.0
                       : static_cast<double>(stat.transactions) /
                             static_cast<double>(total_txns[w]);
      auto it = rep_acc.find(id);
      if (it != rep_acc.end() && !it->second.empty() && it->second[w].second > 0)
        stat.mean_reputation = it->second[w].first /
                               static_cast<double>(it->second[w].second);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Cumulative share of all transactions won by this seller identity.
inline double final_market_share(const SimulationTrace& trace, const AgentId& seller) {
  double share = 0.0;
  for (const auto& rec : trace.shares)
    if (rec.seller == seller) share = rec.share_cumulative;
  return share;
}

// Mean end-of-run queryable reputation of this seller across all buyers.
inline double final_mean_reputation(const SimulationTrace& trace, const AgentId& seller) {
  long last_tick = 0;
  bool seen = false;
  for (const auto& snap : trace.snapshots)
    if (snap.seller == seller) {
      last_tick = std::max(last_tick, snap.tick);
      seen = true;
    }
  if (!seen) return 0.0;
  double sum = 0.0;
  long count = 0;
  for (const auto& snap : trace.snapshots)
    if (snap.seller == seller && snap.tick == last_tick) {
      sum += snap.overall_r;
      ++count;
    }
  return sum / static_cast<double>(count);
}

// Ticks between a seller's first dishonest delivery and the first end-of-tick
// snapshot where the viewer's queryable reputation for it has dropped.
// nullopt when the trace has no cheat or no visible drop.
inline std::optional<long> reputation_lag(const SimulationTrace& trace,
                                          const AgentId& cheater,
                                          const AgentId& viewer) {
  long cheat_tick = -1;
  for (const auto& txn : trace.transactions)
    if (txn.seller == cheater && txn.conduct == Conduct::Dishonest) {
      cheat_tick = txn.tick;
      break;
    }
  if (cheat_tick < 0) return std::nullopt;

  // Baseline: last snapshot before the cheat, else the fresh-model view.
  double baseline = 0.0;
  bool have_baseline = false;
  for (const auto& snap : trace.snapshots) {
    if (snap.buyer != viewer || snap.seller != cheater) continue;
    if (snap.tick < cheat_tick) {
      baseline = snap.overall_r;
      have_baseline = true;
    }
  }
  if (!have_baseline)
    baseline = make_model(trace.config.model, trace.config.params)
                   ->reputation(viewer, cheater);

  for (const auto& snap : trace.snapshots) {
    if (snap.buyer != viewer || snap.seller != cheater) continue;
    if (snap.tick >= cheat_tick && snap.overall_r < baseline)
      return snap.tick - cheat_tick;
  }
  return std::nullopt;
}

// Probe form: the observed seller is the spec's first actor, the viewing
// buyer its target (default buyer 0).
inline std::optional<long> reputation_lag_probe(const SimulationTrace& trace,
                                                const AttackSpec& spec) {
  const AgentId viewer = spec.target.value_or(buyer_id(0));
  return reputation_lag(trace, spec.actors.at(0), viewer);
}

// All proceeds across a multiple-identity group belong to one principal.
inline double mi_principal_proceeds(const SimulationTrace& trace, const AttackSpec& spec) {
  double sum = 0.0;
  for (const auto& txn : trace.transactions)
    for (const AgentId& identity : spec.actors)
      if (txn.seller == identity) sum += txn.value;
  return sum;
}

}  // namespace repsim
