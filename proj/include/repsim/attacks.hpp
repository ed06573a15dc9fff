#pragma once
// Executable adversary policies: collusive rating (ballot stuffing,
// badmouthing), pairwise reciprocity/retaliation, identity churn (re-entry,
// multiple identities), value-conditioned cheating (value imbalance, sudden
// exit) and reputation-lag probing. A policy is a pure rule the market loop
// consults each tick; activation is limited to a half-open tick window
// [start, end), so start == end expresses an empty window.

#include <optional>
#include <string>
#include <vector>

#include "repsim/core.hpp"

namespace repsim {

enum class AttackClass {
  BallotStuffing,
  Badmouthing,
  Reciprocity,
  Retaliation,
  Reentry,
  ReputationLag,
  ValueImbalance,
  SuddenExit,
  MultipleIdentity,
};

inline const char* to_string(AttackClass cls) {
  switch (cls) {
    case AttackClass::BallotStuffing: return "ballot_stuffing";
    case AttackClass::Badmouthing: return "badmouthing";
    case AttackClass::Reciprocity: return "reciprocity";
    case AttackClass::Retaliation: return "retaliation";
    case AttackClass::Reentry: return "reentry";
    case AttackClass::ReputationLag: return "reputation_lag";
    case AttackClass::ValueImbalance: return "value_imbalance";
    case AttackClass::SuddenExit: return "sudden_exit";
    case AttackClass::MultipleIdentity: return "multiple_identity";
  }
  return "?";
}

struct AttackParams {
  // Transaction-value level at or above which value-conditioned policies
  // cheat (value_imbalance, sudden_exit).
  double threshold = 0.0;
  // multiple_identity: total identities and which actor slots cheat.
  int n_identities = 0;
  std::vector<int> dishonest_identities;
  // reputation_lag: extra ticks before in-window ratings reach the model.
  long report_delay = 0;

  bool operator==(const AttackParams&) const = default;
};

struct AttackSpec {
  AttackClass cls = AttackClass::BallotStuffing;
  std::vector<AgentId> actors;
  std::optional<AgentId> target;
  long window_start = 0;
  long window_end = 0;  // exclusive
  AttackParams params;

  bool in_window(long tick) const {
    return tick >= window_start && tick < window_end;
  }

  void validate() const {
    if (window_end < window_start) throw ConfigError("attack window is not well-ordered");
    if (actors.empty()) throw ConfigError("attack needs at least one actor");

    auto all_actor_kind = [&](AgentKind kind) {
      for (const AgentId& a : actors)
        if (a.kind != kind) return false;
      return true;
    };

    switch (cls) {
      case AttackClass::BallotStuffing:
      case AttackClass::Badmouthing:
        if (!target) throw ConfigError("collusive rating attack needs a target seller");
        if (target->kind != AgentKind::Seller)
          throw ConfigError("collusive rating target must be a seller");
        if (!all_actor_kind(AgentKind::Buyer))
          throw ConfigError("collusive rating actors must be buyers");
        break;
      case AttackClass::Reciprocity:
      case AttackClass::Retaliation: {
        if (actors.size() != 2)
          throw ConfigError("reciprocity/retaliation takes exactly two actors");
        const bool pair_ok =
            (actors[0].kind == AgentKind::Buyer && actors[1].kind == AgentKind::Seller) ||
            (actors[0].kind == AgentKind::Seller && actors[1].kind == AgentKind::Buyer);
        if (!pair_ok)
          throw ConfigError("reciprocity/retaliation needs one buyer and one seller");
        break;
      }
      case AttackClass::Reentry:
      case AttackClass::ValueImbalance:
        if (!all_actor_kind(AgentKind::Seller))
          throw ConfigError("seller-side attack actors must be sellers");
        break;
      case AttackClass::SuddenExit:
        if (target) throw ConfigError("sudden_exit takes no target");
        if (!all_actor_kind(AgentKind::Seller))
          throw ConfigError("sudden_exit actors must be sellers");
        break;
      case AttackClass::MultipleIdentity: {
        if (!all_actor_kind(AgentKind::Seller))
          throw ConfigError("multiple_identity actors must be sellers");
        if (params.n_identities < 2 ||
            static_cast<std::size_t>(params.n_identities) != actors.size())
          throw ConfigError("multiple_identity needs n_identities >= 2 matching the actor list");
        for (int slot : params.dishonest_identities)
          if (slot < 0 || static_cast<std::size_t>(slot) >= actors.size())
            throw ConfigError("dishonest identity slot out of range");
        break;
      }
      case AttackClass::ReputationLag:
        if (!all_actor_kind(AgentKind::Seller))
          throw ConfigError("reputation_lag actor must be the observed seller");
        if (params.report_delay < 0)
          throw ConfigError("report delay must be non-negative");
        break;
    }
  }

  bool operator==(const AttackSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Policy runtime. All queries are pure functions of (spec, arguments); any
// randomness comes from the simulation's seeded stream, so a seed replays
// the same injected events.

class AttackPolicy {
 public:
  explicit AttackPolicy(AttackSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
  }

  const AttackSpec& spec() const { return spec_; }
  AttackClass cls() const { return spec_.cls; }
  bool in_window(long tick) const { return spec_.in_window(tick); }

  // Collusion forces the colluder's seller choice toward the target
  // (or the partner, for a reciprocity/retaliation pair).
  std::optional<AgentId> forced_seller(const AgentId& buyer, long tick) const {
    if (!in_window(tick)) return std::nullopt;
    switch (spec_.cls) {
      case AttackClass::BallotStuffing:
      case AttackClass::Badmouthing:
        if (is_actor(buyer)) return spec_.target;
        return std::nullopt;
      case AttackClass::Reciprocity:
      case AttackClass::Retaliation:
        if (is_actor(buyer)) return partner_seller();
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  // Falsified conduct report, independent of what was actually delivered.
  std::optional<Conduct> reported_conduct(const AgentId& buyer, const AgentId& seller,
                                          long tick) const {
    if (!in_window(tick)) return std::nullopt;
    switch (spec_.cls) {
      case AttackClass::BallotStuffing:
        if (is_actor(buyer) && spec_.target && seller == *spec_.target)
          return Conduct::Honest;
        return std::nullopt;
      case AttackClass::Badmouthing:
        if (is_actor(buyer) && spec_.target && seller == *spec_.target)
          return Conduct::Dishonest;
        return std::nullopt;
      case AttackClass::Reciprocity:
        if (is_actor(buyer) && seller == partner_seller()) return Conduct::Honest;
        return std::nullopt;
      case AttackClass::Retaliation:
        if (is_actor(buyer) && seller == partner_seller()) return Conduct::Dishonest;
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  // Seller-side conduct rules.
  std::optional<Conduct> conduct_override(const AgentId& seller, double value,
                                          long tick) const {
    if (!in_window(tick)) return std::nullopt;
    switch (spec_.cls) {
      case AttackClass::ValueImbalance:
        if (!is_actor(seller)) return std::nullopt;
        return value >= spec_.params.threshold ? Conduct::Dishonest : Conduct::Honest;
      case AttackClass::SuddenExit:
        if (!is_actor(seller)) return std::nullopt;
        if (value >= spec_.params.threshold) return Conduct::Dishonest;
        return std::nullopt;
      case AttackClass::MultipleIdentity: {
        const int slot = actor_slot(seller);
        if (slot < 0) return std::nullopt;
        for (int dishonest : spec_.params.dishonest_identities)
          if (dishonest == slot) return Conduct::Dishonest;
        return Conduct::Honest;
      }
      default:
        return std::nullopt;
    }
  }

  // True when this transaction makes the seller leave the market for good.
  bool exit_after(const AgentId& seller, double value, long tick) const {
    return spec_.cls == AttackClass::SuddenExit && in_window(tick) &&
           is_actor(seller) && value >= spec_.params.threshold;
  }

  // True when the seller sheds its identity at this tick.
  bool reentry_at(const AgentId& seller, long tick) const {
    return spec_.cls == AttackClass::Reentry && tick == spec_.window_start &&
           spec_.in_window(tick) && is_actor(seller);
  }

  long report_delay(long tick) const {
    if (spec_.cls == AttackClass::ReputationLag && in_window(tick))
      return spec_.params.report_delay;
    return 0;
  }

  bool is_actor(const AgentId& id) const {
    for (const AgentId& a : spec_.actors)
      if (a == id) return true;
    return false;
  }

 private:
  int actor_slot(const AgentId& id) const {
    for (std::size_t i = 0; i < spec_.actors.size(); ++i)
      if (spec_.actors[i] == id) return static_cast<int>(i);
    return -1;
  }

  AgentId partner_seller() const {
    return spec_.actors[0].kind == AgentKind::Seller ? spec_.actors[0] : spec_.actors[1];
  }

  AttackSpec spec_;
};

// Named constructors, one per attack family. Each checks the class tag.
namespace detail {
inline AttackPolicy checked_policy(AttackSpec spec, AttackClass expected,
                                   const char* name) {
  if (spec.cls != expected)
    throw ConfigError(std::string(name) + ": wrong attack class");
  return AttackPolicy(std::move(spec));
}
inline AttackPolicy checked_policy2(AttackSpec spec, AttackClass a, AttackClass b,
                                    const char* name) {
  if (spec.cls != a && spec.cls != b)
    throw ConfigError(std::string(name) + ": wrong attack class");
  return AttackPolicy(std::move(spec));
}
}  // namespace detail

inline AttackPolicy ballot_stuffing_policy(AttackSpec spec) {
  return detail::checked_policy(std::move(spec), AttackClass::BallotStuffing,
                                "ballot_stuffing_policy");
}
inline AttackPolicy badmouthing_policy(AttackSpec spec) {
  return detail::checked_policy(std::move(spec), AttackClass::Badmouthing,
                                "badmouthing_policy");
}
inline AttackPolicy reciprocity_retaliation_policy(AttackSpec spec) {
  return detail::checked_policy2(std::move(spec), AttackClass::Reciprocity,
                                 AttackClass::Retaliation,
                                 "reciprocity_retaliation_policy");
}
inline AttackPolicy reentry_policy(AttackSpec spec) {
  return detail::checked_policy(std::move(spec), AttackClass::Reentry, "reentry_policy");
}
inline AttackPolicy value_imbalance_policy(AttackSpec spec) {
  return detail::checked_policy(std::move(spec), AttackClass::ValueImbalance,
                                "value_imbalance_policy");
}
inline AttackPolicy sudden_exit_policy(AttackSpec spec) {
  return detail::checked_policy(std::move(spec), AttackClass::SuddenExit,
                                "sudden_exit_policy");
}
inline AttackPolicy multiple_identity_policy(AttackSpec spec) {
  return detail::checked_policy(std::move(spec), AttackClass::MultipleIdentity,
                                "multiple_identity_policy");
}

}  // namespace repsim
