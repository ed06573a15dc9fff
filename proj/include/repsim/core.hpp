#pragma once
// Core domain types for the e-market reputation library: agent identities,
// transactions, ratings, the append-only rating ledger, and the tuning
// parameters shared by the reputation engines.

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace repsim {

// ---------------------------------------------------------------------------
// Errors

// Ledger append that would break tick ordering.
struct OrderingError : std::logic_error {
  using std::logic_error::logic_error;
};

// Rating payload does not match the active reputation model.
struct SignalMismatchError : std::logic_error {
  using std::logic_error::logic_error;
};

// Invalid scenario/parameter configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure while emitting artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Agents

enum class AgentKind { Buyer, Seller };

inline const char* to_string(AgentKind kind) {
  return kind == AgentKind::Buyer ? "buyer" : "seller";
}

// Identity of a market participant. (kind, index, incarnation) is unique
// within a simulation. Re-entering the market yields the same index with a
// bumped incarnation; nothing links the new identity to the old one.
struct AgentId {
  AgentKind kind = AgentKind::Buyer;
  int index = 0;
  int incarnation = 0;

  auto operator<=>(const AgentId&) const = default;
};

inline AgentId buyer_id(int index, int incarnation = 0) {
  return {AgentKind::Buyer, index, incarnation};
}

inline AgentId seller_id(int index, int incarnation = 0) {
  return {AgentKind::Seller, index, incarnation};
}

inline std::string to_string(const AgentId& id) {
  std::string s(id.kind == AgentKind::Buyer ? "b" : "s");
  s += std::to_string(id.index);
  if (id.incarnation > 0) {
    s += '#';
    s += std::to_string(id.incarnation);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Transactions and ratings

enum class Conduct { Honest, Dishonest };

inline const char* to_string(Conduct c) {
  return c == Conduct::Honest ? "honest" : "dishonest";
}

struct Transaction {
  long tick = 0;        // simulation time, non-negative
  AgentId buyer;
  AgentId seller;
  double value = 0.0;   // currency units, non-negative
  Conduct conduct = Conduct::Honest;

  void validate() const {
    if (tick < 0) throw ConfigError("transaction tick must be non-negative");
    if (!(value >= 0.0) || !std::isfinite(value))
      throw ConfigError("transaction value must be finite and non-negative");
    if (buyer.kind != AgentKind::Buyer)
      throw ConfigError("transaction buyer must have buyer kind");
    if (seller.kind != AgentKind::Seller)
      throw ConfigError("transaction seller must have seller kind");
  }
};

// eBay-style ternary feedback.
enum class Feedback : int { Negative = -1, Neutral = 0, Positive = 1 };

// Amazon-style star rating, 1..5.
struct Stars {
  int count = 0;

  auto operator<=>(const Stars&) const = default;
};

// One payload per model family: conduct observation (dynamic engine),
// ternary feedback (sum scoring), stars (average scoring).
using RatingSignal = std::variant<Conduct, Feedback, Stars>;

struct Rating {
  Transaction transaction;
  RatingSignal signal;
};

inline std::string to_string(const RatingSignal& signal) {
  if (const auto* c = std::get_if<Conduct>(&signal)) return to_string(*c);
  if (const auto* f = std::get_if<Feedback>(&signal)) {
    switch (*f) {
      case Feedback::Negative: return "-1";
      case Feedback::Neutral: return "0";
      case Feedback::Positive: return "+1";
    }
  }
  return "stars:" + std::to_string(std::get<Stars>(signal).count);
}

// ---------------------------------------------------------------------------
// Tuning parameters

// Shared knobs for the reputation engines. Reputation lives in
// [r_min, r_max]; new and re-entering sellers start at r_initial, close to
// the floor so shedding a bad record by re-entry is costly.
struct ReputationParams {
  double alpha_rate = 0.01;  // individual-weight gain per pair transaction
  double beta_rate = 0.1;    // pair-repetition discount growth per transaction
  double beta_max = 2.0;     // discount cap
  double lambda = 0.001;     // sigmoid steepness for transaction value
  double r_min = 0.0;
  double r_max = 1.0;
  double r_initial = 0.05;
  double sr_default = 0.5;   // shared reputation when no third-party data exists

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(alpha_rate) || alpha_rate <= 0.0)
      throw ConfigError("alpha_rate must be positive");
    if (!finite(beta_rate) || beta_rate <= 0.0)
      throw ConfigError("beta_rate must be positive");
    if (!finite(beta_max) || beta_max < 0.0)
      throw ConfigError("beta_max must be non-negative");
    if (!finite(lambda) || lambda < 0.0 || lambda > 1.0)
      throw ConfigError("lambda must lie in [0,1]");
    if (!finite(r_min) || !finite(r_max) || r_min > r_max)
      throw ConfigError("reputation range is empty");
    if (!finite(r_initial) || r_initial < r_min || r_initial > r_max)
      throw ConfigError("r_initial must lie in [r_min, r_max]");
    if (!finite(sr_default) || sr_default < r_min || sr_default > r_max)
      throw ConfigError("sr_default must lie in [r_min, r_max]");
  }

  double clamp(double r) const {
    return r < r_min ? r_min : (r > r_max ? r_max : r);
  }

  bool operator==(const ReputationParams&) const = default;
};

// ---------------------------------------------------------------------------
// Ledger

using PairKey = std::pair<AgentId, AgentId>;  // (buyer, seller)

// Append-only record of every rating in a simulation, with a per-pair index.
// Entries are ordered by tick; appending never mutates prior entries.
class Ledger {
 public:
  // Throws OrderingError when the rating's tick precedes the ledger tail.
  // Equal ticks are allowed (several ratings can land on one tick).
  const Rating& append(Rating rating) {
    rating.transaction.validate();
    const long tick = rating.transaction.tick;
    if (!ratings_.empty() && tick < ratings_.back().transaction.tick) {
      throw OrderingError("rating at tick " + std::to_string(tick) +
                          " precedes ledger tail at tick " +
                          std::to_string(ratings_.back().transaction.tick));
    }
    const std::size_t pos = ratings_.size();
    ratings_.push_back(std::move(rating));
    const Rating& stored = ratings_.back();
    pair_index_[{stored.transaction.buyer, stored.transaction.seller}].push_back(pos);
    return stored;
  }

  // Exactly the subsequence of ratings for (buyer, seller), in tick order.
  // Unknown pairs yield an empty sequence.
  std::vector<Rating> ratings_for_pair(const AgentId& buyer, const AgentId& seller) const {
    std::vector<Rating> out;
    auto it = pair_index_.find({buyer, seller});
    if (it == pair_index_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t pos : it->second) out.push_back(ratings_[pos]);
    return out;
  }

  std::span<const Rating> all() const { return ratings_; }
  std::size_t size() const { return ratings_.size(); }
  bool empty() const { return ratings_.empty(); }

  // Rebuilds the pair index from scratch and compares. Used by consistency
  // checks; linear in ledger size.
  bool index_consistent() const {
    std::map<PairKey, std::vector<std::size_t>> rebuilt;
    for (std::size_t i = 0; i < ratings_.size(); ++i) {
      const auto& t = ratings_[i].transaction;
      rebuilt[{t.buyer, t.seller}].push_back(i);
    }
    return rebuilt == pair_index_;
  }

 private:
  std::vector<Rating> ratings_;
  std::map<PairKey, std::vector<std::size_t>> pair_index_;
};

// Free-function spellings of the ledger operations.
inline void append_rating(Ledger& ledger, Rating rating) {
  ledger.append(std::move(rating));
}

inline std::vector<Rating> ratings_for_pair(const Ledger& ledger,
                                            const AgentId& buyer,
                                            const AgentId& seller) {
  return ledger.ratings_for_pair(buyer, seller);
}

}  // namespace repsim
