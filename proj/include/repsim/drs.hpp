#pragma once
// Dynamic reputation engine. A seller's overall reputation blends the
// buyer's individual score with the market's shared view, weighted by how
// much first-hand experience the pair has; per-transaction updates scale
// with transaction value through a sigmoid and are discounted for repeated
// same-pair trading.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "repsim/core.hpp"

namespace repsim {

// ---------------------------------------------------------------------------
// Scalar kernels. Generic over the floating type so the same formulas can be
// evaluated at higher precision when a test or analysis needs it.

// Value weight eta = 1 / (1 + e^(-lambda * value)), in (0,1) and increasing
// in value for lambda > 0. eta(0) is exactly 1/2.
template <class Real>
Real compute_eta(const Real& value, const Real& lambda) {
  if (value < Real(0)) throw std::domain_error("compute_eta: negative transaction value");
  if (lambda < Real(0) || lambda > Real(1))
    throw std::domain_error("compute_eta: lambda outside [0,1]");
  using std::exp;
  return Real(1) / (Real(1) + exp(-lambda * value));
}

// Signed magnitude of a reputation update: eta / (1 + beta) * current_r.
// beta discounts repeated transactions between one buyer-seller pair.
template <class Real>
Real compute_delta(const Real& current_r, const Real& eta, const Real& beta) {
  if (beta < Real(0)) throw std::domain_error("compute_delta: negative beta");
  return eta / (Real(1) + beta) * current_r;
}

// Overall reputation R = alpha * ir + (1 - alpha) * sr. Kept in the literal
// two-product form so alpha = 0 returns sr exactly and alpha = 1 returns ir
// exactly.
template <class Real>
Real combine_reputation(const Real& alpha, const Real& ir, const Real& sr) {
  if (alpha < Real(0) || alpha > Real(1))
    throw std::domain_error("combine_reputation: alpha outside [0,1]");
  return alpha * ir + (Real(1) - alpha) * sr;
}

inline double compute_eta(double value, double lambda) {
  return compute_eta<double>(value, lambda);
}

inline double compute_delta(double current_r, double eta, double beta) {
  return compute_delta<double>(current_r, eta, beta);
}

inline double combine_reputation(double alpha, double ir, double sr) {
  return combine_reputation<double>(alpha, ir, sr);
}

// ---------------------------------------------------------------------------
// Experience schedules. Both advance linearly per pair transaction and cap;
// computed from the transaction count each time rather than accumulated, so
// n = 100 at rate 0.01 lands on exactly 1.

inline double alpha_schedule(long n, double alpha_rate) {
  if (n < 0) throw std::domain_error("alpha_schedule: negative transaction count");
  const double a = static_cast<double>(n) * alpha_rate;
  return a > 1.0 ? 1.0 : a;
}

inline double beta_schedule(long n, double beta_rate, double beta_max) {
  if (n < 0) throw std::domain_error("beta_schedule: negative transaction count");
  const double b = static_cast<double>(n) * beta_rate;
  return b > beta_max ? beta_max : b;
}

// ---------------------------------------------------------------------------
// Per-pair state

// What one buyer knows about one seller. ir is the individual reputation;
// alpha and beta are pinned to the schedules at all times.
struct PairExperience {
  double alpha = 0.0;
  double beta = 0.0;
  double ir = 0.0;
  long n_transactions = 0;

  bool operator==(const PairExperience&) const = default;
};

// Numbers applied by one record_outcome call, for traces and tests.
struct DrsUpdate {
  double eta = 0.0;
  double delta = 0.0;      // unsigned magnitude
  double r_used = 0.0;     // overall reputation the delta scaled
  double ir_before = 0.0;
  double ir_after = 0.0;
  double alpha_before = 0.0;
  double beta_before = 0.0;
};

// Full engine state: tuning parameters plus the (buyer, seller) experience
// map. Single writer; queries are const and safe between updates.
class DrsState {
 public:
  explicit DrsState(ReputationParams params) : params_(params) {
    params_.validate();
  }

  const ReputationParams& params() const { return params_; }

  // Absent pairs read as the fresh default: no experience, ir at the
  // newcomer level.
  PairExperience pair(const AgentId& buyer, const AgentId& seller) const {
    auto it = pairs_.find({buyer, seller});
    if (it != pairs_.end()) return it->second;
    return PairExperience{0.0, 0.0, params_.r_initial, 0};
  }

  bool has_pair(const AgentId& buyer, const AgentId& seller) const {
    return pairs_.count({buyer, seller}) != 0;
  }

  // Installs pair state directly. Used to pin scripted scenario starting
  // conditions; normal evolution goes through record_outcome.
  void set_pair(const AgentId& buyer, const AgentId& seller, PairExperience experience) {
    if (experience.ir < params_.r_min || experience.ir > params_.r_max)
      throw ConfigError("set_pair: ir outside [r_min, r_max]");
    if (experience.n_transactions < 0)
      throw ConfigError("set_pair: negative transaction count");
    pairs_[{buyer, seller}] = experience;
  }

  // Mean individual reputation held for this seller by buyers other than
  // asking_buyer that have transacted at least once; sr_default when no such
  // evidence exists. Iteration order is the ordered pair map, so the sum is
  // reproducible.
  double shared_reputation(const AgentId& seller, const AgentId& asking_buyer) const {
    double sum = 0.0;
    long count = 0;
    for (const auto& [key, exp] : pairs_) {
      if (key.second != seller) continue;
      if (key.first == asking_buyer) continue;
      if (exp.n_transactions < 1) continue;
      sum += exp.ir;
      ++count;
    }
    return count == 0 ? params_.sr_default : sum / static_cast<double>(count);
  }

  // R = alpha * IR + (1 - alpha) * SR for this pair. For an absent pair
  // alpha is 0, so this equals shared_reputation exactly.
  double overall_reputation(const AgentId& buyer, const AgentId& seller) const {
    const PairExperience exp = pair(buyer, seller);
    return combine_reputation(exp.alpha, exp.ir, shared_reputation(seller, buyer));
  }

  // Applies one transaction outcome: the delta is computed from the current
  // overall reputation with the pre-transaction beta, added for honest
  // conduct and subtracted for dishonest, then clamped. alpha and beta
  // advance afterwards.
  DrsUpdate record_outcome(const Transaction& txn) {
    txn.validate();
    const PairExperience before = pair(txn.buyer, txn.seller);

    DrsUpdate update;
    update.alpha_before = before.alpha;
    update.beta_before = before.beta;
    update.ir_before = before.ir;
    update.r_used = overall_reputation(txn.buyer, txn.seller);
    update.eta = compute_eta(txn.value, params_.lambda);
    update.delta = compute_delta(update.r_used, update.eta, before.beta);

    const double signed_delta =
        txn.conduct == Conduct::Honest ? update.delta : -update.delta;

    PairExperience after = before;
    after.ir = params_.clamp(before.ir + signed_delta);
    after.n_transactions = before.n_transactions + 1;
    after.alpha = alpha_schedule(after.n_transactions, params_.alpha_rate);
    after.beta = beta_schedule(after.n_transactions, params_.beta_rate, params_.beta_max);
    pairs_[{txn.buyer, txn.seller}] = after;

    update.ir_after = after.ir;
    return update;
  }

  const std::map<PairKey, PairExperience>& pairs() const { return pairs_; }

  bool operator==(const DrsState&) const = default;

 private:
  ReputationParams params_;
  std::map<PairKey, PairExperience> pairs_;
};

// Free-function spellings matching the operation names used elsewhere.
inline double shared_reputation(const DrsState& state, const AgentId& seller,
                                const AgentId& asking_buyer) {
  return state.shared_reputation(seller, asking_buyer);
}

inline double overall_reputation(const DrsState& state, const AgentId& buyer,
                                 const AgentId& seller) {
  return state.overall_reputation(buyer, seller);
}

inline DrsUpdate record_outcome(DrsState& state, const Transaction& txn) {
  return state.record_outcome(txn);
}

}  // namespace repsim
