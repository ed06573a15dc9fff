#pragma once
// Commercial scoring baselines behind the same model interface as the
// dynamic engine: distinct-rater feedback sums (eBay style) and star-rating
// averages (Amazon style). Having all three behind one contract lets attack
// experiments swap the model without touching the market loop.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repsim/core.hpp"
#include "repsim/drs.hpp"

namespace repsim {

enum class ModelKind { Drs, EbaySum, AmazonAvg };

inline const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Drs: return "drs";
    case ModelKind::EbaySum: return "ebay_sum";
    case ModelKind::AmazonAvg: return "amazon_avg";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Scoring rules

struct FeedbackEntry {
  AgentId rater;
  Feedback feedback = Feedback::Neutral;
};

// Positive-rater count minus negative-rater count over distinct raters.
// A rater's latest feedback is the one that counts; neutrals contribute
// nothing (and a late neutral withdraws that rater's earlier vote).
inline int ebay_score(std::span<const FeedbackEntry> entries) {
  std::map<AgentId, Feedback> latest;
  for (const FeedbackEntry& e : entries) latest[e.rater] = e.feedback;
  int score = 0;
  for (const auto& [rater, fb] : latest) {
    if (fb == Feedback::Positive) ++score;
    if (fb == Feedback::Negative) --score;
  }
  return score;
}

// Plain mean of all star ratings on the native 1..5 scale; empty input has
// no score. Normalization to [0,1] happens only at the comparison layer.
inline std::optional<double> amazon_score(std::span<const int> stars) {
  if (stars.empty()) return std::nullopt;
  double sum = 0.0;
  for (int s : stars) sum += static_cast<double>(s);
  return sum / static_cast<double>(stars.size());
}

// ---------------------------------------------------------------------------
// Uniform model contract

// One reputation model drives a simulation run. apply() ingests a rating
// whose payload must match the model family; reputation() is the score a
// prospective buyer queries before choosing a seller, on a scale where
// higher is better. Single writer, concurrent const reads between updates.
class ReputationModel {
 public:
  virtual ~ReputationModel() = default;

  virtual ModelKind kind() const = 0;
  virtual void apply(const Rating& rating) = 0;
  virtual double reputation(const AgentId& viewer, const AgentId& seller) const = 0;
};

class DrsModel final : public ReputationModel {
 public:
  explicit DrsModel(const ReputationParams& params) : state_(params) {}

  ModelKind kind() const override { return ModelKind::Drs; }

  // The signal carries the buyer's conduct report, which is what the engine
  // scores; colluders may report conduct that differs from delivery.
  void apply(const Rating& rating) override {
    const auto* observed = std::get_if<Conduct>(&rating.signal);
    if (!observed)
      throw SignalMismatchError("drs model expects a conduct observation");
    Transaction txn = rating.transaction;
    txn.conduct = *observed;
    state_.record_outcome(txn);
  }

  double reputation(const AgentId& viewer, const AgentId& seller) const override {
    return state_.overall_reputation(viewer, seller);
  }

  DrsState& state() { return state_; }
  const DrsState& state() const { return state_; }

 private:
  DrsState state_;
};

class EbayModel final : public ReputationModel {
 public:
  explicit EbayModel(const ReputationParams&) {}

  ModelKind kind() const override { return ModelKind::EbaySum; }

  void apply(const Rating& rating) override {
    const auto* fb = std::get_if<Feedback>(&rating.signal);
    if (!fb) throw SignalMismatchError("ebay_sum model expects ternary feedback");
    entries_[rating.transaction.seller].push_back(
        {rating.transaction.buyer, *fb});
  }

  int score(const AgentId& seller) const {
    auto it = entries_.find(seller);
    if (it == entries_.end()) return 0;
    return ebay_score(it->second);
  }

  // Raw sum score; every viewer sees the same number. The scale is the
  // model's own (unbounded integers), which is all argmax selection needs.
  double reputation(const AgentId&, const AgentId& seller) const override {
    return static_cast<double>(score(seller));
  }

 private:
  std::map<AgentId, std::vector<FeedbackEntry>> entries_;
};

class AmazonModel final : public ReputationModel {
 public:
  explicit AmazonModel(const ReputationParams& params) : params_(params) {}

  ModelKind kind() const override { return ModelKind::AmazonAvg; }

  void apply(const Rating& rating) override {
    const auto* stars = std::get_if<Stars>(&rating.signal);
    if (!stars) throw SignalMismatchError("amazon_avg model expects a star rating");
    if (stars->count < 1 || stars->count > 5)
      throw ConfigError("star rating outside 1..5");
    stars_[rating.transaction.seller].push_back(stars->count);
  }

  std::optional<double> score(const AgentId& seller) const {
    auto it = stars_.find(seller);
    if (it == stars_.end()) return std::nullopt;
    return amazon_score(it->second);
  }

  // Comparison-layer view: (mean - 1) / 4 maps 1..5 stars onto [0,1].
  // An unrated seller reads as a newcomer at r_initial.
  double reputation(const AgentId&, const AgentId& seller) const override {
    const auto mean = score(seller);
    if (!mean) return params_.r_initial;
    return (*mean - 1.0) / 4.0;
  }

 private:
  ReputationParams params_;
  std::map<AgentId, std::vector<int>> stars_;
};

inline std::unique_ptr<ReputationModel> make_model(ModelKind kind,
                                                   const ReputationParams& params) {
  switch (kind) {
    case ModelKind::Drs: return std::make_unique<DrsModel>(params);
    case ModelKind::EbaySum: return std::make_unique<EbayModel>(params);
    case ModelKind::AmazonAvg: return std::make_unique<AmazonModel>(params);
  }
  throw ConfigError("unknown model kind");
}

// Dispatch spelling used by callers that hold a model reference.
inline void model_update(ReputationModel& model, const Rating& rating) {
  model.apply(rating);
}

// Rating payload a truthful market loop emits for a given model family.
inline RatingSignal signal_for_model(ModelKind kind, Conduct reported) {
  switch (kind) {
    case ModelKind::Drs:
      return reported;
    case ModelKind::EbaySum:
      return reported == Conduct::Honest ? Feedback::Positive : Feedback::Negative;
    case ModelKind::AmazonAvg:
      return Stars{reported == Conduct::Honest ? 5 : 1};
  }
  throw ConfigError("unknown model kind");
}

}  // namespace repsim
