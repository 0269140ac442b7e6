#pragma once

// Data preparation and loss arithmetic for the reward-prediction (RP) and
// state-representation (SR) auxiliary tasks.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arenareward/error.hpp"
#include "arenareward/replay.hpp"

namespace arenareward {

using Observation = std::vector<double>;

/// The last `length` observations ending at step t, oldest first. Steps
/// before the episode start are zero vectors.
struct ObservationHistory {
  std::vector<Observation> rows;
  std::size_t pad_count = 0;
};

inline ObservationHistory build_history(std::span<const Observation> episode, std::size_t t, std::size_t length) {
  if (length == 0) throw ParameterError("history length must be at least 1");
  if (t >= episode.size()) throw ParameterError("history step outside the episode");
  const std::size_t width = episode[t].size();
  ObservationHistory h;
  h.rows.reserve(length);
  const std::size_t available = t + 1;
  h.pad_count = available >= length ? 0 : length - available;
  for (std::size_t i = 0; i < h.pad_count; ++i) h.rows.emplace_back(width, 0.0);
  for (std::size_t s = t + 1 - (length - h.pad_count); s <= t; ++s) h.rows.push_back(episode[s]);
  return h;
}

/// Histories for every step of a flat sequence of concatenated episodes;
/// `episode_start[i]` marks the first step of an episode. Padding restarts
/// at each boundary.
inline std::vector<ObservationHistory> build_histories(std::span<const Observation> observations,
                                                       std::span<const bool> episode_start, std::size_t length) {
  if (observations.size() != episode_start.size())
    throw ParameterError("observations and episode markers differ in length");
  std::vector<ObservationHistory> out;
  out.reserve(observations.size());
  std::size_t begin = 0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (episode_start[i]) begin = i;
    out.push_back(build_history(observations.subspan(begin, i - begin + 1), i - begin, length));
  }
  return out;
}

enum class RewardClass { Positive = 0, Zero = 1, Negative = 2 };

inline constexpr double kRewardClassThreshold = 0.009;

inline std::string to_string(RewardClass c) {
  switch (c) {
    case RewardClass::Positive: return "positive";
    case RewardClass::Zero: return "zero";
    case RewardClass::Negative: return "negative";
  }
  return "?";
}

struct RewardClassLabel {
  RewardClass cls = RewardClass::Zero;
  double epsilon = kRewardClassThreshold;

  std::array<double, 3> one_hot() const {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    v[static_cast<std::size_t>(cls)] = 1.0;
    return v;
  }
};

/// Positive above ε, negative below -ε; |r| <= ε is the zero class.
inline RewardClassLabel classify_reward(double r, double epsilon = kRewardClassThreshold) {
  if (!(epsilon > 0.0)) throw ParameterError("classification threshold must be positive");
  if (!std::isfinite(r)) throw ParameterError("cannot classify a non-finite reward");
  const RewardClass c = r > epsilon ? RewardClass::Positive : r < -epsilon ? RewardClass::Negative : RewardClass::Zero;
  return {c, epsilon};
}

/// Mean smooth-L1 (Huber with transition at β) over element differences.
inline double smooth_l1(std::span<const double> predicted, std::span<const double> target, double beta = 1.0) {
  if (predicted.size() != target.size()) throw ParameterError("smooth_l1: length mismatch");
  if (!(beta > 0.0)) throw ParameterError("smooth_l1: beta must be positive");
  if (predicted.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double x = std::abs(predicted[i] - target[i]);
    sum += x < beta ? 0.5 * x * x / beta : x - 0.5 * beta;
  }
  return sum / static_cast<double>(predicted.size());
}

inline double cross_entropy_3class(std::span<const double> probabilities, RewardClass label) {
  if (probabilities.size() != 3) throw ParameterError("cross entropy: expected 3 probabilities");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("cross entropy: probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ParameterError("cross entropy: probabilities must sum to 1");
  return -std::log(probabilities[static_cast<std::size_t>(label)]);
}

/// main + Σ λ_c · L_c. Losses without a λ entry use weight 1.
inline double combined_loss(double main, const std::map<std::string, double>& aux,
                            const std::map<std::string, double>& lambdas = {}) {
  double total = main;
  for (const auto& [name, loss] : aux) {
    const auto it = lambdas.find(name);
    total += (it == lambdas.end() ? 1.0 : it->second) * loss;
  }
  return total;
}

struct ClassBalance {
  double positive = 0.0;
  double zero = 0.0;
  double negative = 0.0;
  std::size_t samples = 0;
};

enum class LabelSource { Distributed, Shaped };

/// Fraction of (step, player) samples per class.
inline ClassBalance class_balance_report(const RewardTimeline& timeline, double epsilon = kRewardClassThreshold,
                                         LabelSource source = LabelSource::Distributed) {
  std::size_t counts[3] = {0, 0, 0};
  std::size_t n = 0;
  for (const auto& e : timeline.entries) {
    for (const auto& p : e.rewards.players) {
      const double r = source == LabelSource::Distributed ? p.distributed : p.shaped;
      ++counts[static_cast<std::size_t>(classify_reward(r, epsilon).cls)];
      ++n;
    }
  }
  if (n == 0) throw ParameterError("class balance of an empty timeline");
  const double total = static_cast<double>(n);
  return {static_cast<double>(counts[0]) / total, static_cast<double>(counts[1]) / total,
          static_cast<double>(counts[2]) / total, n};
}

}  // namespace arenareward
