#include "summ/rl.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace summ {

std::vector<double> shaped_rewards(const std::vector<Sentence>& summary,
                                   const ReferenceSummary& ref, bool stopped,
                                   const RLConfig& cfg) {
  cfg.validate();
  std::vector<double> r;
  r.reserve(summary.size() + 1);
  if (cfg.reward_mode == RewardMode::SUMMARY_LEVEL) {
    double prev = 0.0;
    std::vector<Sentence> prefix;
    prefix.reserve(summary.size());
    for (const Sentence& s : summary) {
      prefix.push_back(s);
      double cur = rouge_l_summary(prefix, ref).f1;
      r.push_back(cur - prev);
      prev = cur;
    }
  } else {
    for (size_t i = 0; i < summary.size(); ++i) {
      if (i < ref.size())
        r.push_back(rouge_l_sentence(summary[i].tokens, ref[i].tokens).f1);
      else
        r.push_back(0.0);
    }
  }
  if (stopped) {
    double final_score =
        summary.empty() ? 0.0 : rouge_l_summary(summary, ref).f1;
    if (cfg.stop_bonus_replaces) std::fill(r.begin(), r.end(), 0.0);
    r.push_back(cfg.stop_lambda * final_score);
  }
  return r;
}

std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double gamma) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (size_t i = rewards.size(); i > 0; --i) {
    acc = rewards[i - 1] + gamma * acc;
    out[i - 1] = acc;
  }
  return out;
}

std::vector<double> advantage(const std::vector<double>& returns,
                              const std::vector<double>& values) {
  if (returns.size() != values.size())
    throw std::invalid_argument("returns and values differ in length");
  std::vector<double> out(returns.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = returns[i] - values[i];
  return out;
}

void check_episode(const Episode& ep, double gamma) {
  const size_t k = ep.actions.size();
  if (ep.log_probs.size() != k || ep.shaped_rewards.size() != k ||
      ep.returns.size() != k || ep.values.size() != k)
    throw std::invalid_argument("episode field lengths differ");
  std::set<int> seen;
  for (size_t i = 0; i < k; ++i) {
    int a = ep.actions[i];
    if (a == Episode::kStop) {
      if (i + 1 != k)
        throw std::invalid_argument("stop action before episode end");
    } else if (a < 0) {
      throw std::invalid_argument("negative action index");
    } else if (!seen.insert(a).second) {
      throw std::invalid_argument("repeated sentence index in episode");
    }
  }
  for (size_t i = 0; i < k; ++i) {
    double next = (i + 1 < k) ? ep.returns[i + 1] : 0.0;
    if (ep.returns[i] != ep.shaped_rewards[i] + gamma * next)
      throw std::invalid_argument("returns inconsistent with rewards");
  }
}

}  // namespace summ
