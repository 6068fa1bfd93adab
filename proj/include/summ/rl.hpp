#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "summ/extractor.hpp"
#include "summ/nn/optim.hpp"
#include "summ/nn/tape.hpp"
#include "summ/oracle.hpp"
#include "summ/rouge.hpp"
#include "summ/types.hpp"

namespace summ {

enum class RewardMode { SUMMARY_LEVEL, SENTENCE_LEVEL };

struct RLConfig {
  double gamma = 0.95;
  double stop_lambda = 0.08;
  double rl_lr = 4e-6;
  RewardMode reward_mode = RewardMode::SUMMARY_LEVEL;
  // When set, a stopped episode keeps only the stop step's bonus and the
  // per-step shaped rewards are zeroed. Off by default.
  bool stop_bonus_replaces = false;
  // Per-episode advantage standardization. Off by default.
  bool normalize_advantage = false;

  void validate() const {
    if (gamma < 0.0 || gamma > 1.0)
      throw std::invalid_argument("gamma must be in [0,1]");
    if (stop_lambda < 0.0)
      throw std::invalid_argument("stop coefficient must be >= 0");
  }
};

struct Episode {
  static constexpr int kStop = -1;
  std::string doc_id;
  std::vector<int> actions;  // sentence indices; trailing kStop when stopped
  std::vector<double> log_probs;
  std::vector<double> shaped_rewards;
  std::vector<double> returns;
  std::vector<double> values;
  double final_return = 0.0;  // summary score of the whole selection

  bool stopped() const { return !actions.empty() && actions.back() == kStop; }
};

/// Per-step rewards for an episode whose (possibly rewritten) summary
/// sentences are given in selection order. SUMMARY_LEVEL telescopes the
/// summary score; SENTENCE_LEVEL scores each sentence against the
/// positionally matched reference sentence. A stopped episode earns a final
/// stop reward of stop_lambda times the summary score in either mode.
std::vector<double> shaped_rewards(const std::vector<Sentence>& summary,
                                   const ReferenceSummary& ref, bool stopped,
                                   const RLConfig& cfg);

/// Tail-sum discounted returns: R_t = r_t + gamma * R_{t+1}.
std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double gamma);

std::vector<double> advantage(const std::vector<double>& returns,
                              const std::vector<double>& values);

/// Validates an Episode record: aligned field lengths, stop sentinel only at
/// the end, unique sentence indices, and the returns recursion.
void check_episode(const Episode& ep, double gamma);

/// -(1/k) sum of log-prob * advantage; advantages enter as constants.
template <class S>
nn::Expr<S> actor_loss(nn::Tape<S>& t,
                       const std::vector<nn::Expr<S>>& log_probs,
                       const std::vector<double>& advantages) {
  if (log_probs.size() != advantages.size())
    throw std::invalid_argument("advantage count mismatch");
  if (log_probs.empty()) throw std::invalid_argument("empty episode");
  nn::Expr<S> total = nn::constant(t, nn::Mat<S>::Zero(1, 1));
  for (size_t i = 0; i < log_probs.size(); ++i)
    total = nn::add(total, nn::scale(log_probs[i], advantages[i]));
  return nn::scale(total, -1.0 / static_cast<double>(log_probs.size()));
}

/// Mean squared error between state values and returns.
template <class S>
nn::Expr<S> critic_loss(nn::Tape<S>& t, const std::vector<nn::Expr<S>>& values,
                        const std::vector<double>& returns) {
  if (values.size() != returns.size())
    throw std::invalid_argument("returns count mismatch");
  if (values.empty()) throw std::invalid_argument("empty episode");
  nn::Expr<S> total = nn::constant(t, nn::Mat<S>::Zero(1, 1));
  for (size_t i = 0; i < values.size(); ++i) {
    nn::Expr<S> diff = nn::affine_const(values[i], 1.0, -returns[i]);
    total = nn::add(total, nn::cmul(diff, diff));
  }
  return nn::scale(total, 1.0 / static_cast<double>(values.size()));
}

/// The critic mirrors the extractor's decoder and glimpse (weights cloned
/// from the pre-trained actor) and swaps the pointer head for a scalar
/// value head. The sentence encoder is shared with the actor, not cloned.
template <class S>
struct CriticModel {
  int hidden_dim = 0;
  nn::ParamStore<S> store;

  static CriticModel make(const ExtractorModel<S>& actor, uint64_t seed) {
    CriticModel c;
    const int h = actor.cfg.hidden_dim;
    c.hidden_dim = h;
    for (const char* name : {"dec.wx", "dec.wh", "dec.b", "dec.start",
                             "glimpse.w1", "glimpse.w2", "glimpse.v"}) {
      const nn::Parameter<S>& src = actor.store.at("ext." + std::string(name));
      nn::Parameter<S>& dst = c.store.add("critic." + std::string(name),
                                          static_cast<int>(src.value.rows()),
                                          static_cast<int>(src.value.cols()));
      dst.value = src.value;
    }
    Rng rng(seed);
    nn::init_uniform(c.store.add("critic.val.we", h, h), rng, -0.08, 0.08);
    nn::init_uniform(c.store.add("critic.val.wz", h, h), rng, -0.08, 0.08);
    c.store.add("critic.val.v", h, 1);  // zero: values start at exactly 0
    c.store.add("critic.val.b", 1, 1);
    return c;
  }

  /// Zero-initialized shell with the right shapes, for checkpoint loading.
  static CriticModel with_dims(int hidden_dim) {
    if (hidden_dim < 1) throw std::invalid_argument("hidden_dim must be positive");
    CriticModel c;
    const int h = hidden_dim;
    c.hidden_dim = h;
    c.store.add("critic.dec.wx", 4 * h, h);
    c.store.add("critic.dec.wh", 4 * h, h);
    c.store.add("critic.dec.b", 4 * h, 1);
    c.store.add("critic.dec.start", h, 1);
    c.store.add("critic.glimpse.w1", h, h);
    c.store.add("critic.glimpse.w2", h, h);
    c.store.add("critic.glimpse.v", h, 1);
    c.store.add("critic.val.we", h, h);
    c.store.add("critic.val.wz", h, h);
    c.store.add("critic.val.v", h, 1);
    c.store.add("critic.val.b", 1, 1);
    return c;
  }
};

/// Value estimates along a fixed action trajectory, reusing the actor's
/// encoded sentence matrix H (shared encoder). V_t is the value of the
/// state at which action t was chosen.
template <class S>
std::vector<nn::Expr<S>> critic_values(nn::Tape<S>& t, CriticModel<S>& critic,
                                       nn::Expr<S> H, int n,
                                       const std::vector<int>& actions) {
  GlimpseLeaves<S> GL = glimpse_leaves(t, critic.store, "critic.");
  DecoderLeaves<S> DL = decoder_leaves(t, critic.store, "critic.");
  nn::Expr<S> we = nn::leaf(t, critic.store.at("critic.val.we"));
  nn::Expr<S> wz = nn::leaf(t, critic.store.at("critic.val.wz"));
  nn::Expr<S> v = nn::leaf(t, critic.store.at("critic.val.v"));
  nn::Expr<S> b = nn::leaf(t, critic.store.at("critic.val.b"));
  nn::Expr<S> P_in = nn::matmul(nn::top_rows(H, n), nn::transpose_e(GL.w1));
  nn::Expr<S> z = nn::constant(t, nn::Mat<S>::Zero(critic.hidden_dim, 1));
  nn::Expr<S> cell = z;
  nn::Expr<S> x = DL.start;
  std::vector<nn::Expr<S>> values;
  values.reserve(actions.size());
  for (int a : actions) {
    auto s = nn::lstm_cell(x, z, cell, DL.wx, DL.wh, DL.b);
    z = s.h;
    cell = s.c;
    GlimpseOut<S> g = glimpse(t, H, n, z, GL);
    nn::Expr<S> state =
        nn::tanh_e(nn::add(nn::matmul(we, g.e), nn::matmul(wz, z)));
    values.push_back(nn::add(nn::matmul(nn::transpose_e(v), state), b));
    if (a != Episode::kStop) {
      if (a < 0 || a >= n)
        throw std::invalid_argument("action index out of range");
      x = nn::pick_row(P_in, a);
    }
  }
  return values;
}

/// Samples one episode on a private tape and assembles the full record:
/// actions, rewards, returns, critic values (zero without a critic), and
/// the final summary score.
template <class S>
Episode run_rl_episode(ExtractorModel<S>& actor, CriticModel<S>* critic,
                       const Vocab& vocab, const Document& doc,
                       const ReferenceSummary& ref, const RLConfig& cfg,
                       int max_k, uint64_t seed,
                       const SentenceRewriter& rewrite = nullptr) {
  cfg.validate();
  nn::Tape<S> t;
  Rng rng(seed);
  EpisodeOptions opts;
  opts.mode = SelectMode::SAMPLE;
  opts.max_k = max_k;
  EpisodeNodes<S> nodes = run_episode_on_tape(t, actor, vocab, doc, opts, rng);
  Episode ep;
  ep.doc_id = doc.id;
  ep.actions = nodes.result.selected;
  if (nodes.result.stopped) ep.actions.push_back(Episode::kStop);
  ep.log_probs = nodes.result.log_probs;
  std::vector<Sentence> summary;
  summary.reserve(nodes.result.selected.size());
  for (int si : nodes.result.selected) summary.push_back(doc.sentences[si]);
  if (rewrite) {
    summary = rewrite(summary);
    if (summary.size() != nodes.result.selected.size())
      throw std::invalid_argument("rewriter changed the sentence count");
  }
  ep.shaped_rewards =
      shaped_rewards(summary, ref, nodes.result.stopped, cfg);
  ep.returns = discounted_returns(ep.shaped_rewards, cfg.gamma);
  if (critic) {
    auto V = critic_values(t, *critic, nodes.H, nodes.n, ep.actions);
    for (const auto& e : V)
      ep.values.push_back(static_cast<double>(e.val()(0, 0)));
  } else {
    ep.values.assign(ep.actions.size(), 0.0);
  }
  ep.final_return =
      summary.empty() ? 0.0 : rouge_l_summary(summary, ref).f1;
  check_episode(ep, cfg.gamma);
  return ep;
}

struct RLEpochStats {
  double mean_return = 0.0;
  double mean_len = 0.0;
  double stop_rate = 0.0;
};

/// One sampled episode per document per epoch; joint actor+critic update
/// with a single global clip and one Adam step. Rewards score the rewritten
/// sentences when a rewriter is given, the raw sentences otherwise.
template <class S>
std::vector<RLEpochStats> a2c_finetune(
    ExtractorModel<S>& actor, CriticModel<S>& critic,
    const std::vector<Document>& docs,
    const std::vector<ReferenceSummary>& refs, const Vocab& vocab,
    const RLConfig& cfg, int max_k, int epochs, uint64_t seed,
    const SentenceRewriter& rewrite = nullptr,
    const std::function<void(int, const RLEpochStats&)>& on_epoch = nullptr) {
  cfg.validate();
  if (docs.size() != refs.size())
    throw std::invalid_argument("documents and references differ in count");
  if (docs.empty()) throw std::invalid_argument("empty corpus");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");

  std::vector<nn::Parameter<S>*> all_params = actor.store.all();
  for (auto* p : critic.store.all()) all_params.push_back(p);
  nn::Adam<S> adam(all_params);
  Rng master(seed);

  EpisodeOptions opts;
  opts.mode = SelectMode::SAMPLE;
  opts.max_k = max_k;

  std::vector<RLEpochStats> stats;
  std::vector<size_t> order(docs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Rng erng = master.split(epoch + 1);
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[erng.uniform_int(static_cast<int>(i))]);
    RLEpochStats st;
    for (size_t idx : order) {
      nn::Tape<S> t;
      EpisodeNodes<S> ep =
          run_episode_on_tape(t, actor, vocab, docs[idx], opts, erng);

      std::vector<Sentence> summary;
      summary.reserve(ep.result.selected.size());
      for (int si : ep.result.selected)
        summary.push_back(docs[idx].sentences[si]);
      if (rewrite) {
        summary = rewrite(summary);
        if (summary.size() != ep.result.selected.size())
          throw std::invalid_argument("rewriter changed the sentence count");
      }
      std::vector<double> r =
          shaped_rewards(summary, refs[idx], ep.result.stopped, cfg);
      std::vector<double> R = discounted_returns(r, cfg.gamma);

      std::vector<int> actions = ep.result.selected;
      if (ep.result.stopped) actions.push_back(Episode::kStop);
      std::vector<nn::Expr<S>> V =
          critic_values(t, critic, ep.H, ep.n, actions);
      std::vector<double> Vnum;
      Vnum.reserve(V.size());
      for (const auto& e : V)
        Vnum.push_back(static_cast<double>(e.val()(0, 0)));
      std::vector<double> A = advantage(R, Vnum);
      if (cfg.normalize_advantage && A.size() > 1) {
        double mean = 0.0;
        for (double a : A) mean += a;
        mean /= static_cast<double>(A.size());
        double var = 0.0;
        for (double a : A) var += (a - mean) * (a - mean);
        double sd = std::sqrt(var / static_cast<double>(A.size()));
        for (double& a : A) a = (a - mean) / std::max(sd, 1e-8);
      }

      nn::Expr<S> loss =
          nn::add(actor_loss(t, ep.log_probs, A), critic_loss(t, V, R));
      actor.store.zero_grad();
      critic.store.zero_grad();
      t.backward(loss);
      nn::clip_global_norm(all_params, 2.0);
      adam.step(cfg.rl_lr);

      double final_score =
          summary.empty() ? 0.0 : rouge_l_summary(summary, refs[idx]).f1;
      st.mean_return += final_score;
      st.mean_len += static_cast<double>(ep.result.selected.size());
      st.stop_rate += ep.result.stopped ? 1.0 : 0.0;
    }
    st.mean_return /= static_cast<double>(docs.size());
    st.mean_len /= static_cast<double>(docs.size());
    st.stop_rate /= static_cast<double>(docs.size());
    if (on_epoch) on_epoch(epoch, st);
    stats.push_back(st);
  }
  return stats;
}

/// Mean summary score of greedy extraction (optionally rewritten), for
/// before/after comparisons around fine-tuning.
template <class S>
RLEpochStats evaluate_policy(ExtractorModel<S>& actor,
                             const std::vector<Document>& docs,
                             const std::vector<ReferenceSummary>& refs,
                             const Vocab& vocab, int max_k,
                             const SentenceRewriter& rewrite = nullptr) {
  if (docs.size() != refs.size())
    throw std::invalid_argument("documents and references differ in count");
  if (docs.empty()) throw std::invalid_argument("empty corpus");
  EpisodeOptions opts;
  opts.mode = SelectMode::GREEDY;
  opts.max_k = max_k;
  RLEpochStats st;
  for (size_t i = 0; i < docs.size(); ++i) {
    ExtractionResult res = run_episode(actor, vocab, docs[i], opts, 0);
    std::vector<Sentence> summary;
    summary.reserve(res.selected.size());
    for (int si : res.selected) summary.push_back(docs[i].sentences[si]);
    if (rewrite) summary = rewrite(summary);
    double score =
        summary.empty() ? 0.0 : rouge_l_summary(summary, refs[i]).f1;
    st.mean_return += score;
    st.mean_len += static_cast<double>(res.selected.size());
    st.stop_rate += res.stopped ? 1.0 : 0.0;
  }
  st.mean_return /= static_cast<double>(docs.size());
  st.mean_len /= static_cast<double>(docs.size());
  st.stop_rate /= static_cast<double>(docs.size());
  return st;
}

}  // namespace summ
