#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "summ/abstractor.hpp"
#include "summ/data.hpp"
#include "summ/extractor.hpp"
#include "summ/nn/optim.hpp"
#include "summ/oracle.hpp"
#include "summ/rl.hpp"
#include "summ/rng.hpp"
#include "summ/vocab.hpp"

namespace summ {

/// Every tunable in one flat bag. Serialized as a single-level JSON object;
/// a copy of the resolved values is written next to each run's outputs.
struct RunConfig {
  int hidden_dim = 256;
  int ext_embed_dim = 128;
  int abs_embed_dim = 128;
  std::string encoder = "bag";  // "bag" | "attention"
  int attention_layers = 1;
  int max_tokens = 512;
  int max_k = 5;
  int vocab_limit = 30000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  int warmup_steps = 10000;
  double ext_lr = 2e-3;  // schedule peak scale for extractor pre-training
  double abs_lr = 1e-3;
  double rl_lr = 4e-6;
  double clip_norm = 2.0;
  double gamma = 0.95;
  double stop_lambda = 0.08;
  int epochs = 10;
  int beam_width = 4;
  int max_decode_len = 30;
  uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// Flat JSON object; unknown or wrongly typed keys are errors. Missing keys
/// keep their defaults.
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& cfg, const std::string& path);

EncoderConfig encoder_config(const RunConfig& cfg);
RLConfig rl_config(const RunConfig& cfg, RewardMode mode);

/// Frequency-ranked vocabulary over all article and abstract sentences.
Vocab build_vocab(const std::vector<DatasetRecord>& records, int vocab_limit);

/// Cross-entropy pre-training: teacher-forces each document's oracle
/// selection followed by the stop action and minimizes mean negative log
/// probability. Labels align with `docs` by position and must carry matching
/// ids. Returns the per-epoch mean loss.
template <class S>
std::vector<double> pretrain_extractor(
    ExtractorModel<S>& m, const Vocab& vocab, const std::vector<Document>& docs,
    const std::vector<OracleLabel>& labels, const RunConfig& cfg, int epochs,
    uint64_t seed, const std::function<void(int, double)>& on_epoch = nullptr) {
  if (docs.size() != labels.size())
    throw std::invalid_argument("documents and labels differ in length");
  if (docs.empty()) throw std::invalid_argument("empty training corpus");
  for (size_t i = 0; i < docs.size(); ++i)
    if (labels[i].doc_id != docs[i].id)
      throw std::invalid_argument("label id mismatch for document " +
                                  docs[i].id);
  nn::LrSchedule sched{cfg.ext_lr, cfg.warmup_steps};
  nn::Adam<S> adam(m.store.all(), cfg.beta1, cfg.beta2);
  Rng rng(seed);
  std::vector<size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> curve;
  long gstep = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Rng erng = rng.split(static_cast<uint64_t>(epoch) + 1);
    for (size_t i = order.size(); i > 1; --i) {
      int j = erng.uniform_int(static_cast<int>(i));
      std::swap(order[i - 1], order[static_cast<size_t>(j)]);
    }
    double total = 0.0;
    for (size_t idx : order) {
      const Document& doc = docs[idx];
      std::vector<int> forced = labels[idx].selected;
      forced.push_back(static_cast<int>(doc.sentences.size()));  // stop
      nn::Tape<S> t;
      EpisodeNodes<S> ep = forced_episode(t, m, vocab, doc, forced);
      nn::Expr<S> sum = ep.log_probs[0];
      for (size_t k = 1; k < ep.log_probs.size(); ++k)
        sum = nn::add(sum, ep.log_probs[k]);
      nn::Expr<S> loss =
          nn::scale(sum, -1.0 / static_cast<double>(ep.log_probs.size()));
      m.store.zero_grad();
      t.backward(loss);
      nn::clip_global_norm(m.store.all(), cfg.clip_norm);
      adam.step(sched.lr_at(++gstep));
      total += static_cast<double>(loss.val()(0, 0));
    }
    double mean = total / static_cast<double>(order.size());
    curve.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return curve;
}

struct SummarizeOptions {
  int max_k = 5;
  bool rerank = false;      // beam search per sentence plus cross-sentence pick
  int beam_width = 4;
  int max_decode_len = 30;
  bool trigram_block = false;  // block repeat trigrams during extraction
};

/// Greedy extraction followed by per-sentence rewriting. A null abstractor
/// copies the extracted sentences through unchanged. Order follows the
/// extractor's selection order; an immediate stop yields an empty summary.
template <class S>
std::vector<Sentence> summarize_doc(ExtractorModel<S>& actor,
                                    AbstractorModel<S>* abs, const Vocab& vocab,
                                    const Document& doc,
                                    const SummarizeOptions& opts) {
  EpisodeOptions eo;
  eo.mode = SelectMode::GREEDY;
  eo.max_k = opts.max_k;
  eo.trigram_block = opts.trigram_block;
  ExtractionResult ext = run_episode(actor, vocab, doc, eo, 0);
  std::vector<Sentence> out;
  if (abs == nullptr) {
    for (int idx : ext.selected)
      out.push_back(identity_abstract(doc.sentences[idx]));
    return out;
  }
  std::vector<std::vector<BeamHypothesis>> beams;
  int beam_k = opts.rerank ? opts.beam_width : 1;
  for (int idx : ext.selected)
    beams.push_back(
        decode(*abs, vocab, doc.sentences[idx].tokens, beam_k, opts.max_decode_len));
  std::vector<BeamHypothesis> picked;
  if (opts.rerank) {
    picked = rerank(beams);
  } else {
    for (const auto& b : beams) picked.push_back(b.front());
  }
  for (const BeamHypothesis& hyp : picked) {
    Sentence s;
    s.tokens = hyp.words;
    for (size_t i = 0; i < hyp.words.size(); ++i) {
      if (i) s.raw += ' ';
      s.raw += hyp.words[i];
    }
    out.push_back(std::move(s));
  }
  return out;
}

enum class EvalMode { FULL_F1, LIMITED_RECALL };

struct SystemOutput {
  std::string id;
  std::vector<std::string> summary;  // sentence strings in summary order
};

struct EvalReport {
  EvalMode mode = EvalMode::FULL_F1;
  int documents = 0;
  RougeScore r1, r2, rl;  // LIMITED_RECALL fills only the recall fields
  double r_avg = 0.0;     // mean of the three headline values
};

/// Corpus-average unigram, bigram and summary-level subsequence overlap of
/// system summaries against the reference abstracts, with stemming. FULL_F1
/// reports F1 (r_avg averages the F1s); LIMITED_RECALL truncates each
/// candidate stream to the reference length and reports recall only.
/// Output ids must match the corpus ids exactly.
EvalReport evaluate_summaries(const std::vector<DatasetRecord>& corpus,
                              const std::vector<SystemOutput>& outputs,
                              EvalMode mode);

/// Weights plus a JSON sidecar carrying dimensions and vocabulary, written
/// as `prefix.ckpt` and `prefix.json`.
void save_extractor_bundle(const ExtractorModel<double>& m, const Vocab& vocab,
                           const std::string& prefix);
ExtractorModel<double> load_extractor_bundle(const std::string& prefix,
                                             Vocab& vocab_out);
void save_abstractor_bundle(const AbstractorModel<double>& m, const Vocab& vocab,
                            const std::string& prefix);
AbstractorModel<double> load_abstractor_bundle(const std::string& prefix,
                                               Vocab& vocab_out);
void save_critic_bundle(const CriticModel<double>& c, const std::string& prefix);
CriticModel<double> load_critic_bundle(const std::string& prefix);

}  // namespace summ
