#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "summ/nn/optim.hpp"
#include "summ/nn/tape.hpp"
#include "summ/oracle.hpp"
#include "summ/rng.hpp"
#include "summ/types.hpp"
#include "summ/vocab.hpp"

namespace summ {

/// Base vocabulary plus the source sentence's own out-of-vocabulary words in
/// first-occurrence order; copy targets live in the extended id range.
struct ExtendedVocab {
  const Vocab* base = nullptr;
  std::vector<std::string> oov;
  std::vector<int> src_ext_ids;  // extended id of each source position

  static ExtendedVocab from_source(const Vocab& v,
                                   const std::vector<Token>& src);
  int ext_id(const std::string& w) const;  // falls back to <unk>
  std::string word(int id) const;
  int size() const { return base->size() + static_cast<int>(oov.size()); }
};

struct BeamHypothesis {
  std::vector<int> ids;            // emitted extended ids, <eos> included
  std::vector<std::string> words;  // realized tokens, control tokens excluded
  double log_prob = 0.0;
  bool finished = false;

  double norm_score() const {
    return log_prob / std::max<double>(1.0, static_cast<double>(words.size()));
  }
};

Sentence identity_abstract(const Sentence& source);

/// One hypothesis per sentence minimizing repeated trigrams across the whole
/// summary; ties broken by total length-normalized log-probability.
std::vector<BeamHypothesis> rerank(
    const std::vector<std::vector<BeamHypothesis>>& candidates,
    long exhaustive_budget = 4096);

/// Repeated-trigram objective: sum over distinct trigrams of (count - 1).
int repeated_trigram_count(const std::vector<const BeamHypothesis*>& combo);

template <class S>
struct AbstractorModel {
  int vocab_size = 0;
  int embed_dim = 0;
  int hidden_dim = 0;
  nn::ParamStore<S> store;

  void build(int v, int e, int h) {
    if (v < 4 || e < 1 || h < 1)
      throw std::invalid_argument("abstractor dims must be positive");
    vocab_size = v;
    embed_dim = e;
    hidden_dim = h;
    store.add("abs.embed", v, e);
    store.add("abs.enc.wx", 4 * h, e);
    store.add("abs.enc.wh", 4 * h, h);
    store.add("abs.enc.b", 4 * h, 1);
    store.add("abs.dec.wx", 4 * h, e);
    store.add("abs.dec.wh", 4 * h, h);
    store.add("abs.dec.b", 4 * h, 1);
    store.add("abs.att.wh", h, h);
    store.add("abs.att.ws", h, h);
    store.add("abs.att.v", h, 1);
    store.add("abs.out.w", v, 2 * h);
    store.add("abs.out.b", v, 1);
    store.add("abs.gate.wc", h, 1);
    store.add("abs.gate.ws", h, 1);
    store.add("abs.gate.wx", e, 1);
    store.add("abs.gate.b", 1, 1);
  }

  void init_weights(uint64_t seed) {
    Rng rng(seed);
    for (nn::Parameter<S>* p : store.all()) {
      bool is_bias = p->name.size() >= 2 &&
                     p->name.compare(p->name.size() - 2, 2, ".b") == 0;
      if (is_bias)
        p->value.setZero();
      else if (p->name == "abs.embed")
        nn::init_normal(*p, rng, 0.01);
      else
        nn::init_uniform(*p, rng, -0.08, 0.08);
    }
    const int h = hidden_dim;
    for (const char* name : {"abs.enc.b", "abs.dec.b"}) {
      nn::Parameter<S>& b = store.at(name);
      for (int r = h; r < 2 * h; ++r) b.value(r, 0) = S(1);
    }
  }
};

/// Mixture of generation and copy over the extended vocabulary:
/// P(w) = p_gen * P_vocab(w) + (1 - p_gen) * sum of attention on w's
/// source positions.
template <class S>
nn::Expr<S> copy_distribution(nn::Tape<S>& t, nn::Expr<S> p_gen,
                              nn::Expr<S> p_vocab, nn::Expr<S> alpha,
                              const std::vector<int>& src_ext_ids,
                              int ext_size) {
  nn::Expr<S> gen_part = nn::scale_by(nn::pad_rows(p_vocab, ext_size), p_gen);
  nn::Expr<S> copy_part =
      nn::scale_by(nn::scatter_rows_sum(alpha, src_ext_ids, ext_size),
                   nn::affine_const(p_gen, -1.0, 1.0));
  return nn::add(gen_part, copy_part);
}

namespace abs_detail {

template <class S>
struct EncodeOut {
  nn::Expr<S> H;        // [len, hidden]
  nn::Expr<S> z, cell;  // final encoder state, seeds the decoder
};

template <class S>
EncodeOut<S> run_encoder(nn::Tape<S>& t, AbstractorModel<S>& m,
                         const Vocab& vocab, const std::vector<Token>& src) {
  if (src.empty()) throw std::invalid_argument("empty source sentence");
  const int h = m.hidden_dim;
  nn::Expr<S> wx = nn::leaf(t, m.store.at("abs.enc.wx"));
  nn::Expr<S> wh = nn::leaf(t, m.store.at("abs.enc.wh"));
  nn::Expr<S> b = nn::leaf(t, m.store.at("abs.enc.b"));
  nn::Expr<S> z = nn::constant(t, nn::Mat<S>::Zero(h, 1));
  nn::Expr<S> cell = z;
  std::vector<nn::Expr<S>> rows;
  for (const Token& tok : src) {
    std::vector<int> id = {vocab.id_or_unk(tok)};
    nn::Expr<S> x =
        nn::transpose_e(nn::embedding_rows(t, m.store.at("abs.embed"), id));
    auto s = nn::lstm_cell(x, z, cell, wx, wh, b);
    z = s.h;
    cell = s.c;
    rows.push_back(z);
  }
  return {nn::stack_rows(t, rows), z, cell};
}

// Everything one decoder step produces before token choice.
template <class S>
struct StepOut {
  nn::Expr<S> z, cell;
  nn::Expr<S> p_ext;  // [ext_size, 1]
};

template <class S>
struct DecoderLoop {
  AbstractorModel<S>* m;
  nn::Expr<S> H;
  nn::Expr<S> wx, wh, b, att_wh, att_ws, att_v, out_w, out_b;
  nn::Expr<S> gate_wc, gate_ws, gate_wx, gate_b;
  std::vector<int> src_ext_ids;
  int ext_size = 0;

  DecoderLoop(nn::Tape<S>& t, AbstractorModel<S>& model, nn::Expr<S> Henc,
              const ExtendedVocab& ev)
      : m(&model),
        H(Henc),
        wx(nn::leaf(t, model.store.at("abs.dec.wx"))),
        wh(nn::leaf(t, model.store.at("abs.dec.wh"))),
        b(nn::leaf(t, model.store.at("abs.dec.b"))),
        att_wh(nn::leaf(t, model.store.at("abs.att.wh"))),
        att_ws(nn::leaf(t, model.store.at("abs.att.ws"))),
        att_v(nn::leaf(t, model.store.at("abs.att.v"))),
        out_w(nn::leaf(t, model.store.at("abs.out.w"))),
        out_b(nn::leaf(t, model.store.at("abs.out.b"))),
        gate_wc(nn::leaf(t, model.store.at("abs.gate.wc"))),
        gate_ws(nn::leaf(t, model.store.at("abs.gate.ws"))),
        gate_wx(nn::leaf(t, model.store.at("abs.gate.wx"))),
        gate_b(nn::leaf(t, model.store.at("abs.gate.b"))),
        src_ext_ids(ev.src_ext_ids),
        ext_size(ev.size()) {}

  StepOut<S> step(nn::Tape<S>& t, int input_vocab_id, nn::Expr<S> z,
                  nn::Expr<S> cell) {
    std::vector<int> id = {input_vocab_id};
    nn::Expr<S> x =
        nn::transpose_e(nn::embedding_rows(t, m->store.at("abs.embed"), id));
    auto s = nn::lstm_cell(x, z, cell, wx, wh, b);
    nn::Expr<S> scores = nn::matmul(
        nn::tanh_e(nn::add_rowwise(nn::matmul(H, nn::transpose_e(att_wh)),
                                   nn::matmul(att_ws, s.h))),
        att_v);
    nn::Expr<S> alpha = nn::softmax_vec(scores);
    nn::Expr<S> ctx = nn::matmul(nn::transpose_e(H), alpha);
    nn::Expr<S> sc = nn::vcat(s.h, ctx);
    nn::Expr<S> p_vocab =
        nn::softmax_vec(nn::add(nn::matmul(out_w, sc), out_b));
    nn::Expr<S> gate_in = nn::add(
        nn::add(nn::matmul(nn::transpose_e(gate_wc), ctx),
                nn::matmul(nn::transpose_e(gate_ws), s.h)),
        nn::add(nn::matmul(nn::transpose_e(gate_wx), x), gate_b));
    nn::Expr<S> p_gen = nn::sigmoid_e(gate_in);
    nn::Expr<S> p_ext =
        copy_distribution(t, p_gen, p_vocab, alpha, src_ext_ids, ext_size);
    return {s.h, s.c, p_ext};
  }
};

}  // namespace abs_detail

/// Teacher-forced negative log-likelihood, averaged over target tokens with
/// the end token included.
template <class S>
nn::Expr<S> abstractor_loss(nn::Tape<S>& t, AbstractorModel<S>& m,
                            const Vocab& vocab, const std::vector<Token>& src,
                            const std::vector<Token>& tgt) {
  ExtendedVocab ev = ExtendedVocab::from_source(vocab, src);
  auto enc = abs_detail::run_encoder(t, m, vocab, src);
  abs_detail::DecoderLoop<S> loop(t, m, enc.H, ev);
  nn::Expr<S> z = enc.z, cell = enc.cell;
  // inputs: <bos> then the gold prefix; targets: gold tokens then <eos>
  std::vector<int> inputs = {Vocab::kBos};
  std::vector<int> targets;
  for (const Token& w : tgt) {
    inputs.push_back(vocab.id_or_unk(w));
    targets.push_back(ev.ext_id(w));
  }
  targets.push_back(Vocab::kEos);
  nn::Expr<S> total = nn::constant(t, nn::Mat<S>::Zero(1, 1));
  for (size_t j = 0; j < targets.size(); ++j) {
    auto out = loop.step(t, inputs[j], z, cell);
    z = out.z;
    cell = out.cell;
    total = nn::add(total, nn::log_e(nn::pick(out.p_ext, targets[j])));
  }
  return nn::scale(total, -1.0 / static_cast<double>(targets.size()));
}

/// Greedy or beam decode over the extended vocabulary; hypotheses come back
/// sorted by length-normalized log-probability, best first.
template <class S>
std::vector<BeamHypothesis> decode(AbstractorModel<S>& m, const Vocab& vocab,
                                   const std::vector<Token>& src, int beam_k,
                                   int max_len) {
  if (beam_k < 1) throw std::invalid_argument("beam width must be >= 1");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  nn::Tape<S> t;
  ExtendedVocab ev = ExtendedVocab::from_source(vocab, src);
  auto enc = abs_detail::run_encoder(t, m, vocab, src);
  abs_detail::DecoderLoop<S> loop(t, m, enc.H, ev);

  struct Live {
    BeamHypothesis hyp;
    nn::Expr<S> z, cell;
    int next_input;  // base-vocab id fed at the next step
  };
  std::vector<Live> live = {{BeamHypothesis{}, enc.z, enc.cell, Vocab::kBos}};
  std::vector<BeamHypothesis> finished;
  const int V = vocab.size();

  for (int step = 0; step < max_len && !live.empty(); ++step) {
    struct Cand {
      size_t parent;
      int ext;
      double lp_total;
    };
    std::vector<Cand> cands;
    std::vector<abs_detail::StepOut<S>> outs;
    outs.reserve(live.size());
    for (size_t i = 0; i < live.size(); ++i) {
      auto out = loop.step(t, live[i].next_input, live[i].z, live[i].cell);
      const auto& p = out.p_ext.val();
      for (int w = 0; w < p.rows(); ++w) {
        if (w == Vocab::kPad || w == Vocab::kBos) continue;
        double lp = std::log(static_cast<double>(p(w, 0)));
        cands.push_back({i, w, live[i].hyp.log_prob + lp});
      }
      outs.push_back(out);
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) {
                       if (a.lp_total != b.lp_total)
                         return a.lp_total > b.lp_total;
                       if (a.parent != b.parent) return a.parent < b.parent;
                       return a.ext < b.ext;
                     });
    std::vector<Live> next;
    for (const Cand& c : cands) {
      if (static_cast<int>(next.size() + finished.size()) >= beam_k) break;
      Live child = live[c.parent];
      child.z = outs[c.parent].z;
      child.cell = outs[c.parent].cell;
      child.hyp.ids.push_back(c.ext);
      child.hyp.log_prob = c.lp_total;
      if (c.ext == Vocab::kEos) {
        child.hyp.finished = true;
        finished.push_back(child.hyp);
      } else {
        child.hyp.words.push_back(ev.word(c.ext));
        // copied OOV tokens are fed back as <unk>
        child.next_input = c.ext < V ? c.ext : Vocab::kUnk;
        next.push_back(std::move(child));
      }
    }
    live = std::move(next);
  }
  for (Live& l : live) finished.push_back(std::move(l.hyp));
  std::stable_sort(finished.begin(), finished.end(),
                   [](const BeamHypothesis& a, const BeamHypothesis& b) {
                     return a.norm_score() > b.norm_score();
                   });
  if (finished.size() > static_cast<size_t>(beam_k)) finished.resize(beam_k);
  return finished;
}

struct AbstractorTrainOptions {
  int epochs = 100;
  double lr = 1e-3;
  double clip = 2.0;
  uint64_t seed = 0;
};

/// Per-epoch mean teacher-forced loss.
template <class S>
std::vector<double> train_abstractor(AbstractorModel<S>& m, const Vocab& vocab,
                                     const std::vector<AbstractorPair>& pairs,
                                     const AbstractorTrainOptions& opts) {
  if (pairs.empty()) throw std::invalid_argument("no training pairs");
  nn::Adam<S> adam(m.store.all());
  Rng rng(opts.seed);
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> curve;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng erng = rng.split(epoch + 1);
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[erng.uniform_int(i)]);
    double total = 0;
    for (size_t idx : order) {
      const AbstractorPair& pair = pairs[idx];
      nn::Tape<S> t;
      nn::Expr<S> loss =
          abstractor_loss(t, m, vocab, pair.source.tokens, pair.target.tokens);
      total += static_cast<double>(loss.val()(0, 0));
      m.store.zero_grad();
      t.backward(loss);
      nn::clip_global_norm(m.store.all(), opts.clip);
      adam.step(opts.lr);
    }
    curve.push_back(total / static_cast<double>(pairs.size()));
  }
  return curve;
}

}  // namespace summ
