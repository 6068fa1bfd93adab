#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "summ/nn/checkpoint.hpp"
#include "summ/nn/tape.hpp"
#include "summ/rng.hpp"
#include "summ/textproc.hpp"
#include "summ/types.hpp"
#include "summ/vocab.hpp"

namespace summ {

enum class EncoderVariant { BAG_MEAN, MINI_ATTENTION };
enum class SelectMode { SAMPLE, GREEDY };

struct EncoderConfig {
  EncoderVariant variant = EncoderVariant::BAG_MEAN;
  int embed_dim = 128;
  int hidden_dim = 256;
  int num_layers = 1;  // attention depth, MINI_ATTENTION only
  int max_tokens = 512;

  void validate() const;
};

struct ExtractionResult {
  std::vector<int> selected;       // sentence indices in selection order
  std::vector<double> log_probs;   // one per action, stop included
  bool stopped = false;
};

/// Flattened encoder input for MINI_ATTENTION: each sentence contributes a
/// leading marker, its tokens, and a trailing marker.
struct TokenStream {
  std::vector<int> ids;      // rows of the extended embedding table
  std::vector<int> seg;      // 0/1 by sentence parity, first sentence 0
  std::vector<int> cls_pos;  // stream position of each leading marker
};

/// Per-sentence kept token counts under the encoder budget; tokens are
/// dropped from the tail sentences first, never below one per sentence.
std::vector<int> truncated_counts(const Document& doc,
                                  const EncoderConfig& cfg);

TokenStream build_stream(const Document& doc, const Vocab& vocab,
                         const EncoderConfig& cfg);

/// Trigram key sets per sentence, for selection-time blocking.
std::vector<std::set<std::vector<Token>>> sentence_trigrams(
    const Document& doc);

template <class S>
struct ExtractorModel {
  EncoderConfig cfg;
  int vocab_size = 0;  // embedding table adds two marker rows on top
  nn::ParamStore<S> store;

  // Extended-table rows for the sentence markers.
  int cls_id() const { return vocab_size; }
  int sep_id() const { return vocab_size + 1; }

  void build(int vocab_words, const EncoderConfig& c) {
    c.validate();
    if (vocab_words < 4) throw std::invalid_argument("vocab too small");
    cfg = c;
    vocab_size = vocab_words;
    const int e = cfg.embed_dim, h = cfg.hidden_dim;
    store.add("ext.embed", vocab_size + 2, e);
    if (cfg.variant == EncoderVariant::BAG_MEAN) {
      store.add("ext.enc.proj.w", h, e);
      store.add("ext.enc.proj.b", h, 1);
    } else {
      store.add("ext.enc.pos", cfg.max_tokens, e);
      store.add("ext.enc.seg", 2, e);
      for (int l = 1; l <= cfg.num_layers; ++l) {
        std::string p = "ext.enc.att" + std::to_string(l);
        store.add(p + ".wq", e, e);
        store.add(p + ".wk", e, e);
        store.add(p + ".wv", e, e);
      }
      store.add("ext.enc.cls.w", h, e);
      store.add("ext.enc.cls.b", h, 1);
    }
    store.add("ext.h_stop", h, 1);
    store.add("ext.glimpse.w1", h, h);
    store.add("ext.glimpse.w2", h, h);
    store.add("ext.glimpse.v", h, 1);
    store.add("ext.ptr.we", h, h);
    store.add("ext.ptr.wh", h, h);
    store.add("ext.ptr.v", h, 1);
    store.add("ext.dec.wx", 4 * h, h);
    store.add("ext.dec.wh", 4 * h, h);
    store.add("ext.dec.b", 4 * h, 1);
    store.add("ext.dec.start", h, 1);
  }

  void init_weights(uint64_t seed) {
    Rng rng(seed);
    for (nn::Parameter<S>* p : store.all()) {
      const std::string& name = p->name;
      bool is_bias = name.size() >= 2 && name.compare(name.size() - 2, 2, ".b") == 0;
      if (name == "ext.h_stop" || is_bias) {
        p->value.setZero();
      } else if (name == "ext.embed" || name == "ext.enc.pos" ||
                 name == "ext.enc.seg") {
        nn::init_normal(*p, rng, 0.01);
      } else {
        nn::init_uniform(*p, rng, -0.08, 0.08);
      }
    }
    // forget-gate bias
    nn::Parameter<S>& b = store.at("ext.dec.b");
    const int h = cfg.hidden_dim;
    for (int r = h; r < 2 * h; ++r) b.value(r, 0) = S(1);
  }
};

template <class S>
struct Encoded {
  nn::Expr<S> H;  // [n+1, hidden]; last row is the stop representation
  int n = 0;
};

template <class S>
Encoded<S> encode(nn::Tape<S>& t, ExtractorModel<S>& m, const Vocab& vocab,
                  const Document& doc) {
  if (doc.sentences.empty())
    throw std::invalid_argument("empty document" +
                                (doc.id.empty() ? "" : ": " + doc.id));
  for (const Sentence& s : doc.sentences)
    if (s.tokens.empty())
      throw std::invalid_argument("empty sentence in document " + doc.id);
  const int n = static_cast<int>(doc.sentences.size());
  std::vector<int> keep = truncated_counts(doc, m.cfg);
  nn::Parameter<S>& table = m.store.at("ext.embed");
  std::vector<nn::Expr<S>> hs;
  hs.reserve(n + 1);
  if (m.cfg.variant == EncoderVariant::BAG_MEAN) {
    nn::Expr<S> w = nn::leaf(t, m.store.at("ext.enc.proj.w"));
    nn::Expr<S> b = nn::leaf(t, m.store.at("ext.enc.proj.b"));
    for (int i = 0; i < n; ++i) {
      std::vector<int> ids;
      ids.reserve(keep[i]);
      for (int j = 0; j < keep[i]; ++j)
        ids.push_back(vocab.id_or_unk(doc.sentences[i].tokens[j]));
      nn::Expr<S> E = nn::embedding_rows(t, table, ids);
      nn::Mat<S> ones =
          nn::Mat<S>::Constant(keep[i], 1, S(1) / static_cast<S>(keep[i]));
      nn::Expr<S> mean = nn::matmul(nn::transpose_e(E), nn::constant(t, ones));
      hs.push_back(nn::add(nn::matmul(w, mean), b));
    }
  } else {
    TokenStream stream = build_stream(doc, vocab, m.cfg);
    const int T = static_cast<int>(stream.ids.size());
    std::vector<int> pos_ids(T);
    for (int j = 0; j < T; ++j) pos_ids[j] = j;
    nn::Expr<S> X = nn::add(
        nn::add(nn::embedding_rows(t, table, stream.ids),
                nn::embedding_rows(t, m.store.at("ext.enc.pos"), pos_ids)),
        nn::embedding_rows(t, m.store.at("ext.enc.seg"), stream.seg));
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(m.cfg.embed_dim));
    for (int l = 1; l <= m.cfg.num_layers; ++l) {
      std::string p = "ext.enc.att" + std::to_string(l);
      nn::Expr<S> Q = nn::matmul(X, nn::leaf(t, m.store.at(p + ".wq")));
      nn::Expr<S> K = nn::matmul(X, nn::leaf(t, m.store.at(p + ".wk")));
      nn::Expr<S> V = nn::matmul(X, nn::leaf(t, m.store.at(p + ".wv")));
      nn::Expr<S> A = nn::softmax_rows(
          nn::scale(nn::matmul(Q, nn::transpose_e(K)), inv_sqrt));
      X = nn::add(X, nn::matmul(A, V));
    }
    nn::Expr<S> cw = nn::leaf(t, m.store.at("ext.enc.cls.w"));
    nn::Expr<S> cb = nn::leaf(t, m.store.at("ext.enc.cls.b"));
    for (int i = 0; i < n; ++i)
      hs.push_back(nn::add(
          nn::matmul(cw, nn::pick_row(X, stream.cls_pos[i])), cb));
  }
  hs.push_back(nn::leaf(t, m.store.at("ext.h_stop")));
  return {nn::stack_rows(t, hs), n};
}

template <class S>
struct GlimpseLeaves {
  nn::Expr<S> w1, w2, v;
};

template <class S>
struct PointerLeaves {
  nn::Expr<S> we, wh, v;
};

template <class S>
struct DecoderLeaves {
  nn::Expr<S> wx, wh, b, start;
};

template <class S>
GlimpseLeaves<S> glimpse_leaves(nn::Tape<S>& t, nn::ParamStore<S>& store,
                                const std::string& prefix) {
  return {nn::leaf(t, store.at(prefix + "glimpse.w1")),
          nn::leaf(t, store.at(prefix + "glimpse.w2")),
          nn::leaf(t, store.at(prefix + "glimpse.v"))};
}

template <class S>
PointerLeaves<S> pointer_leaves(nn::Tape<S>& t, nn::ParamStore<S>& store,
                                const std::string& prefix) {
  return {nn::leaf(t, store.at(prefix + "ptr.we")),
          nn::leaf(t, store.at(prefix + "ptr.wh")),
          nn::leaf(t, store.at(prefix + "ptr.v"))};
}

template <class S>
DecoderLeaves<S> decoder_leaves(nn::Tape<S>& t, nn::ParamStore<S>& store,
                                const std::string& prefix) {
  return {nn::leaf(t, store.at(prefix + "dec.wx")),
          nn::leaf(t, store.at(prefix + "dec.wh")),
          nn::leaf(t, store.at(prefix + "dec.b")),
          nn::leaf(t, store.at(prefix + "dec.start"))};
}

template <class S>
struct GlimpseOut {
  nn::Expr<S> e;      // [hidden, 1]
  nn::Expr<S> alpha;  // [n, 1]
  nn::Expr<S> P;      // [n, hidden], rows are (W_g1 h_i)^T
};

/// Attention over sentence rows only; the stop row is an action, not content.
template <class S>
GlimpseOut<S> glimpse(nn::Tape<S>& t, nn::Expr<S> H, int n, nn::Expr<S> z,
                      const GlimpseLeaves<S>& L) {
  if (n < 1) throw std::invalid_argument("glimpse over empty matrix");
  nn::Expr<S> P = nn::matmul(nn::top_rows(H, n), nn::transpose_e(L.w1));
  nn::Expr<S> q = nn::matmul(L.w2, z);
  nn::Expr<S> c = nn::matmul(nn::tanh_e(nn::add_rowwise(P, q)), L.v);
  nn::Expr<S> alpha = nn::softmax_vec(c);
  nn::Expr<S> e = nn::matmul(nn::transpose_e(P), alpha);
  return {e, alpha, P};
}

/// Scores over every H row, stop included.
template <class S>
nn::Expr<S> pointer_scores(nn::Expr<S> H, nn::Expr<S> e,
                           const PointerLeaves<S>& L) {
  nn::Expr<S> Q = nn::matmul(H, nn::transpose_e(L.wh));
  nn::Expr<S> r = nn::matmul(L.we, e);
  return nn::matmul(nn::tanh_e(nn::add_rowwise(Q, r)), L.v);
}

template <class S>
nn::Expr<S> pointer_distribution(nn::Expr<S> scores,
                                 const std::vector<char>& admissible) {
  return nn::softmax_masked(scores, admissible);
}

template <class S>
struct DecoderState {
  nn::Expr<S> z, cell;
  std::vector<int> selected;
  std::vector<char> mask;  // true exactly for already-selected sentences
};

struct EpisodeOptions {
  SelectMode mode = SelectMode::GREEDY;
  int max_k = 3;
  bool trigram_block = false;
};

template <class S>
struct EpisodeNodes {
  ExtractionResult result;
  std::vector<nn::Expr<S>> log_probs;   // tape nodes, one per action
  std::vector<nn::Expr<S>> step_dists;  // distribution per step
  nn::Expr<S> H;
  int n = 0;
};

namespace extractor_detail {

template <class S>
int greedy_pick(const nn::Mat<S>& p, const std::vector<char>& admissible) {
  int best = -1;
  S best_p = S(-1);
  for (int i = 0; i < p.rows(); ++i)
    if (admissible[i] && p(i, 0) > best_p) {
      best = i;
      best_p = p(i, 0);
    }
  return best;
}

template <class S>
int sample_pick(const nn::Mat<S>& p, const std::vector<char>& admissible,
                Rng& rng) {
  double u = rng.uniform();
  double cum = 0;
  int last = -1;
  for (int i = 0; i < p.rows(); ++i) {
    if (!admissible[i]) continue;
    last = i;
    cum += static_cast<double>(p(i, 0));
    if (u < cum) return i;
  }
  return last;
}

}  // namespace extractor_detail

/// Core decoder loop. With `forced`, actions are read from the list (the
/// stop action is index n) and termination rules are ignored; otherwise the
/// policy runs free and terminates on stop, max_k, or exhaustion.
template <class S>
EpisodeNodes<S> episode_core(nn::Tape<S>& t, ExtractorModel<S>& m,
                             const Vocab& vocab, const Document& doc,
                             const EpisodeOptions& opts, Rng* rng,
                             const std::vector<int>* forced) {
  if (opts.max_k < 1) throw std::invalid_argument("max_k must be >= 1");
  Encoded<S> enc = encode(t, m, vocab, doc);
  const int n = enc.n;
  GlimpseLeaves<S> GL = glimpse_leaves(t, m.store, "ext.");
  PointerLeaves<S> PL = pointer_leaves(t, m.store, "ext.");
  DecoderLeaves<S> DL = decoder_leaves(t, m.store, "ext.");
  // decoder inputs: row i is (W_g1 h_i)^T
  nn::Expr<S> P_in = nn::matmul(nn::top_rows(enc.H, n), nn::transpose_e(GL.w1));

  std::vector<std::set<std::vector<Token>>> tris;
  if (opts.trigram_block) tris = sentence_trigrams(doc);

  EpisodeNodes<S> out;
  out.H = enc.H;
  out.n = n;
  DecoderState<S> st{
      nn::constant(t, nn::Mat<S>::Zero(m.cfg.hidden_dim, 1)),
      nn::constant(t, nn::Mat<S>::Zero(m.cfg.hidden_dim, 1)),
      {},
      std::vector<char>(n, 0)};
  nn::Expr<S> x = DL.start;
  size_t step = 0;
  while (true) {
    if (forced && step >= forced->size()) break;
    std::vector<char> admissible(n + 1, 0);
    admissible[n] = 1;
    std::set<std::vector<Token>> seen;
    if (opts.trigram_block)
      for (int s : st.selected) seen.insert(tris[s].begin(), tris[s].end());
    for (int i = 0; i < n; ++i) {
      if (st.mask[i]) continue;
      bool blocked = false;
      if (opts.trigram_block)
        for (const auto& g : tris[i])
          if (seen.count(g)) {
            blocked = true;
            break;
          }
      admissible[i] = blocked ? 0 : 1;
    }

    auto cell = nn::lstm_cell(x, st.z, st.cell, DL.wx, DL.wh, DL.b);
    st.z = cell.h;
    st.cell = cell.c;
    GlimpseOut<S> g = glimpse(t, enc.H, n, st.z, GL);
    nn::Expr<S> u = pointer_scores(enc.H, g.e, PL);
    nn::Expr<S> p = pointer_distribution(u, admissible);
    out.step_dists.push_back(p);

    int action;
    if (forced) {
      action = (*forced)[step];
      if (action < 0 || action > n)
        throw std::invalid_argument("label index out of range: " +
                                    std::to_string(action));
      if (action < n && st.mask[action])
        throw std::invalid_argument("label repeats sentence " +
                                    std::to_string(action));
    } else if (opts.mode == SelectMode::GREEDY) {
      action = extractor_detail::greedy_pick(p.val(), admissible);
    } else {
      action = extractor_detail::sample_pick(p.val(), admissible, *rng);
    }

    nn::Expr<S> lp = nn::log_e(nn::pick(p, action));
    out.log_probs.push_back(lp);
    out.result.log_probs.push_back(static_cast<double>(lp.val()(0, 0)));
    ++step;
    if (action == n) {
      out.result.stopped = true;
      break;
    }
    st.mask[action] = 1;
    st.selected.push_back(action);
    out.result.selected.push_back(action);
    if (!forced && (static_cast<int>(st.selected.size()) >= opts.max_k ||
                    static_cast<int>(st.selected.size()) == n))
      break;
    x = nn::pick_row(P_in, action);
  }
  return out;
}

template <class S>
EpisodeNodes<S> run_episode_on_tape(nn::Tape<S>& t, ExtractorModel<S>& m,
                                    const Vocab& vocab, const Document& doc,
                                    const EpisodeOptions& opts, Rng& rng) {
  return episode_core(t, m, vocab, doc, opts, &rng, nullptr);
}

/// Teacher-forced pass; `actions` lists sentence indices with a final n for
/// stop when wanted.
template <class S>
EpisodeNodes<S> forced_episode(nn::Tape<S>& t, ExtractorModel<S>& m,
                               const Vocab& vocab, const Document& doc,
                               const std::vector<int>& actions) {
  EpisodeOptions opts;
  opts.max_k = std::max<int>(1, static_cast<int>(actions.size()));
  return episode_core(t, m, vocab, doc, opts, nullptr, &actions);
}

/// Inference-only episode on a private tape.
template <class S>
ExtractionResult run_episode(ExtractorModel<S>& m, const Vocab& vocab,
                             const Document& doc, const EpisodeOptions& opts,
                             uint64_t seed) {
  nn::Tape<S> t;
  Rng rng(seed);
  return episode_core(t, m, vocab, doc, opts, &rng, nullptr).result;
}

}  // namespace summ
