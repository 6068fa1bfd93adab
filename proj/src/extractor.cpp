#include "summ/extractor.hpp"

#include <numeric>
#include <stdexcept>

namespace summ {

void EncoderConfig::validate() const {
  if (embed_dim < 1 || hidden_dim < 1 || max_tokens < 1)
    throw std::invalid_argument("encoder dims must be >= 1");
  if (variant == EncoderVariant::MINI_ATTENTION &&
      (num_layers < 1 || num_layers > 2))
    throw std::invalid_argument("attention depth must be 1 or 2");
}

std::vector<int> truncated_counts(const Document& doc,
                                  const EncoderConfig& cfg) {
  const int n = static_cast<int>(doc.sentences.size());
  const int overhead =
      cfg.variant == EncoderVariant::MINI_ATTENTION ? 2 * n : 0;
  const int budget = cfg.max_tokens - overhead;
  if (budget < n)
    throw std::runtime_error("document too long for encoder: " +
                             std::to_string(n) + " sentences, " +
                             std::to_string(cfg.max_tokens) + " token budget");
  std::vector<int> keep(n);
  for (int i = 0; i < n; ++i)
    keep[i] = static_cast<int>(doc.sentences[i].tokens.size());
  int total = std::accumulate(keep.begin(), keep.end(), 0);
  for (int i = n - 1; i >= 0 && total > budget; --i) {
    int drop = std::min(keep[i] - 1, total - budget);
    keep[i] -= drop;
    total -= drop;
  }
  return keep;
}

TokenStream build_stream(const Document& doc, const Vocab& vocab,
                         const EncoderConfig& cfg) {
  std::vector<int> keep = truncated_counts(doc, cfg);
  const int cls = vocab.size();
  const int sep = vocab.size() + 1;
  TokenStream s;
  for (size_t i = 0; i < doc.sentences.size(); ++i) {
    int seg = static_cast<int>(i % 2);
    s.cls_pos.push_back(static_cast<int>(s.ids.size()));
    s.ids.push_back(cls);
    s.seg.push_back(seg);
    for (int j = 0; j < keep[i]; ++j) {
      s.ids.push_back(vocab.id_or_unk(doc.sentences[i].tokens[j]));
      s.seg.push_back(seg);
    }
    s.ids.push_back(sep);
    s.seg.push_back(seg);
  }
  return s;
}

std::vector<std::set<std::vector<Token>>> sentence_trigrams(
    const Document& doc) {
  std::vector<std::set<std::vector<Token>>> out(doc.sentences.size());
  for (size_t i = 0; i < doc.sentences.size(); ++i)
    for (const auto& [gram, count] : ngrams(doc.sentences[i].tokens, 3))
      out[i].insert(gram);
  return out;
}

}  // namespace summ
