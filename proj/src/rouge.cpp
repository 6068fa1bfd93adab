#include "summ/rouge.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "summ/textproc.hpp"

namespace summ {

namespace {

RougeScore from_counts(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0 ? overlap / cand_total : 0.0;
  s.recall = ref_total > 0 ? overlap / ref_total : 0.0;
  double pr = s.precision + s.recall;
  s.f1 = pr > 0 ? 2.0 * s.precision * s.recall / pr : 0.0;
  return s;
}

}  // namespace

RougeScore rouge_n(const std::vector<Token>& cand, const std::vector<Token>& ref,
                   int n) {
  auto cg = ngrams(cand, n);
  auto rg = ngrams(ref, n);
  int overlap = 0, cand_total = 0, ref_total = 0;
  for (const auto& [g, c] : cg) {
    cand_total += c;
    auto it = rg.find(g);
    if (it != rg.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [g, c] : rg) ref_total += c;
  return from_counts(overlap, cand_total, ref_total);
}

RougeScore rouge_l_sentence(const std::vector<Token>& cand,
                            const std::vector<Token>& ref) {
  int L = lcs_length(cand, ref);
  return from_counts(L, cand.size(), ref.size());
}

RougeScore rouge_l_summary(const std::vector<Sentence>& cand,
                           const std::vector<Sentence>& ref) {
  std::map<Token, int> counter;
  size_t cand_total = 0;
  for (const auto& s : cand) {
    cand_total += s.tokens.size();
    for (const auto& t : s.tokens) ++counter[t];
  }
  size_t ref_total = 0;
  int hits = 0;
  for (const auto& a : ref) {
    ref_total += a.tokens.size();
    std::set<int> union_pos;
    for (const auto& s : cand)
      for (int p : lcs_union_positions(a.tokens, s.tokens)) union_pos.insert(p);
    for (int p : union_pos) {
      auto it = counter.find(a.tokens[p]);
      if (it != counter.end() && it->second > 0) {
        --it->second;
        ++hits;
      }
    }
  }
  return from_counts(hits, cand_total, ref_total);
}

double rouge_recall_truncated(const std::vector<Token>& cand,
                              const std::vector<Token>& ref, RougeVariant v) {
  std::vector<Token> cut = cand;
  if (cut.size() > ref.size()) cut.resize(ref.size());
  switch (v) {
    case RougeVariant::R1:
      return rouge_n(cut, ref, 1).recall;
    case RougeVariant::R2:
      return rouge_n(cut, ref, 2).recall;
    case RougeVariant::RL_SENTENCE:
      return rouge_l_sentence(cut, ref).recall;
    case RougeVariant::RL_SUMMARY:
      break;
  }
  throw std::invalid_argument("truncated recall needs a stream variant");
}

RougeScore corpus_average(const std::vector<RougeScore>& scores) {
  if (scores.empty()) throw std::invalid_argument("empty corpus");
  RougeScore avg;
  for (const auto& s : scores) {
    avg.precision += s.precision;
    avg.recall += s.recall;
    avg.f1 += s.f1;
  }
  avg.precision /= scores.size();
  avg.recall /= scores.size();
  avg.f1 /= scores.size();
  return avg;
}

}  // namespace summ
