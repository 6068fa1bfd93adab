#include "summ/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "summ/textproc.hpp"

namespace summ {

namespace {

std::vector<std::vector<int>> intern(const std::vector<Sentence>& sents,
                                     std::map<Token, int>& ids) {
  std::vector<std::vector<int>> out;
  out.reserve(sents.size());
  for (const auto& s : sents) {
    std::vector<int> row;
    row.reserve(s.tokens.size());
    for (const auto& t : s.tokens) {
      auto [it, fresh] = ids.emplace(t, static_cast<int>(ids.size()));
      (void)fresh;
      row.push_back(it->second);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<int> lcs_positions_ids(const std::vector<int>& ref,
                                   const std::vector<int>& cand) {
  const int m = static_cast<int>(ref.size());
  const int n = static_cast<int>(cand.size());
  std::vector<int> out;
  if (m == 0 || n == 0) return out;
  std::vector<std::vector<int>> L(m + 1, std::vector<int>(n + 1, 0));
  for (int i = m - 1; i >= 0; --i)
    for (int j = n - 1; j >= 0; --j)
      L[i][j] = ref[i] == cand[j] ? L[i + 1][j + 1] + 1
                                  : std::max(L[i + 1][j], L[i][j + 1]);
  int i = 0, j = 0;
  while (i < m && j < n && L[i][j] > 0) {
    int jj = j;
    while (jj < n && cand[jj] != ref[i]) ++jj;
    if (jj < n && 1 + L[i + 1][jj + 1] == L[i][j]) {
      out.push_back(i);
      ++i;
      j = jj + 1;
    } else {
      ++i;
    }
  }
  return out;
}

RougeScore from_counts(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0 ? overlap / cand_total : 0.0;
  s.recall = ref_total > 0 ? overlap / ref_total : 0.0;
  double pr = s.precision + s.recall;
  s.f1 = pr > 0 ? 2.0 * s.precision * s.recall / pr : 0.0;
  return s;
}

}  // namespace

SubsetScorer::SubsetScorer(const Document& doc, const ReferenceSummary& ref) {
  std::map<Token, int> ids;
  sent_ids_ = intern(doc.sentences, ids);
  ref_ids_ = intern(ref, ids);
  vocab_ = static_cast<int>(ids.size());
  for (const auto& r : ref_ids_) ref_total_ += r.size();
  pos_.resize(ref_ids_.size());
  for (size_t t = 0; t < ref_ids_.size(); ++t) {
    pos_[t].resize(sent_ids_.size());
    for (size_t i = 0; i < sent_ids_.size(); ++i)
      pos_[t][i] = lcs_positions_ids(ref_ids_[t], sent_ids_[i]);
  }
}

RougeScore SubsetScorer::score(const std::vector<int>& selected) const {
  std::vector<int> counter(vocab_, 0);
  size_t cand_total = 0;
  for (int i : selected) {
    cand_total += sent_ids_[i].size();
    for (int id : sent_ids_[i]) ++counter[id];
  }
  int hits = 0;
  std::vector<char> in_union;
  for (size_t t = 0; t < ref_ids_.size(); ++t) {
    in_union.assign(ref_ids_[t].size(), 0);
    for (int i : selected)
      for (int p : pos_[t][i]) in_union[p] = 1;
    for (size_t p = 0; p < in_union.size(); ++p) {
      if (!in_union[p]) continue;
      int& c = counter[ref_ids_[t][p]];
      if (c > 0) {
        --c;
        ++hits;
      }
    }
  }
  return from_counts(hits, cand_total, ref_total_);
}

std::vector<AbstractorPair> sentence_match(const Document& doc,
                                           const ReferenceSummary& ref) {
  if (doc.sentences.empty()) throw std::invalid_argument("empty document");
  std::vector<AbstractorPair> out;
  for (const auto& a : ref) {
    int best = 0;
    double best_f1 = -1.0;
    for (size_t i = 0; i < doc.sentences.size(); ++i) {
      double f1 = rouge_l_sentence(doc.sentences[i].tokens, a.tokens).f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best = static_cast<int>(i);
      }
    }
    out.push_back({best, doc.sentences[best], a});
  }
  return out;
}

OracleLabel sentence_match_label(const Document& doc,
                                 const ReferenceSummary& ref) {
  OracleLabel label;
  label.doc_id = doc.id;
  for (const auto& p : sentence_match(doc, ref))
    if (std::find(label.selected.begin(), label.selected.end(),
                  p.source_index) == label.selected.end())
      label.selected.push_back(p.source_index);
  SubsetScorer scorer(doc, ref);
  label.score = scorer.score(label.selected);
  return label;
}

OracleLabel greedy_oracle(const Document& doc, const ReferenceSummary& ref,
                          int max_k) {
  if (max_k < 1) throw std::invalid_argument("max_k must be >= 1");
  if (doc.sentences.empty()) throw std::invalid_argument("empty document");
  SubsetScorer scorer(doc, ref);
  const int n = scorer.sentence_count();
  OracleLabel label;
  label.doc_id = doc.id;
  std::vector<char> used(n, 0);
  double best = 0.0;
  std::vector<int> trial;
  while (static_cast<int>(label.selected.size()) < max_k) {
    int pick = -1;
    double pick_f1 = best;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      trial = label.selected;
      trial.push_back(i);
      double f1 = scorer.score(trial).f1;
      if (f1 > pick_f1) {
        pick_f1 = f1;
        pick = i;
      }
    }
    if (pick < 0) break;
    label.selected.push_back(pick);
    used[pick] = 1;
    best = pick_f1;
  }
  label.score = scorer.score(label.selected);
  return label;
}

OracleLabel combination_search(const Document& doc, const ReferenceSummary& ref,
                               int max_k, int size_limit) {
  if (max_k < 1) throw std::invalid_argument("max_k must be >= 1");
  if (doc.sentences.empty()) throw std::invalid_argument("empty document");
  const int n = static_cast<int>(doc.sentences.size());
  if (n > size_limit) throw std::runtime_error("combination search too large");
  SubsetScorer scorer(doc, ref);
  OracleLabel label;
  label.doc_id = doc.id;
  std::vector<int> best_set;
  double best_f1 = -1.0;
  std::vector<int> subset;
  auto consider = [&] {
    double f1 = scorer.score(subset).f1;
    if (f1 > best_f1 ||
        (f1 == best_f1 &&
         std::lexicographical_compare(subset.begin(), subset.end(),
                                      best_set.begin(), best_set.end()))) {
      best_f1 = f1;
      best_set = subset;
    }
  };
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (!subset.empty()) consider();
    if (remaining == 0) return;
    for (int i = start; i < n; ++i) {
      subset.push_back(i);
      rec(i + 1, remaining - 1);
      subset.pop_back();
    }
  };
  rec(0, std::min(max_k, n));
  label.selected = best_set;
  label.score = scorer.score(best_set);
  return label;
}

std::vector<OracleReportRow> oracle_report(
    const std::vector<Document>& docs, const std::vector<ReferenceSummary>& refs,
    const std::vector<OracleMethod>& methods, int max_k,
    const SentenceRewriter& rewrite) {
  if (docs.size() != refs.size())
    throw std::invalid_argument("docs/refs size mismatch");
  if (docs.empty()) throw std::invalid_argument("empty corpus");
  std::vector<OracleReportRow> rows;
  for (OracleMethod m : methods) {
    OracleReportRow row;
    row.method = m;
    std::vector<RougeScore> r1s, r2s, rls;
    double total_selected = 0;
    for (size_t d = 0; d < docs.size(); ++d) {
      OracleLabel label;
      switch (m) {
        case OracleMethod::SENTENCE_MATCH:
          label = sentence_match_label(docs[d], refs[d]);
          break;
        case OracleMethod::GREEDY:
          label = greedy_oracle(docs[d], refs[d], max_k);
          break;
        case OracleMethod::COMBINATION:
          label = combination_search(docs[d], refs[d], max_k);
          break;
      }
      total_selected += static_cast<double>(label.selected.size());
      std::vector<Sentence> summary;
      for (int i : label.selected) summary.push_back(docs[d].sentences[i]);
      if (rewrite) summary = rewrite(summary);
      std::vector<Token> cand_stream, ref_stream;
      for (const auto& s : summary)
        cand_stream.insert(cand_stream.end(), s.tokens.begin(), s.tokens.end());
      for (const auto& s : refs[d])
        ref_stream.insert(ref_stream.end(), s.tokens.begin(), s.tokens.end());
      r1s.push_back(rouge_n(cand_stream, ref_stream, 1));
      r2s.push_back(rouge_n(cand_stream, ref_stream, 2));
      rls.push_back(rouge_l_summary(summary, refs[d]));
    }
    row.r1 = corpus_average(r1s);
    row.r2 = corpus_average(r2s);
    row.rl = corpus_average(rls);
    row.mean_selected = total_selected / static_cast<double>(docs.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace summ
