#pragma once

#include <functional>
#include <string>
#include <vector>

#include "summ/rouge.hpp"
#include "summ/types.hpp"

namespace summ {

struct OracleLabel {
  std::string doc_id;
  std::vector<int> selected;  // unique indices in selection order
  RougeScore score;           // summary-level ROUGE-L of the selection
};

// One rewrite target per reference sentence; source indices may repeat.
struct AbstractorPair {
  int source_index = -1;
  Sentence source;
  Sentence target;
};

/// Precomputed per-document state for scoring sentence subsets. Produces
/// exactly rouge_l_summary of the chosen sentences against the reference.
class SubsetScorer {
 public:
  SubsetScorer(const Document& doc, const ReferenceSummary& ref);
  RougeScore score(const std::vector<int>& selected) const;
  int sentence_count() const { return static_cast<int>(sent_ids_.size()); }

 private:
  std::vector<std::vector<int>> sent_ids_;          // tokens interned per doc
  std::vector<std::vector<int>> ref_ids_;
  std::vector<std::vector<std::vector<int>>> pos_;  // [ref_sent][doc_sent]
  size_t ref_total_ = 0;
  int vocab_ = 0;
};

/// Best document sentence per reference sentence by sentence-level ROUGE-L F1,
/// ties to the lowest index.
std::vector<AbstractorPair> sentence_match(const Document& doc,
                                           const ReferenceSummary& ref);

/// sentence_match collapsed to unique indices (first occurrence order).
OracleLabel sentence_match_label(const Document& doc,
                                 const ReferenceSummary& ref);

/// Adds the sentence with the best strict summary-level ROUGE-L F1 gain until
/// no addition improves or max_k is reached.
OracleLabel greedy_oracle(const Document& doc, const ReferenceSummary& ref,
                          int max_k);

/// Exhaustive search over subsets of size 1..max_k; ties resolved toward the
/// lexicographically smallest index tuple. Documents larger than size_limit
/// are an error.
OracleLabel combination_search(const Document& doc, const ReferenceSummary& ref,
                               int max_k = 5, int size_limit = 25);

enum class OracleMethod { SENTENCE_MATCH, GREEDY, COMBINATION };

struct OracleReportRow {
  OracleMethod method;
  RougeScore r1, r2, rl;
  double mean_selected = 0.0;
};

using SentenceRewriter =
    std::function<std::vector<Sentence>(const std::vector<Sentence>&)>;

/// Corpus-average R-1/R-2/R-L of each method's selected-set summaries.
/// Selected sentences pass through `rewrite` before scoring (identity default).
std::vector<OracleReportRow> oracle_report(
    const std::vector<Document>& docs, const std::vector<ReferenceSummary>& refs,
    const std::vector<OracleMethod>& methods, int max_k,
    const SentenceRewriter& rewrite = nullptr);

}  // namespace summ
