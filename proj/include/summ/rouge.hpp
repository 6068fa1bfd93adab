#pragma once

#include <vector>

#include "summ/types.hpp"

namespace summ {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class RougeVariant { R1, R2, RL_SENTENCE, RL_SUMMARY };

/// Clipped n-gram overlap between token streams.
RougeScore rouge_n(const std::vector<Token>& cand, const std::vector<Token>& ref,
                   int n);

/// LCS-based score between two token streams.
RougeScore rouge_l_sentence(const std::vector<Token>& cand,
                            const std::vector<Token>& ref);

/// Union-LCS over sentence sets with candidate-token clipping. Candidate
/// sentence order does not affect the score; reference sentences consume
/// the shared token budget in listed order.
RougeScore rouge_l_summary(const std::vector<Sentence>& cand,
                           const std::vector<Sentence>& ref);

/// Recall after truncating the candidate stream to the reference length.
/// Accepts R1, R2 and RL_SENTENCE.
double rouge_recall_truncated(const std::vector<Token>& cand,
                              const std::vector<Token>& ref, RougeVariant v);

/// Componentwise mean; empty input is an error.
RougeScore corpus_average(const std::vector<RougeScore>& scores);

}  // namespace summ
