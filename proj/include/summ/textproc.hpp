#pragma once

#include <map>
#include <string>
#include <vector>

#include "summ/types.hpp"

namespace summ {

/// Lowercase, strip punctuation (intra-word hyphens/apostrophes survive),
/// split on whitespace, optionally Porter-stem each token.
std::vector<Token> normalize_tokens(const std::string& raw, bool stem = false);

/// Porter (1980) stemmer. Input must already be lowercase.
std::string porter_stem(const std::string& word);

using NGramCounts = std::map<std::vector<Token>, int>;

/// Multiset of order-n token windows. n < 1 is an error; short inputs give {}.
NGramCounts ngrams(const std::vector<Token>& tokens, int n);

int lcs_length(const std::vector<Token>& a, const std::vector<Token>& b);

/// Reference-side positions of one canonical longest common subsequence,
/// ties broken toward earliest reference index then earliest candidate index.
/// Sorted ascending; size equals lcs_length(ref, cand).
std::vector<int> lcs_union_positions(const std::vector<Token>& ref,
                                     const std::vector<Token>& cand);

Sentence make_sentence(const std::string& raw, bool stem = false);

}  // namespace summ
