#pragma once

#include <string>
#include <vector>

namespace summ {

// Normalized token: lowercase, non-empty, no whitespace.
using Token = std::string;

struct Sentence {
  std::string raw;
  std::vector<Token> tokens;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
};

using ReferenceSummary = std::vector<Sentence>;

}  // namespace summ
