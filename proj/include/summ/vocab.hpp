#pragma once

#include <map>
#include <string>
#include <vector>

#include "summ/types.hpp"

namespace summ {

/// Fixed word list with control tokens at reserved ids.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;

  Vocab();
  explicit Vocab(const std::vector<std::string>& content_words);

  /// Most frequent `max_words` content words; ties by lexicographic order.
  static Vocab build(const std::vector<std::vector<Token>>& texts,
                     int max_words);

  int id_or_unk(const std::string& w) const;
  bool contains(const std::string& w) const;
  const std::string& word(int id) const;
  int size() const { return static_cast<int>(words_.size()); }

  /// Content words in id order (excludes the four control tokens).
  std::vector<std::string> content_words() const;

 private:
  std::vector<std::string> words_;
  std::map<std::string, int> ids_;
};

}  // namespace summ
