#include "summ/vocab.hpp"

#include <algorithm>
#include <stdexcept>

namespace summ {

Vocab::Vocab() : Vocab(std::vector<std::string>{}) {}

Vocab::Vocab(const std::vector<std::string>& content_words) {
  words_ = {"<pad>", "<unk>", "<bos>", "<eos>"};
  for (const auto& w : content_words) {
    if (ids_.count(w) || w == "<pad>" || w == "<unk>" || w == "<bos>" ||
        w == "<eos>")
      throw std::invalid_argument("duplicate vocab word: " + w);
    ids_[w] = static_cast<int>(words_.size());
    words_.push_back(w);
  }
  for (int i = 0; i < 4; ++i) ids_[words_[i]] = i;
}

Vocab Vocab::build(const std::vector<std::vector<Token>>& texts,
                   int max_words) {
  if (max_words < 0) throw std::invalid_argument("max_words must be >= 0");
  std::map<std::string, long> freq;
  for (const auto& text : texts)
    for (const auto& tok : text) ++freq[tok];
  std::vector<std::pair<std::string, long>> items(freq.begin(), freq.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(items.size()) > max_words) items.resize(max_words);
  std::vector<std::string> words;
  words.reserve(items.size());
  for (auto& [w, c] : items) words.push_back(w);
  return Vocab(words);
}

int Vocab::id_or_unk(const std::string& w) const {
  auto it = ids_.find(w);
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocab::contains(const std::string& w) const { return ids_.count(w) > 0; }

const std::string& Vocab::word(int id) const {
  if (id < 0 || id >= size())
    throw std::out_of_range("vocab id out of range: " + std::to_string(id));
  return words_[id];
}

std::vector<std::string> Vocab::content_words() const {
  return std::vector<std::string>(words_.begin() + 4, words_.end());
}

}  // namespace summ
