#include "summ/abstractor.hpp"

#include <map>

namespace summ {

ExtendedVocab ExtendedVocab::from_source(const Vocab& v,
                                         const std::vector<Token>& src) {
  ExtendedVocab ev;
  ev.base = &v;
  std::map<std::string, int> seen;
  for (const Token& tok : src) {
    if (v.contains(tok)) {
      ev.src_ext_ids.push_back(v.id_or_unk(tok));
      continue;
    }
    auto it = seen.find(tok);
    int id;
    if (it == seen.end()) {
      id = v.size() + static_cast<int>(ev.oov.size());
      seen[tok] = id;
      ev.oov.push_back(tok);
    } else {
      id = it->second;
    }
    ev.src_ext_ids.push_back(id);
  }
  return ev;
}

int ExtendedVocab::ext_id(const std::string& w) const {
  if (base->contains(w)) return base->id_or_unk(w);
  for (size_t i = 0; i < oov.size(); ++i)
    if (oov[i] == w) return base->size() + static_cast<int>(i);
  return Vocab::kUnk;
}

std::string ExtendedVocab::word(int id) const {
  if (id < base->size()) return base->word(id);
  int k = id - base->size();
  if (k >= static_cast<int>(oov.size()))
    throw std::out_of_range("extended id out of range: " + std::to_string(id));
  return oov[k];
}

Sentence identity_abstract(const Sentence& source) { return source; }

namespace {

void count_trigrams(const BeamHypothesis& h,
                    std::map<std::vector<Token>, int>& into) {
  if (h.words.size() < 3) return;
  for (size_t i = 0; i + 3 <= h.words.size(); ++i)
    ++into[{h.words[i], h.words[i + 1], h.words[i + 2]}];
}

int repeated_from_counts(const std::map<std::vector<Token>, int>& counts) {
  int repeated = 0;
  for (const auto& [gram, c] : counts) repeated += c - 1;
  return repeated;
}

double combo_score(const std::vector<const BeamHypothesis*>& combo) {
  double s = 0;
  for (const auto* h : combo) s += h->norm_score();
  return s;
}

}  // namespace

int repeated_trigram_count(const std::vector<const BeamHypothesis*>& combo) {
  std::map<std::vector<Token>, int> counts;
  for (const auto* h : combo) count_trigrams(*h, counts);
  return repeated_from_counts(counts);
}

std::vector<BeamHypothesis> rerank(
    const std::vector<std::vector<BeamHypothesis>>& candidates,
    long exhaustive_budget) {
  if (candidates.empty()) return {};
  long combos = 1;
  for (const auto& list : candidates) {
    if (list.empty()) throw std::invalid_argument("empty candidate list");
    if (combos > 0 && combos <= exhaustive_budget)
      combos *= static_cast<long>(list.size());
  }
  const size_t n = candidates.size();

  auto materialize = [&](const std::vector<int>& pick) {
    std::vector<const BeamHypothesis*> combo(n);
    for (size_t i = 0; i < n; ++i) combo[i] = &candidates[i][pick[i]];
    return combo;
  };

  std::vector<int> best_pick;
  int best_rep = 0;
  double best_score = 0;
  auto consider = [&](const std::vector<int>& pick) {
    auto combo = materialize(pick);
    int rep = repeated_trigram_count(combo);
    double score = combo_score(combo);
    if (best_pick.empty() || rep < best_rep ||
        (rep == best_rep && score > best_score)) {
      best_pick = pick;
      best_rep = rep;
      best_score = score;
    }
  };

  if (combos <= exhaustive_budget) {
    std::vector<int> pick(n, 0);
    while (true) {
      consider(pick);
      size_t d = 0;
      while (d < n) {
        if (++pick[d] < static_cast<int>(candidates[d].size())) break;
        pick[d] = 0;
        ++d;
      }
      if (d == n) break;
    }
  } else {
    // greedy sequential choice, then never worse than taking every top-1
    std::vector<int> pick;
    std::map<std::vector<Token>, int> counts;
    for (size_t i = 0; i < n; ++i) {
      int best_j = -1;
      int best_j_rep = 0;
      double best_j_score = 0;
      for (size_t j = 0; j < candidates[i].size(); ++j) {
        auto trial = counts;
        count_trigrams(candidates[i][j], trial);
        int rep = repeated_from_counts(trial);
        double score = candidates[i][j].norm_score();
        if (best_j < 0 || rep < best_j_rep ||
            (rep == best_j_rep && score > best_j_score)) {
          best_j = static_cast<int>(j);
          best_j_rep = rep;
          best_j_score = score;
        }
      }
      pick.push_back(best_j);
      count_trigrams(candidates[i][best_j], counts);
    }
    consider(pick);
    consider(std::vector<int>(n, 0));
  }

  std::vector<BeamHypothesis> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(candidates[i][best_pick[i]]);
  return out;
}

}  // namespace summ
