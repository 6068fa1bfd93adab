#include "summ/synth.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

#include "summ/oracle.hpp"
#include "summ/rng.hpp"

namespace summ {

namespace {

std::string salient_token(int id) { return "w" + std::to_string(id); }
std::string distractor_token(int id) { return "d" + std::to_string(id); }

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

/// k distinct values from [0, n) via partial Fisher-Yates, order randomized.
std::vector<int> sample_distinct(Rng& rng, int n, int k) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    int j = i + rng.uniform_int(n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

std::vector<std::string> noised_copy(const std::vector<std::string>& ref,
                                     double noise_rate, int vocab_size,
                                     Rng& rng) {
  std::vector<std::string> out;
  for (const std::string& tok : ref) {
    double u = rng.uniform();
    if (u < noise_rate) {
      double v = rng.uniform();
      if (v < 0.5) continue;  // drop
      int d = rng.uniform_int(vocab_size);
      out.push_back(distractor_token(d));
    } else {
      out.push_back(tok);
    }
  }
  if (out.empty()) out.push_back(ref.front());
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_docs < 1) throw std::invalid_argument("n_docs must be positive");
  if (ref_sentences < 2 || ref_sentences > 4)
    throw std::invalid_argument("ref_sentences must be in [2, 4]");
  if (vocab_size < 6 * ref_sentences)
    throw std::invalid_argument("vocab_size too small for reference sentences");
  if (distractors < 1 || distractors > 18)
    throw std::invalid_argument("distractors must be in [1, 18]");
  if (near_duplicate_rate < 0.0 || near_duplicate_rate > 1.0)
    throw std::invalid_argument("near_duplicate_rate must be in [0, 1]");
  if (noise_rate < 0.0 || noise_rate > 1.0)
    throw std::invalid_argument("noise_rate must be in [0, 1]");
}

std::vector<SyntheticDoc> gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng master(spec.seed);
  std::vector<SyntheticDoc> corpus;
  corpus.reserve(spec.n_docs);
  for (int d = 0; d < spec.n_docs; ++d) {
    Rng rng = master.split(static_cast<uint64_t>(d) + 1);
    int m = 2 + rng.uniform_int(spec.ref_sentences - 1);
    bool trap = rng.uniform() < spec.near_duplicate_rate;

    std::vector<int> lens(m);
    for (int t = 0; t < m; ++t) lens[t] = 4 + rng.uniform_int(3);
    if (trap) lens[1] = 6;  // the fragmented sentence needs an even split
    int total = std::accumulate(lens.begin(), lens.end(), 0);

    std::vector<int> ids = sample_distinct(rng, spec.vocab_size, total);
    std::vector<std::vector<std::string>> refs(m);
    int pos = 0;
    for (int t = 0; t < m; ++t)
      for (int j = 0; j < lens[t]; ++j) refs[t].push_back(salient_token(ids[pos++]));

    int k = spec.distractors - rng.uniform_int(3);
    if (k < 1) k = 1;

    std::vector<std::vector<std::string>> article;
    for (int t = 0; t < m; ++t) {
      if (trap && t == 0) {
        article.push_back(refs[0]);  // verbatim; its near-duplicate follows
      } else if (trap && t == 1) {
        std::vector<std::string> big = refs[1];
        int junk = rng.uniform_int(spec.vocab_size);
        big.back() = distractor_token(junk);
        article.push_back(big);
      } else {
        article.push_back(noised_copy(refs[t], spec.noise_rate, spec.vocab_size, rng));
      }
    }
    if (trap) {
      std::vector<std::string> dup = refs[0];
      int junk = rng.uniform_int(spec.vocab_size);
      dup.back() = distractor_token(junk);
      article.push_back(dup);
      article.emplace_back(refs[1].begin(), refs[1].begin() + 3);
      article.emplace_back(refs[1].begin() + 3, refs[1].end());
    }
    for (int j = 0; j < k; ++j) {
      int dlen = 4 + rng.uniform_int(3);
      std::vector<int> dids = sample_distinct(rng, spec.vocab_size, dlen);
      std::vector<std::string> sent;
      for (int id : dids) sent.push_back(distractor_token(id));
      article.push_back(std::move(sent));
    }
    for (size_t i = article.size(); i > 1; --i) {
      int j = rng.uniform_int(static_cast<int>(i));
      std::swap(article[i - 1], article[static_cast<size_t>(j)]);
    }

    SyntheticDoc sd;
    sd.trap = trap;
    char idbuf[24];
    std::snprintf(idbuf, sizeof(idbuf), "synth-%04d", d);
    sd.record.id = idbuf;
    for (const auto& sent : article) sd.record.article.push_back(join(sent));
    for (const auto& ref : refs) sd.record.abstract.push_back(join(ref));
    OracleLabel best = combination_search(to_document(sd.record),
                                          to_reference(sd.record), 5);
    sd.optimal = best.selected;
    corpus.push_back(std::move(sd));
  }
  return corpus;
}

}  // namespace summ
