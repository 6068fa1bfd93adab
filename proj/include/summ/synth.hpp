#pragma once

#include <cstdint>
#include <vector>

#include "summ/data.hpp"

namespace summ {

/// Controls for the synthetic corpus generator. Each document mixes noised
/// copies of its reference sentences with distractor sentences drawn from a
/// disjoint vocabulary; a trap document additionally plants a near-duplicate
/// of one salient sentence plus fragment sentences that jointly cover another,
/// rewarding selections that avoid redundancy.
struct SyntheticSpec {
  int n_docs = 200;
  int vocab_size = 150;       // size of each of the two disjoint token pools
  int ref_sentences = 3;      // per-doc reference count drawn from {2..this}
  int distractors = 8;        // per-doc count drawn from {this-2..this}, >=1
  double near_duplicate_rate = 0.0;  // probability a document is a trap
  double noise_rate = 0.0;    // per-token drop/swap probability in copies
  uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument on bad fields
};

struct SyntheticDoc {
  DatasetRecord record;
  std::vector<int> optimal;  // exhaustive-search selection, ascending
  bool trap = false;
};

/// Deterministic generator: a fixed spec (seed included) always produces the
/// same corpus, independent of call order. With noise_rate 0 and
/// near_duplicate_rate 0 the optimal selection is exactly the planted copies.
std::vector<SyntheticDoc> gen_synthetic(const SyntheticSpec& spec);

}  // namespace summ
