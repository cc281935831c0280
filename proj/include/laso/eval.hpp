#pragma once

#include <vector>

#include "laso/joint_task.hpp"
#include "laso/sentence.hpp"

namespace laso {

struct EvalResult {
  // Chunk-level exact-span match. Precision is 0 when nothing was predicted.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long gold_spans = 0;
  long predicted_spans = 0;
  long correct_spans = 0;

  // Token-level accuracies (joint task only).
  double tag_accuracy = 0.0;        // part of speech
  double chunk_tag_accuracy = 0.0;  // BIO tag
  double joint_accuracy = 0.0;      // both at once
};

// Exact-match span scoring over parallel per-sentence span lists.
EvalResult evaluate_chunks(const std::vector<std::vector<ChunkSpan>>& gold,
                           const std::vector<std::vector<ChunkSpan>>& predicted);

// Token accuracies plus span f-score (spans decoded from the bio tags).
// Rejects sentence-count or sentence-length mismatches.
EvalResult evaluate_joint(const std::vector<std::vector<JointLabel>>& gold,
                          const std::vector<std::vector<JointLabel>>& predicted);

}  // namespace laso
