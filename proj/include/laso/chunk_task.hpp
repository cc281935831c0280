#pragma once

#include <string>
#include <vector>

#include "laso/search.hpp"
#include "laso/sentence.hpp"
#include "laso/sparse_vector.hpp"
#include "laso/task_context.hpp"

namespace laso {

// A partially chunked sentence: tiles cover the first `covered` tokens
// without gaps, outside tokens as unit spans labeled O.
struct ChunkState {
  int covered = 0;
  std::vector<ChunkSpan> tiles;

  bool operator==(const ChunkState&) const = default;
};

// Segmentation-and-labeling search over whole chunks: an operator extends
// the covered prefix by one labeled chunk of any length up to the configured
// cap, or by a single O token. The gold path hypothesizes the gold tiling
// left to right, so exactly one child of a good state is good.
class ChunkTask {
 public:
  using State = ChunkState;
  using Gold = std::vector<ChunkSpan>;

  ChunkTask(const Sentence* sentence, TaskContext* ctx);

  // The unique gold tiling: gold chunks with unit O tiles in the gaps.
  static Gold gold_tiling(const Sentence& sentence);

  State initial_state() const { return {}; }
  SparseVector initial_features() const { return {}; }

  bool is_goal(const State& s) const {
    return s.covered == static_cast<int>(sentence_->size());
  }

  std::vector<Transition<State>> expand(const State& s) const;
  bool is_good(const State& s, const Gold& gold) const;
  std::vector<Transition<State>> good_successors(const State& s,
                                                 const Gold& gold) const;

  // Feature vector for hypothesizing `span` after a chunk labeled
  // `prev_label` ("<s>" at the sentence start).
  SparseVector span_features(const ChunkSpan& span,
                             const std::string& prev_label) const;

  const Sentence& sentence() const { return *sentence_; }

 private:
  const Sentence* sentence_;
  TaskContext* ctx_;
  // Per-token base features and the single-valued template values used for
  // sequence and n-gram meta features.
  std::vector<std::vector<std::string>> base_;
  std::vector<std::vector<std::string>> seq_vals_;
};

// Names of the single-valued base templates that participate in sequence
// and n-gram meta features.
const std::vector<std::string>& chunk_sequence_templates();

}  // namespace laso
