#pragma once

#include <string>
#include <vector>

#include "laso/search.hpp"
#include "laso/sentence.hpp"
#include "laso/sparse_vector.hpp"
#include "laso/task_context.hpp"

namespace laso {

// One joint decision: a part of speech plus a BIO chunk tag.
struct JointLabel {
  std::string pos;
  std::string bio;

  bool operator==(const JointLabel&) const = default;
};

// Left-to-right prefix of joint label assignments.
struct JointState {
  std::vector<JointLabel> assigned;

  bool operator==(const JointState&) const = default;
};

// Joint tagging-and-chunking search: one token per step, each operator
// assigns a (pos, bio) pair. BIO continuation tags are only offered where
// they are legal, so every reachable goal decodes to a well-formed chunking.
class JointTask {
 public:
  using State = JointState;
  using Gold = std::vector<JointLabel>;

  JointTask(const Sentence* sentence, TaskContext* ctx);

  // Pairs the sentence's gold pos and bio columns.
  static Gold gold_labels(const Sentence& sentence);

  // An I-X tag may only follow B-X or I-X of the same type. prev is "O" at
  // the sentence start.
  static bool bio_legal(const std::string& prev, const std::string& next);

  State initial_state() const { return {}; }
  SparseVector initial_features() const { return {}; }

  bool is_goal(const State& s) const {
    return s.assigned.size() == sentence_->size();
  }

  std::vector<Transition<State>> expand(const State& s) const;
  bool is_good(const State& s, const Gold& gold) const;
  std::vector<Transition<State>> good_successors(const State& s,
                                                 const Gold& gold) const;

  // Feature vector for assigning `label` at `position` after `prev` ("O" pos
  // and bio at the sentence start).
  SparseVector step_features(std::size_t position, const JointLabel& label,
                             const JointLabel& prev) const;

  const Sentence& sentence() const { return *sentence_; }

 private:
  const Sentence* sentence_;
  TaskContext* ctx_;
  // Per-token base features (word-level only: pos is an output here).
  std::vector<std::vector<std::string>> base_;
  // Feature ids of the label-conjoined main block, cached per
  // (position, pos, bio) on first use; the transition features are appended
  // per call. Mutable cache: filled lazily during expansion.
  mutable std::vector<std::vector<std::vector<std::vector<SparseVector::Entry>>>>
      main_cache_;
  mutable std::vector<std::vector<std::vector<bool>>> main_cached_;

  std::size_t pos_index(const std::string& pos) const;
  std::size_t bio_index(const std::string& bio) const;
};

}  // namespace laso
