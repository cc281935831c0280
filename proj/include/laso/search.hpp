#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "laso/errors.hpp"
#include "laso/sparse_vector.hpp"
#include "laso/weight_vector.hpp"

namespace laso {

// One operator application: successor state plus the features introduced by
// the step. Path features are cumulative sums of these deltas. advance is
// the progress the step makes (tokens covered for segmenting tasks, 1 for
// tag-a-token tasks); hypotheses are only ever ranked against hypotheses of
// equal cumulative progress, and all complete outputs share the same total.
template <class State>
struct Transition {
  State state;
  SparseVector delta;
  int advance = 1;
};

// A search hypothesis. Nodes are immutable once published; beams hold
// shared_ptrs and parents stay alive through child references.
template <class State>
struct SearchNode {
  using Ptr = std::shared_ptr<const SearchNode<State>>;

  State state;
  Ptr parent;                  // null at the root
  SparseVector path_features;  // root features + sum of deltas along the path
  double g = 0.0;              // w . path_features at scoring time
  double h = 0.0;              // heuristic value, 0 unless one is supplied
  double rank = 0.0;           // queue comparison score: g + h - goodness penalty
  int depth = 0;               // cumulative advance from the root
  bool good = false;           // cached y-goodness; meaningful during learning only

  double score() const { return g + h; }
};

// Queue discipline for the enqueue function. Greedy and beam(1) are required
// to produce identical dequeue sequences, so greedy is beam(1) under the
// hood; exhaustive retains everything, sorted.
struct EnqueuePolicy {
  enum class Kind { kGreedy, kBeam, kExhaustive };

  Kind kind = Kind::kBeam;
  int width = 1;

  static EnqueuePolicy greedy() { return {Kind::kGreedy, 1}; }
  static EnqueuePolicy beam(int w) { return {Kind::kBeam, w}; }
  static EnqueuePolicy exhaustive() {
    return {Kind::kExhaustive, std::numeric_limits<int>::max()};
  }

  int effective_width() const {
    return kind == Kind::kExhaustive ? std::numeric_limits<int>::max() : width;
  }
  bool valid() const { return width >= 1; }
};

template <class State>
using Heuristic = std::function<double(const State&)>;

// Merge new_nodes into queue and keep the policy's retention set: the
// width best by rank, ties broken by insertion order (stable).
template <class State>
std::vector<typename SearchNode<State>::Ptr> enqueue(
    const EnqueuePolicy& policy,
    std::vector<typename SearchNode<State>::Ptr> queue,
    std::vector<typename SearchNode<State>::Ptr> new_nodes) {
  for (auto& n : new_nodes) queue.push_back(std::move(n));
  std::stable_sort(queue.begin(), queue.end(),
                   [](const auto& a, const auto& b) { return a->rank > b->rank; });
  std::size_t w = static_cast<std::size_t>(policy.effective_width());
  if (queue.size() > w) queue.resize(w);
  return queue;
}

// Expand a non-goal node and score each child incrementally:
// child.g = node.g + w . delta. A task returning no children for a non-goal
// state has broken its contract.
template <class Task>
std::vector<typename SearchNode<typename Task::State>::Ptr> expand_and_score(
    const Task& task, const typename SearchNode<typename Task::State>::Ptr& node,
    const WeightVector& w, const Heuristic<typename Task::State>& h = nullptr) {
  using Node = SearchNode<typename Task::State>;
  std::vector<Transition<typename Task::State>> next = task.expand(node->state);
  if (next.empty()) {
    throw ContractViolation("expand() returned no successors for a non-goal state");
  }
  std::vector<typename Node::Ptr> children;
  children.reserve(next.size());
  for (auto& tr : next) {
    auto child = std::make_shared<Node>();
    child->state = std::move(tr.state);
    child->parent = node;
    child->path_features = add(node->path_features, tr.delta);
    child->g = node->g + w.dot(tr.delta);
    child->h = h ? h(child->state) : 0.0;
    child->rank = child->g + child->h;
    child->depth = node->depth + tr.advance;
    children.push_back(std::move(child));
  }
  return children;
}

template <class Task>
typename SearchNode<typename Task::State>::Ptr make_root(const Task& task,
                                                         const WeightVector& w) {
  using Node = SearchNode<typename Task::State>;
  auto root = std::make_shared<Node>();
  root->state = task.initial_state();
  root->path_features = task.initial_features();
  root->g = w.dot(root->path_features);
  root->rank = root->g;
  return root;
}

template <class State>
struct SearchHooks {
  std::function<void(const typename SearchNode<State>::Ptr&)> on_dequeue;
};

// Generic agenda search. The frontier is synchronized by progress (node
// depth = cumulative advance): children accumulate in per-depth buckets, and
// when the agenda reaches a bucket it is cut to the policy's width and every
// retained node is dequeued (goal-tested, then expanded) before the next
// bucket opens. For unit-advance tasks this is plain round-by-round beam
// search; for segmenting tasks it keeps hypotheses comparable and puts all
// complete outputs in the final bucket. Returns the first dequeued goal, or
// null if the agenda empties (not reachable for tasks that honor the expand
// contract). Search spaces must be acyclic with strictly positive advance;
// cyclic tasks need their own visited memory.
template <class Task>
typename SearchNode<typename Task::State>::Ptr search(
    const Task& task, const WeightVector& w, const EnqueuePolicy& policy,
    const Heuristic<typename Task::State>& h = nullptr,
    const SearchHooks<typename Task::State>& hooks = {}) {
  using Node = SearchNode<typename Task::State>;
  using Ptr = typename Node::Ptr;

  std::map<int, std::vector<Ptr>> pending;
  {
    auto root = make_root(task, w);
    pending[root->depth].push_back(std::move(root));
  }
  while (!pending.empty()) {
    auto first = pending.begin();
    std::vector<Ptr> bucket =
        enqueue<typename Task::State>(policy, {}, std::move(first->second));
    pending.erase(first);
    for (const auto& node : bucket) {
      if (hooks.on_dequeue) hooks.on_dequeue(node);
      if (task.is_goal(node->state)) return node;
      for (auto& child : expand_and_score(task, node, w, h)) {
        pending[child->depth].push_back(std::move(child));
      }
    }
  }
  return nullptr;  // agenda emptied: Failure
}

// Reconstruct the root-to-node state sequence (testing / tracing).
template <class State>
std::vector<State> path_states(const typename SearchNode<State>::Ptr& node) {
  std::vector<State> states;
  for (auto cur = node; cur; cur = cur->parent) states.push_back(cur->state);
  std::reverse(states.begin(), states.end());
  return states;
}

}  // namespace laso
