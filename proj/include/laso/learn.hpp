#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "laso/errors.hpp"
#include "laso/search.hpp"
#include "laso/sparse_vector.hpp"
#include "laso/weight_vector.hpp"

namespace laso {

// When the learner reacts to a search error.
//   kLaso:        update at the error, re-seed the queue with the good
//                 siblings, keep searching the same example.
//   kEarlyUpdate: update at the first error, then abandon the example.
//   kEndOnly:     never interrupt the search; one update against the gold
//                 path if the returned goal is wrong.
enum class UpdateMode { kLaso, kEarlyUpdate, kEndOnly };

// Which weight update fires on an error, with its margin parameters.
struct UpdateRule {
  enum class Kind { kPerceptron, kAlma };

  Kind kind = Kind::kPerceptron;
  double alpha = 1.0;  // margin approximation ratio, (0, 1]
  double b = 0.0;      // good-node comparison penalty coefficient
  double c = 0.0;      // step size coefficient

  static UpdateRule perceptron() { return UpdateRule{}; }

  // Margin-scaled defaults; this is the configuration the mistake bound
  // for the large-margin rule is stated for.
  static UpdateRule alma(double alpha);
  static UpdateRule alma(double alpha, double b, double c);

  bool is_alma() const { return kind == Kind::kAlma; }
  // True when (b, c) are the analyzed defaults sqrt(8)/alpha and sqrt(2).
  bool analyzed_parameters() const;
};

// Penalty subtracted from y-good nodes' comparison score while training with
// the large-margin rule: (1 - alpha) * b * k^{-1/2}. Zero for the perceptron
// rule and during decoding.
double good_penalty(double alpha, double b, std::uint64_t k);

// Mistake bounds and inseparable-case diagnostics. margin is the separation
// gamma (> 0), radius bounds feature deltas, deficit is the accumulated
// shortfall from the target margin on an inseparable set.
double bound_perceptron(double radius, double margin);     // R^2 / g^2
double bound_alma(double alpha, double margin);            // (2/g^2)(2/a - 1)^2 + 8/a - 4
double bound_perceptron_inseparable(double radius, double deficit, double margin);
double bound_alma_inseparable(double deficit, double margin, double c);

// ---------------------------------------------------------------------------
// Per-node learning machinery (templated over the task).

// Children of a non-goal node with y-goodness cached top-down
// (child is good iff its parent is and the step stays on a gold path) and
// the good-node penalty folded into the comparison score.
template <class Task>
std::vector<typename SearchNode<typename Task::State>::Ptr>
expand_and_score_learning(const Task& task,
                          const typename SearchNode<typename Task::State>::Ptr& node,
                          const typename Task::Gold& gold, const WeightVector& w,
                          double penalty,
                          const Heuristic<typename Task::State>& h = nullptr) {
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
    child->depth = node->depth + tr.advance;
    child->good = node->good && task.is_good(child->state, gold);
    child->rank = child->g + child->h - (child->good ? penalty : 0.0);
    children.push_back(std::move(child));
  }
  return children;
}

// An error has happened when no y-good hypothesis survives anywhere in the
// queue (dequeued node included), or when a wrong goal is about to be
// returned.
template <class Task>
bool detect_error(const Task& task,
                  const typename SearchNode<typename Task::State>::Ptr& node,
                  const std::vector<typename SearchNode<typename Task::State>::Ptr>& rest) {
  bool any_good = node->good;
  for (const auto& r : rest) {
    if (any_good) break;
    any_good = r->good;
  }
  if (!any_good) return true;
  return task.is_goal(node->state) && !node->good;
}

// The y-good nodes the search should restart from after `node` exposed an
// error: walk back to the nearest good ancestor, then forward along good
// successors until the gold paths have caught up with node's progress (the
// first good layer at depth >= node->depth; segmenting steps can overshoot
// by part of a chunk). A good input is its own singleton sibling set.
template <class Task>
std::vector<typename SearchNode<typename Task::State>::Ptr> siblings(
    const Task& task, const typename SearchNode<typename Task::State>::Ptr& node,
    const typename Task::Gold& gold, const WeightVector& w, double penalty = 0.0,
    const Heuristic<typename Task::State>& h = nullptr) {
  using Node = SearchNode<typename Task::State>;
  using Ptr = typename Node::Ptr;
  if (node->good) return {node};
  Ptr anc = node->parent;
  while (anc && !anc->good) anc = anc->parent;
  if (!anc) throw ContractViolation("dequeued node has no y-good ancestor");

  std::vector<Ptr> layer{anc};
  for (;;) {
    std::vector<Ptr> next_layer;
    bool advanced = false;
    for (const auto& n : layer) {
      if (n->depth >= node->depth) {
        next_layer.push_back(n);
        continue;
      }
      auto steps = task.good_successors(n->state, gold);
      if (steps.empty()) {
        throw ContractViolation("y-good non-goal state has no y-good successor");
      }
      advanced = true;
      for (auto& tr : steps) {
        auto child = std::make_shared<Node>();
        child->state = std::move(tr.state);
        child->parent = n;
        child->path_features = add(n->path_features, tr.delta);
        child->g = n->g + w.dot(tr.delta);
        child->h = h ? h(child->state) : 0.0;
        child->depth = n->depth + tr.advance;
        child->good = true;
        child->rank = child->g + child->h - penalty;
        next_layer.push_back(std::move(child));
      }
    }
    layer = std::move(next_layer);
    if (!advanced) return layer;
  }
}

// Mean of the nodes' path features. Empty input is a caller bug.
template <class State>
SparseVector mean_path_features(
    const std::vector<typename SearchNode<State>::Ptr>& nodes) {
  if (nodes.empty()) {
    throw std::invalid_argument("mean_path_features: empty node set");
  }
  std::vector<SparseVector::Entry> acc;
  const double f = 1.0 / static_cast<double>(nodes.size());
  for (const auto& n : nodes) {
    for (const auto& e : n->path_features.entries()) {
      acc.emplace_back(e.first, e.second * f);
    }
  }
  return SparseVector::from_unsorted(std::move(acc));
}

// Update direction: mean of the good paths minus mean of the bad ones.
template <class State>
SparseVector update_direction(
    const std::vector<typename SearchNode<State>::Ptr>& good_nodes,
    const std::vector<typename SearchNode<State>::Ptr>& bad_nodes) {
  return subtract(mean_path_features<State>(good_nodes),
                  mean_path_features<State>(bad_nodes));
}

inline void apply_update(WeightVector& w, const UpdateRule& rule,
                         const SparseVector& delta) {
  if (rule.is_alma()) {
    w.add_projected_update(delta, rule.c);
  } else {
    w.add_update(delta);
  }
}

// Same node, rescored under the current weights (after an update the cached
// g of a re-seeded sibling would be stale, and its children inherit g
// incrementally).
template <class State>
typename SearchNode<State>::Ptr rescore(const typename SearchNode<State>::Ptr& n,
                                        const WeightVector& w,
                                        const Heuristic<State>& h, double penalty) {
  auto m = std::make_shared<SearchNode<State>>(*n);
  m->g = w.dot(m->path_features);
  m->h = h ? h(m->state) : 0.0;
  m->rank = m->g + m->h - (m->good ? penalty : 0.0);
  return typename SearchNode<State>::Ptr(std::move(m));
}

template <class State>
struct UpdateEvent {
  typename SearchNode<State>::Ptr dequeued;  // node whose dequeue exposed the error
  std::vector<typename SearchNode<State>::Ptr> bad_nodes;  // dequeued + queue rest
  std::vector<typename SearchNode<State>::Ptr> seeded;     // queue content after re-seed
  SparseVector delta;
  std::uint64_t k_before = 0;  // generation the update fired at
  int depth = 0;
};

template <class State>
struct LearnHooks {
  std::function<void(const UpdateEvent<State>&)> on_update;
  std::function<void(const typename SearchNode<State>::Ptr&)> on_dequeue;
};

// Follow good successors from the root to a goal (first good step at each
// depth). Used by the end-only mode as the reference output.
template <class Task>
typename SearchNode<typename Task::State>::Ptr gold_path_goal(
    const Task& task, const typename Task::Gold& gold, const WeightVector& w) {
  using Node = SearchNode<typename Task::State>;
  auto node = make_root(task, w);
  {
    auto mutable_root = std::const_pointer_cast<Node>(node);
    mutable_root->good = true;
  }
  while (!task.is_goal(node->state)) {
    auto steps = task.good_successors(node->state, gold);
    if (steps.empty()) {
      throw ContractViolation("y-good non-goal state has no y-good successor");
    }
    auto child = std::make_shared<Node>();
    child->state = std::move(steps.front().state);
    child->parent = node;
    child->path_features = add(node->path_features, steps.front().delta);
    child->g = node->g + w.dot(steps.front().delta);
    child->depth = node->depth + steps.front().advance;
    child->good = true;
    child->rank = child->g;
    node = std::move(child);
  }
  return node;
}

// Search-driven learning on one example. Runs the same progress-synchronized
// beam as decoding, but watches for errors: on one, it updates the weights
// from the good siblings against the queue, clears the queue, re-seeds it
// with exactly those siblings (rescored), and keeps going. Returns the
// number of updates fired.
template <class Task>
std::uint64_t learn_one(const Task& task, const typename Task::Gold& gold,
                        WeightVector& w, const EnqueuePolicy& policy,
                        const UpdateRule& rule, UpdateMode mode = UpdateMode::kLaso,
                        const LearnHooks<typename Task::State>& hooks = {},
                        const Heuristic<typename Task::State>& heur = nullptr) {
  using State = typename Task::State;
  using Node = SearchNode<State>;
  using Ptr = typename Node::Ptr;

  const auto penalty_now = [&]() {
    return rule.is_alma() ? good_penalty(rule.alpha, rule.b, w.generation()) : 0.0;
  };

  auto root = make_root(task, w);
  if (!task.is_good(root->state, gold)) {
    throw ContractViolation("initial state is not y-good");
  }
  std::const_pointer_cast<Node>(root)->good = true;

  std::map<int, std::vector<Ptr>> pending;
  pending[root->depth].push_back(std::move(root));
  std::vector<Ptr> bucket;
  std::size_t cursor = 0;
  std::uint64_t updates = 0;

  while (true) {
    if (cursor == bucket.size()) {
      if (pending.empty()) {
        throw ContractViolation("learning queue emptied before reaching a goal");
      }
      auto first = pending.begin();
      bucket = enqueue<State>(policy, {}, std::move(first->second));
      pending.erase(first);
      cursor = 0;
    }
    Ptr node = bucket[cursor++];
    if (hooks.on_dequeue) hooks.on_dequeue(node);

    std::vector<Ptr> rest(bucket.begin() + static_cast<std::ptrdiff_t>(cursor),
                          bucket.end());
    for (const auto& [depth, nodes] : pending) {
      rest.insert(rest.end(), nodes.begin(), nodes.end());
    }

    if (mode != UpdateMode::kEndOnly && detect_error(task, node, rest)) {
      auto sibs = siblings(task, node, gold, w, penalty_now(), heur);
      std::vector<Ptr> bads;
      bads.reserve(1 + rest.size());
      bads.push_back(node);
      bads.insert(bads.end(), rest.begin(), rest.end());

      const SparseVector delta = update_direction<State>(sibs, bads);
      const std::uint64_t k_before = w.generation();
      apply_update(w, rule, delta);
      ++updates;

      const double pen = penalty_now();
      std::vector<Ptr> seeded;
      seeded.reserve(sibs.size());
      for (const auto& s : sibs) seeded.push_back(rescore<State>(s, w, heur, pen));

      if (hooks.on_update) {
        hooks.on_update(UpdateEvent<State>{node, std::move(bads), seeded, delta,
                                           k_before, node->depth});
      }
      if (mode == UpdateMode::kEarlyUpdate) return updates;
      // The re-seeded queue is exactly the siblings (no width cut: seeding
      // is not an expansion); they become the active bucket as-is.
      pending.clear();
      bucket = std::move(seeded);
      cursor = 0;
      continue;
    }

    if (task.is_goal(node->state)) {
      if (mode == UpdateMode::kEndOnly && !node->good) {
        auto ref = gold_path_goal(task, gold, w);
        const SparseVector delta =
            update_direction<State>(std::vector<Ptr>{ref}, std::vector<Ptr>{node});
        const std::uint64_t k_before = w.generation();
        apply_update(w, rule, delta);
        ++updates;
        if (hooks.on_update) {
          hooks.on_update(UpdateEvent<State>{node,
                                             std::vector<Ptr>{node},
                                             std::vector<Ptr>{ref},
                                             delta,
                                             k_before,
                                             node->depth});
        }
      }
      return updates;
    }

    // Pending buckets are kept cut to the policy width as children arrive,
    // so the queue the error condition and the update see is the retained
    // set, not everything ever enqueued.
    std::map<int, std::vector<Ptr>> grouped;
    for (auto& child :
         expand_and_score_learning(task, node, gold, w, penalty_now(), heur)) {
      grouped[child->depth].push_back(std::move(child));
    }
    for (auto& [depth, nodes] : grouped) {
      auto& slot = pending[depth];
      slot = enqueue<State>(policy, std::move(slot), std::move(nodes));
    }
  }
}

// ---------------------------------------------------------------------------
// Multi-epoch driver.

template <class Task>
struct TrainItem {
  Task task;
  typename Task::Gold gold;
};

struct LearnerConfig {
  UpdateRule rule = UpdateRule::perceptron();
  EnqueuePolicy policy = EnqueuePolicy::beam(1);
  UpdateMode mode = UpdateMode::kLaso;
  int epochs = 5;
  bool average = true;
  bool stop_when_converged = false;  // stop after an epoch with zero updates
  bool shuffle = false;
  std::uint64_t seed = 1;
};

struct TrainingReport {
  std::vector<std::uint64_t> epoch_updates;
  std::uint64_t total_updates = 0;
  std::uint64_t examples = 0;
  std::uint64_t epochs_run = 0;
  bool converged = false;  // some epoch finished without an update
  double wall_seconds = 0.0;
  double final_norm = 0.0;
  std::uint64_t final_generation = 1;
  std::uint32_t feature_count = 0;
  bool averaged = true;

  std::string to_kv() const;
  std::string to_json() const;
};

struct TrainResult {
  WeightVector raw;
  WeightVector averaged;
  TrainingReport report;
};

template <class Task>
TrainResult train(const std::vector<TrainItem<Task>>& data, const LearnerConfig& cfg,
                  const LearnHooks<typename Task::State>& hooks = {},
                  const Heuristic<typename Task::State>& heur = nullptr) {
  if (!cfg.policy.valid()) throw ConfigError("beam width must be >= 1");
  if (cfg.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (cfg.rule.is_alma() && (cfg.rule.alpha <= 0.0 || cfg.rule.alpha > 1.0)) {
    throw ConfigError("alpha must lie in (0, 1]");
  }

  WeightVector w;
  TrainingReport rep;
  rep.examples = data.size();
  rep.averaged = cfg.average;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);

  const auto t0 = std::chrono::steady_clock::now();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    std::uint64_t fired = 0;
    for (std::size_t i : order) {
      try {
        fired += learn_one(data[i].task, data[i].gold, w, cfg.policy, cfg.rule,
                           cfg.mode, hooks, heur);
      } catch (const ContractViolation& e) {
        throw ContractViolation("example " + std::to_string(i) + ": " + e.what());
      }
      w.end_example();
    }
    rep.epoch_updates.push_back(fired);
    rep.total_updates += fired;
    ++rep.epochs_run;
    if (fired == 0) {
      rep.converged = true;
      if (cfg.stop_when_converged) break;
    }
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.final_norm = w.norm();
  rep.final_generation = w.generation();

  TrainResult out;
  out.report = rep;
  if (cfg.average) {
    out.averaged = w.finalize_averaged();
  } else {
    out.averaged = w;
  }
  out.raw = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------
// Separation diagnostics for bound verification.

struct MarginDiagnostics {
  // Minimum over recorded decisions of (best good child - best bad child),
  // scores divided by max(1, ||w||). Negative when some decision misorders;
  // +inf when no decision had a bad competitor.
  double margin = std::numeric_limits<double>::infinity();
  std::size_t decisions = 0;
  // D at the given target: l2 norm over decisions of max(0, target - gap),
  // 0 when every decision clears the target (or no target was given).
  double deficit = 0.0;
  double norm_divisor = 1.0;
};

// Replays each example with the gold path forced to survive pruning and
// records, per agenda bucket that holds a good node, the score gap between
// the best good node and the best bad node of that bucket (hypotheses of
// equal progress). Penalties are not applied: this measures the geometry of
// w itself.
template <class Task>
MarginDiagnostics empirical_margin(const std::vector<TrainItem<Task>>& data,
                                   const WeightVector& w, const EnqueuePolicy& policy,
                                   double target = 0.0) {
  using State = typename Task::State;
  using Node = SearchNode<State>;
  using Ptr = typename Node::Ptr;

  MarginDiagnostics diag;
  diag.norm_divisor = std::max(1.0, w.norm());
  double deficit_sq = 0.0;

  for (const auto& item : data) {
    const Task& task = item.task;
    auto root = make_root(task, w);
    std::const_pointer_cast<Node>(root)->good = true;
    if (task.is_goal(root->state)) continue;

    std::map<int, std::vector<Ptr>> pending;
    pending[root->depth].push_back(std::move(root));
    while (!pending.empty()) {
      auto first = pending.begin();
      std::vector<Ptr> bucket = std::move(first->second);
      pending.erase(first);

      Ptr best_good, best_bad;
      for (const auto& c : bucket) {
        Ptr& slot = c->good ? best_good : best_bad;
        if (!slot || c->score() > slot->score()) slot = c;
      }
      if (best_good && best_bad) {
        const double gap = (best_good->score() - best_bad->score()) / diag.norm_divisor;
        diag.margin = std::min(diag.margin, gap);
        ++diag.decisions;
        if (target > 0.0) {
          const double short_by = std::max(0.0, target - gap);
          deficit_sq += short_by * short_by;
        }
      }
      if (best_good && task.is_goal(best_good->state)) break;

      std::vector<Ptr> retained = enqueue<State>(policy, {}, std::move(bucket));
      if (best_good) {
        bool good_kept = false;
        for (const auto& n : retained) good_kept = good_kept || n->good;
        if (!good_kept) retained.back() = best_good;
      }
      for (const auto& n : retained) {
        if (task.is_goal(n->state)) continue;  // complete paths compete, not expand
        for (auto& child : expand_and_score_learning(task, n, item.gold, w, 0.0)) {
          pending[child->depth].push_back(std::move(child));
        }
      }
    }
  }
  diag.deficit = std::sqrt(deficit_sq);
  return diag;
}

// Radius of the update geometry: the largest feature distance between a
// good successor and any sibling successor of a gold-path state,
// max ||delta_good - delta_m||_2. Zero when expansions are featureless or
// identical; with binary deltas of at most d active features per step it is
// at most sqrt(2d).
template <class Task>
double feature_radius(const std::vector<TrainItem<Task>>& data) {
  double radius = 0.0;
  for (const auto& item : data) {
    const Task& task = item.task;
    typename Task::State state = task.initial_state();
    while (!task.is_goal(state)) {
      auto transitions = task.expand(state);
      for (const auto& g : transitions) {
        if (!task.is_good(g.state, item.gold)) continue;
        for (const auto& m : transitions) {
          radius = std::max(radius, subtract(g.delta, m.delta).l2_norm());
        }
      }
      auto steps = task.good_successors(state, item.gold);
      if (steps.empty()) {
        throw ContractViolation("y-good non-goal state has no y-good successor");
      }
      state = std::move(steps.front().state);
    }
  }
  return radius;
}

}  // namespace laso
