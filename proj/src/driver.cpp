#include "laso/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "laso/errors.hpp"

namespace laso {

namespace {

// Owns the pieces TaskContext points at; not movable once wired.
struct BuiltContext {
  FeatureIndexer indexer;
  TaskContext ctx;

  BuiltContext() { ctx.indexer = &indexer; }
  BuiltContext(const BuiltContext&) = delete;
  BuiltContext& operator=(const BuiltContext&) = delete;
};

void collect_vocab(const std::vector<Sentence>& data, TaskKind task,
                   TaskContext* ctx, int max_chunk_length) {
  std::set<std::string> labels, pos;
  int longest = 0;
  for (const auto& s : data) {
    for (const auto& c : s.chunks) {
      labels.insert(c.label);
      longest = std::max(longest, c.length());
    }
    if (task == TaskKind::kJoint) {
      for (const auto& p : s.pos) pos.insert(p);
    }
  }
  ctx->chunk_labels.assign(labels.begin(), labels.end());
  if (task == TaskKind::kChunk && longest > max_chunk_length) {
    throw ConfigError("a gold chunk spans " + std::to_string(longest) +
                      " tokens but max chunk length is " +
                      std::to_string(max_chunk_length));
  }
  if (task == TaskKind::kJoint) {
    ctx->pos_tags.assign(pos.begin(), pos.end());
    ctx->bio_tags = bio_tagset(ctx->chunk_labels);
  }
}

LearnerConfig learner_config(const RunConfig& cfg) {
  LearnerConfig lc;
  lc.rule = cfg.rule;
  lc.policy = EnqueuePolicy::beam(cfg.beam_train);
  lc.mode = cfg.mode;
  lc.epochs = effective_epochs(cfg);
  lc.average = cfg.average;
  lc.shuffle = cfg.shuffle;
  lc.stop_when_converged = cfg.stop_when_converged;
  lc.seed = cfg.seed;
  return lc;
}

template <class Task>
std::vector<TrainItem<Task>> build_items(const std::vector<Sentence>& data,
                                         TaskContext* ctx);

template <>
std::vector<TrainItem<ChunkTask>> build_items(const std::vector<Sentence>& data,
                                              TaskContext* ctx) {
  std::vector<TrainItem<ChunkTask>> items;
  items.reserve(data.size());
  for (const auto& s : data) {
    items.push_back({ChunkTask(&s, ctx), ChunkTask::gold_tiling(s)});
  }
  return items;
}

template <>
std::vector<TrainItem<JointTask>> build_items(const std::vector<Sentence>& data,
                                              TaskContext* ctx) {
  std::vector<TrainItem<JointTask>> items;
  items.reserve(data.size());
  for (const auto& s : data) {
    items.push_back({JointTask(&s, ctx), JointTask::gold_labels(s)});
  }
  return items;
}

}  // namespace

int effective_epochs(const RunConfig& cfg) {
  if (cfg.epochs >= 0) return cfg.epochs;
  return cfg.rule.is_alma() ? 3 : 8;
}

TrainOutput train_model(const std::vector<Sentence>& data, const RunConfig& cfg,
                        std::ostream* log, const TrainInstrumentation& instr) {
  if (cfg.beam_train < 1) throw ConfigError("training beam must be >= 1");

  BuiltContext bc;
  bc.ctx.cfg = cfg.templates;
  bc.ctx.gazetteers = GazetteerSet::load(cfg.gazetteer_specs, log);
  collect_vocab(data, cfg.task, &bc.ctx, cfg.templates.max_chunk_length);

  const LearnerConfig lc = learner_config(cfg);
  TrainOutput out;
  if (cfg.task == TaskKind::kChunk) {
    const auto items = build_items<ChunkTask>(data, &bc.ctx);
    auto r = train(items, lc, instr.chunk);
    out.report = r.report;
    out.model.weights =
        (cfg.average ? r.averaged : r.raw).dense(bc.indexer.size());
  } else {
    const auto items = build_items<JointTask>(data, &bc.ctx);
    auto r = train(items, lc, instr.joint);
    out.report = r.report;
    out.model.weights =
        (cfg.average ? r.averaged : r.raw).dense(bc.indexer.size());
  }

  Model& m = out.model;
  m.task = cfg.task;
  m.rule = cfg.rule;
  m.mode = cfg.mode;
  m.averaged = cfg.average;
  m.beam_train = cfg.beam_train;
  m.epochs = static_cast<std::uint32_t>(out.report.epochs_run);
  m.seed = cfg.seed;
  m.cfg = cfg.templates;
  m.chunk_labels = bc.ctx.chunk_labels;
  m.pos_tags = bc.ctx.pos_tags;
  m.gazetteer_names = bc.ctx.gazetteers.names();
  m.feature_names.reserve(bc.indexer.size());
  for (std::uint32_t i = 0; i < bc.indexer.size(); ++i) {
    m.feature_names.push_back(bc.indexer.name_of(i));
  }
  return out;
}

std::vector<Sentence> decode_corpus(const Model& model,
                                    std::vector<Sentence> input,
                                    std::uint32_t beam,
                                    const GazetteerSet& gazetteers,
                                    unsigned threads, double* wall_seconds) {
  const std::uint32_t width = beam == 0 ? model.beam_train : beam;
  if (width < 1) throw ConfigError("decoding beam must be >= 1");

  BuiltContext bc;
  bc.ctx.cfg = model.cfg;
  bc.ctx.gazetteers = gazetteers;
  bc.ctx.chunk_labels = model.chunk_labels;
  bc.ctx.pos_tags = model.pos_tags;
  bc.ctx.bio_tags = bio_tagset(model.chunk_labels);
  for (const auto& name : model.feature_names) bc.indexer.intern(name);
  bc.indexer.freeze();

  const WeightVector w = WeightVector::from_dense(model.weights);
  const EnqueuePolicy policy = EnqueuePolicy::beam(width);

  const auto decode_one = [&](Sentence& s) {
    if (model.task == TaskKind::kChunk) {
      ChunkTask task(&s, &bc.ctx);
      const auto goal = search(task, w, policy);
      if (!goal) throw ContractViolation("decode queue emptied before a goal");
      std::vector<ChunkSpan> spans;
      for (const auto& tile : goal->state.tiles) {
        if (tile.label != "O") spans.push_back(tile);
      }
      s.bio = bio_from_spans(spans, s.size());
      s.chunks = std::move(spans);
    } else {
      JointTask task(&s, &bc.ctx);
      const auto goal = search(task, w, policy);
      if (!goal) throw ContractViolation("decode queue emptied before a goal");
      for (std::size_t i = 0; i < s.size(); ++i) {
        s.pos[i] = goal->state.assigned[i].pos;
        s.bio[i] = goal->state.assigned[i].bio;
      }
      s.chunks = spans_from_bio(s.bio);
    }
  };

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = input.size();
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (auto& s : input) decode_one(s);
  } else {
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t]() {
        const std::size_t lo = n * t / workers;
        const std::size_t hi = n * (t + 1) / workers;
        try {
          for (std::size_t i = lo; i < hi; ++i) decode_one(input[i]);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  if (wall_seconds) {
    *wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
  return input;
}

EvalResult evaluate_for_task(TaskKind task, const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& predicted) {
  if (task == TaskKind::kChunk) {
    std::vector<std::vector<ChunkSpan>> g, p;
    g.reserve(gold.size());
    p.reserve(predicted.size());
    for (const auto& s : gold) g.push_back(s.chunks);
    for (const auto& s : predicted) p.push_back(s.chunks);
    return evaluate_chunks(g, p);
  }
  std::vector<std::vector<JointLabel>> g, p;
  g.reserve(gold.size());
  p.reserve(predicted.size());
  for (const auto& s : gold) g.push_back(JointTask::gold_labels(s));
  for (const auto& s : predicted) p.push_back(JointTask::gold_labels(s));
  return evaluate_joint(g, p);
}

SweepResult beam_sweep(const std::vector<Sentence>& train_data,
                       const std::vector<Sentence>& eval_data,
                       const RunConfig& base,
                       const std::vector<std::uint32_t>& train_beams,
                       const std::vector<std::uint32_t>& decode_beams,
                       std::ostream* log, unsigned threads) {
  if (train_beams.empty() || decode_beams.empty()) {
    throw ConfigError("beam sweep needs at least one beam on each axis");
  }
  SweepResult result;
  result.train_beams = train_beams;
  result.decode_beams = decode_beams;

  const GazetteerSet gazetteers = GazetteerSet::load(base.gazetteer_specs, log);
  for (const std::uint32_t tb : train_beams) {
    RunConfig cfg = base;
    cfg.beam_train = tb;
    const TrainOutput trained = train_model(train_data, cfg, log);
    if (log) {
      *log << "sweep: trained beam " << tb << " (" << trained.report.total_updates
           << " updates, " << trained.report.wall_seconds << "s)\n";
    }
    std::vector<double> row;
    row.reserve(decode_beams.size());
    for (const std::uint32_t db : decode_beams) {
      const auto predicted =
          decode_corpus(trained.model, eval_data, db, gazetteers, threads);
      row.push_back(evaluate_for_task(base.task, eval_data, predicted).f1);
    }
    result.f1.push_back(std::move(row));
  }
  return result;
}

BoundsReport verify_bounds(const std::vector<Sentence>& data,
                           const RunConfig& cfg, std::size_t subset,
                           std::ostream* log) {
  std::vector<Sentence> sub(
      data.begin(),
      data.begin() + static_cast<long>(std::min(subset, data.size())));

  BuiltContext bc;
  bc.ctx.cfg = cfg.templates;
  bc.ctx.gazetteers = GazetteerSet::load(cfg.gazetteer_specs, log);
  collect_vocab(sub, cfg.task, &bc.ctx, cfg.templates.max_chunk_length);

  LearnerConfig lc = learner_config(cfg);
  lc.epochs = cfg.epochs >= 0 ? cfg.epochs : 50;  // convergence cap
  lc.stop_when_converged = true;
  lc.average = false;

  BoundsReport rep;
  rep.sentences = sub.size();

  const auto measure = [&](const auto& items, const TrainResult& r) {
    rep.updates = r.report.total_updates;
    rep.epochs_run = r.report.epochs_run;
    rep.converged = r.report.converged;
    const auto diag =
        empirical_margin(items, r.raw, EnqueuePolicy::beam(cfg.beam_train));
    rep.margin = diag.margin;
    if (cfg.rule.is_alma()) {
      rep.bound = rep.margin > 0 ? bound_alma(cfg.rule.alpha, rep.margin) : 0.0;
    } else {
      rep.radius = feature_radius(items);
      rep.bound =
          rep.margin > 0 ? bound_perceptron(rep.radius, rep.margin) : 0.0;
    }
    rep.applicable = rep.converged && rep.margin > 0;
    rep.pass = rep.applicable &&
               static_cast<double>(rep.updates) <= rep.bound;
  };

  if (cfg.task == TaskKind::kChunk) {
    const auto items = build_items<ChunkTask>(sub, &bc.ctx);
    measure(items, train(items, lc));
  } else {
    const auto items = build_items<JointTask>(sub, &bc.ctx);
    measure(items, train(items, lc));
  }
  return rep;
}

}  // namespace laso
