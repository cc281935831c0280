#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "laso/driver.hpp"
#include "laso/errors.hpp"

namespace {

using namespace laso;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitContract = 4;

struct TrainCliOpts {
  std::string task = "chunk";
  std::string rule = "perceptron";
  std::string mode = "laso";
  double alpha = 0.9;
  double margin_b = -1.0;  // negative: sqrt(8)/alpha
  double margin_c = -1.0;  // negative: sqrt(2)
  std::uint32_t beam = 1;
  int epochs = -1;  // negative: rule default
  bool no_average = false;
  bool shuffle = false;
  bool stop_converged = false;
  std::uint64_t seed = 1;
  std::vector<std::string> gazetteers;  // name=path
  FeatureTemplateConfig templates;
};

std::vector<std::pair<std::string, std::string>> parse_gazetteers(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
      throw ConfigError("gazetteer spec must be name=path, got: " + s);
    }
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

RunConfig to_run_config(const TrainCliOpts& o) {
  RunConfig cfg;
  if (o.task == "chunk") {
    cfg.task = TaskKind::kChunk;
  } else if (o.task == "joint") {
    cfg.task = TaskKind::kJoint;
  } else {
    throw ConfigError("unknown task '" + o.task + "' (chunk or joint)");
  }
  if (o.rule == "perceptron") {
    cfg.rule = UpdateRule::perceptron();
  } else if (o.rule == "alma") {
    try {
      cfg.rule = (o.margin_b < 0.0 && o.margin_c < 0.0)
                     ? UpdateRule::alma(o.alpha)
                     : UpdateRule::alma(o.alpha,
                                        o.margin_b < 0.0
                                            ? std::sqrt(8.0) / o.alpha
                                            : o.margin_b,
                                        o.margin_c < 0.0 ? std::sqrt(2.0)
                                                         : o.margin_c);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    throw ConfigError("unknown rule '" + o.rule + "' (perceptron or alma)");
  }
  if (o.mode == "laso") {
    cfg.mode = UpdateMode::kLaso;
  } else if (o.mode == "early" || o.mode == "early_update") {
    cfg.mode = UpdateMode::kEarlyUpdate;
  } else if (o.mode == "end" || o.mode == "end_only") {
    cfg.mode = UpdateMode::kEndOnly;
  } else {
    throw ConfigError("unknown update mode '" + o.mode +
                      "' (laso, early_update or end_only)");
  }
  cfg.beam_train = o.beam;
  cfg.epochs = o.epochs;
  cfg.average = !o.no_average;
  cfg.shuffle = o.shuffle;
  cfg.stop_when_converged = o.stop_converged;
  cfg.seed = o.seed;
  cfg.templates = o.templates;
  cfg.gazetteer_specs = parse_gazetteers(o.gazetteers);
  return cfg;
}

void add_train_options(CLI::App* cmd, TrainCliOpts* o) {
  cmd->add_option("--task", o->task, "Structured task: chunk or joint")
      ->capture_default_str();
  cmd->add_option("--rule", o->rule, "Update rule: perceptron or alma")
      ->capture_default_str();
  cmd->add_option("--mode", o->mode,
                  "Error handling: laso, early_update or end_only")
      ->capture_default_str();
  cmd->add_option("--alpha", o->alpha,
                  "Margin approximation ratio in (0, 1] (alma)")
      ->capture_default_str();
  cmd->add_option("--margin-b", o->margin_b,
                  "Good-node penalty coefficient (default sqrt(8)/alpha)");
  cmd->add_option("--margin-c", o->margin_c,
                  "Step size coefficient (default sqrt(2))");
  cmd->add_option("--beam", o->beam, "Training beam width")
      ->capture_default_str();
  cmd->add_option("--epochs", o->epochs,
                  "Training epochs (default: 8 perceptron, 3 alma)");
  cmd->add_flag("--no-average", o->no_average,
                "Ship the final raw weights instead of the averaged ones");
  cmd->add_flag("--shuffle", o->shuffle,
                "Reshuffle the training order every epoch (seeded)");
  cmd->add_flag("--stop-when-converged", o->stop_converged,
                "Stop after an epoch that fires no updates");
  cmd->add_option("--seed", o->seed, "Random seed")->capture_default_str();
  cmd->add_option("--gazetteer", o->gazetteers,
                  "Word list as name=path (repeatable)");

  auto* t = cmd->add_option_group("feature templates");
  t->add_flag("--word,!--no-word", o->templates.word, "Original-word feature");
  t->add_flag("--lower,!--no-lower", o->templates.lower,
              "Lower-cased word feature");
  t->add_flag("--stem,!--no-stem", o->templates.stem,
              "Stem and word+stem features");
  t->add_flag("--case-pattern,!--no-case-pattern", o->templates.case_pattern,
              "Case pattern feature");
  t->add_flag("--affixes,!--no-affixes", o->templates.affixes,
              "1-3 character prefixes and suffixes");
  t->add_flag("--pos,!--no-pos", o->templates.pos,
              "Part of speech and its first character (chunk task input)");
  t->add_flag("--chunk-length,!--no-chunk-length", o->templates.chunk_length,
              "Raw chunk length feature");
  t->add_flag("--chunk-length-bucket,!--no-chunk-length-bucket",
              o->templates.chunk_length_bucket, "Bucketed chunk length");
  t->add_flag("--gazetteer-features,!--no-gazetteer-features",
              o->templates.gazetteers, "Word-list membership features");
  t->add_flag("--shapes,!--no-shapes", o->templates.shapes,
              "Token shape classes (joint task)");
  t->add_option("--max-chunk-length", o->templates.max_chunk_length,
                "Longest chunk an operator may hypothesize")
      ->capture_default_str();
}

std::vector<Sentence> read_corpus(const std::string& path, bool quiet = false) {
  const ConllData data = read_conll_file(path);
  if (data.repaired > 0 && !quiet) {
    std::cerr << "note: repaired " << data.repaired
              << " ill-formed chunk tag(s) in " << path << "\n";
  }
  return data.sentences;
}

void print_metrics(TaskKind task, const EvalResult& r) {
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "precision " << r.precision << "\nrecall " << r.recall
            << "\nf1 " << r.f1 << "\n";
  std::cout << "gold_spans " << r.gold_spans << "\npredicted_spans "
            << r.predicted_spans << "\ncorrect_spans " << r.correct_spans
            << "\n";
  if (r.predicted_spans == 0 && r.gold_spans > 0) {
    std::cerr << "note: no spans predicted; precision reported as 0\n";
  }
  if (task == TaskKind::kJoint) {
    std::cout << "tag_accuracy " << r.tag_accuracy << "\nchunk_tag_accuracy "
              << r.chunk_tag_accuracy << "\njoint_accuracy "
              << r.joint_accuracy << "\n";
  }
  std::cout.unsetf(std::ios::fixed);
  std::cout << std::setprecision(6);
}

int cmd_train(const TrainCliOpts& opts, const std::string& train_path,
              const std::string& model_path, const std::string& heldout_path,
              double heldout_fraction, std::optional<std::uint64_t> heldout_seed,
              const std::string& report_path) {
  const RunConfig cfg = to_run_config(opts);
  std::vector<Sentence> train_data = read_corpus(train_path);
  std::vector<Sentence> heldout_data;
  if (!heldout_path.empty()) {
    heldout_data = read_corpus(heldout_path);
  } else if (heldout_fraction > 0.0) {
    auto split = split_heldout(std::move(train_data), heldout_fraction,
                               heldout_seed);
    train_data = std::move(split.train);
    heldout_data = std::move(split.heldout);
    std::cerr << "held out " << heldout_data.size() << " of "
              << train_data.size() + heldout_data.size() << " sentences\n";
  }
  if (train_data.empty()) throw DataError("no training sentences in " + train_path);

  const TrainOutput out = train_model(train_data, cfg, &std::cerr);
  if (effective_epochs(cfg) == 0) {
    std::cerr << "warning: 0 epochs requested; writing a zero-weight model\n";
  }
  save_model_file(model_path, out.model);

  std::cout << out.report.to_kv();
  std::cout << "model " << model_path << "\n";
  if (!report_path.empty()) {
    std::ofstream rep(report_path);
    if (!rep) throw ConfigError("cannot write report file: " + report_path);
    rep << out.report.to_json() << "\n";
  }

  if (!heldout_data.empty()) {
    const GazetteerSet gazetteers =
        GazetteerSet::load(cfg.gazetteer_specs, &std::cerr);
    const auto predicted =
        decode_corpus(out.model, heldout_data, 0, gazetteers);
    std::cout << "-- held-out metrics --\n";
    print_metrics(cfg.task, evaluate_for_task(cfg.task, heldout_data, predicted));
  }
  return 0;
}

int cmd_decode(const std::string& model_path, const std::string& input_path,
               const std::string& output_path, std::uint32_t beam,
               unsigned threads, const std::vector<std::string>& gazetteers) {
  const Model model = load_model_file(model_path);
  const auto specs = parse_gazetteers(gazetteers);
  const GazetteerSet lists = GazetteerSet::load(specs, &std::cerr);
  const auto supplied = lists.names();
  for (const auto& name : model.gazetteer_names) {
    if (std::find(supplied.begin(), supplied.end(), name) == supplied.end()) {
      std::cerr << "warning: model was trained with gazetteer '" << name
                << "' which was not supplied; its features stay silent\n";
    }
  }

  const auto input = read_corpus(input_path);
  double wall = 0.0;
  const auto predicted = decode_corpus(model, input, beam, lists, threads, &wall);
  std::cerr << "decoded " << predicted.size() << " sentence(s) in "
            << std::setprecision(3) << wall << "s ("
            << task_name(model.task) << " task, beam "
            << (beam == 0 ? model.beam_train : beam) << ")\n";

  if (output_path.empty() || output_path == "-") {
    write_conll(std::cout, predicted);
  } else {
    std::ofstream out(output_path);
    if (!out) throw ConfigError("cannot write output file: " + output_path);
    write_conll(out, predicted);
  }
  return 0;
}

int cmd_eval(const std::string& task, const std::string& gold_path,
             const std::string& pred_path) {
  TaskKind kind;
  if (task == "chunk") {
    kind = TaskKind::kChunk;
  } else if (task == "joint") {
    kind = TaskKind::kJoint;
  } else {
    throw ConfigError("unknown task '" + task + "' (chunk or joint)");
  }
  const auto gold = read_corpus(gold_path);
  const auto pred = read_corpus(pred_path);
  try {
    print_metrics(kind, evaluate_for_task(kind, gold, pred));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string(e.what()) + " (gold " + gold_path + ", predictions " +
                    pred_path + ")");
  }
  return 0;
}

int cmd_beam_sweep(const TrainCliOpts& opts, const std::string& train_path,
                   const std::string& eval_path,
                   const std::vector<std::uint32_t>& train_beams,
                   const std::vector<std::uint32_t>& decode_beams,
                   unsigned threads, const std::string& output_path) {
  const RunConfig cfg = to_run_config(opts);
  const auto train_data = read_corpus(train_path);
  const auto eval_data = read_corpus(eval_path);
  const SweepResult sweep = beam_sweep(train_data, eval_data, cfg, train_beams,
                                       decode_beams, &std::cerr, threads);

  std::ostringstream table;
  table << std::fixed << std::setprecision(4);
  table << std::setw(10) << "train\\dec";
  for (const auto db : sweep.decode_beams) table << std::setw(10) << db;
  table << "\n";
  for (std::size_t i = 0; i < sweep.train_beams.size(); ++i) {
    table << std::setw(10) << sweep.train_beams[i];
    for (const double f : sweep.f1[i]) table << std::setw(10) << f;
    table << "\n";
  }
  std::cout << table.str();
  if (!output_path.empty()) {
    std::ofstream out(output_path);
    if (!out) throw ConfigError("cannot write output file: " + output_path);
    out << table.str();
  }
  return 0;
}

int cmd_verify_bounds(const TrainCliOpts& opts, const std::string& train_path,
                      std::size_t subset) {
  const RunConfig cfg = to_run_config(opts);
  const auto data = read_corpus(train_path);
  const BoundsReport rep = verify_bounds(data, cfg, subset, &std::cerr);

  std::cout << "sentences " << rep.sentences << "\n"
            << "rule " << (cfg.rule.is_alma() ? "alma" : "perceptron") << "\n";
  if (cfg.rule.is_alma()) std::cout << "alpha " << cfg.rule.alpha << "\n";
  std::cout << "updates " << rep.updates << "\n"
            << "epochs_run " << rep.epochs_run << "\n"
            << "converged " << (rep.converged ? "yes" : "no") << "\n"
            << std::setprecision(10) << "margin " << rep.margin << "\n";
  if (!cfg.rule.is_alma()) std::cout << "radius " << rep.radius << "\n";
  if (!rep.applicable) {
    std::cout << "verdict inseparable; bound not applicable\n";
    return 0;
  }
  std::cout << "bound " << rep.bound << "\n"
            << "verdict " << (rep.pass ? "PASS" : "FAIL")
            << " (updates " << (rep.pass ? "<=" : ">") << " bound)\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Beam-search structured prediction trained by search-interleaved "
      "online updates: semi-Markov chunking and joint tagging+chunking"};
  app.require_subcommand(1);
  // One config option for every subcommand: keys live in a section named
  // after the subcommand ([train], [decode], ...) and explicit flags win.
  // Fallthrough lets "laso train --config f.ini" reach the app-level option.
  app.fallthrough();
  app.set_config("--config", "",
                 "INI file with a section per subcommand; flags win");
  int rc = 0;

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train a model and save it");
  auto opts = std::make_shared<TrainCliOpts>();
  auto train_path = std::make_shared<std::string>();
  auto model_path = std::make_shared<std::string>();
  auto heldout_path = std::make_shared<std::string>();
  auto heldout_fraction = std::make_shared<double>(0.0);
  auto heldout_seed = std::make_shared<std::optional<std::uint64_t>>();
  auto report_path = std::make_shared<std::string>();
  add_train_options(train, opts.get());
  train->add_option("--train", *train_path, "Training corpus (token pos chunk)")
      ->required();
  train->add_option("--model", *model_path, "Model output path")->required();
  train->add_option("--heldout", *heldout_path,
                    "Held-out corpus to score after training");
  train->add_option("--heldout-fraction", *heldout_fraction,
                    "Split off this final fraction of --train instead");
  train->add_option_function<std::uint64_t>(
      "--heldout-seed",
      [heldout_seed](const std::uint64_t v) { *heldout_seed = v; },
      "Shuffle before the fraction split (omit for tail split)");
  train->add_option("--report", *report_path, "Also write the report as JSON");
  train->callback([=, &rc]() {
    rc = cmd_train(*opts, *train_path, *model_path, *heldout_path,
                   *heldout_fraction, *heldout_seed, *report_path);
  });

  // decode -----------------------------------------------------------------
  auto* decode = app.add_subcommand("decode", "Label a corpus with a model");
  auto d_model = std::make_shared<std::string>();
  auto d_input = std::make_shared<std::string>();
  auto d_output = std::make_shared<std::string>("-");
  auto d_beam = std::make_shared<std::uint32_t>(0);
  auto d_threads = std::make_shared<unsigned>(1);
  auto d_gaz = std::make_shared<std::vector<std::string>>();
  decode->add_option("--model", *d_model, "Model file")->required();
  decode->add_option("--input", *d_input, "Corpus to decode")->required();
  decode->add_option("--output", *d_output,
                     "Predictions file ('-' for stdout)");
  decode->add_option("--beam", *d_beam,
                     "Decoding beam (0 = the model's training beam)");
  decode->add_option("--threads", *d_threads, "Worker threads");
  decode->add_option("--gazetteer", *d_gaz,
                     "Word list as name=path (repeatable)");
  decode->callback([=, &rc]() {
    rc = cmd_decode(*d_model, *d_input, *d_output, *d_beam, *d_threads, *d_gaz);
  });

  // eval -------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  auto e_task = std::make_shared<std::string>("chunk");
  auto e_gold = std::make_shared<std::string>();
  auto e_pred = std::make_shared<std::string>();
  eval->add_option("--task", *e_task, "chunk or joint")->capture_default_str();
  eval->add_option("--gold", *e_gold, "Gold corpus")->required();
  eval->add_option("--pred", *e_pred, "Predictions corpus")->required();
  eval->callback([=, &rc]() { rc = cmd_eval(*e_task, *e_gold, *e_pred); });

  // beam-sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "beam-sweep", "F-score matrix over training x decoding beams");
  auto s_opts = std::make_shared<TrainCliOpts>();
  auto s_train = std::make_shared<std::string>();
  auto s_eval = std::make_shared<std::string>();
  auto s_tb = std::make_shared<std::vector<std::uint32_t>>();
  auto s_db = std::make_shared<std::vector<std::uint32_t>>();
  auto s_threads = std::make_shared<unsigned>(1);
  auto s_out = std::make_shared<std::string>();
  add_train_options(sweep, s_opts.get());
  sweep->add_option("--train", *s_train, "Training corpus")->required();
  sweep->add_option("--eval", *s_eval, "Evaluation corpus")->required();
  sweep->add_option("--train-beams", *s_tb, "Training beam widths")
      ->required()
      ->delimiter(',');
  sweep->add_option("--decode-beams", *s_db, "Decoding beam widths")
      ->required()
      ->delimiter(',');
  sweep->add_option("--threads", *s_threads, "Decode worker threads");
  sweep->add_option("--output", *s_out, "Also write the table to a file");
  sweep->callback([=, &rc]() {
    rc = cmd_beam_sweep(*s_opts, *s_train, *s_eval, *s_tb, *s_db, *s_threads,
                        *s_out);
  });

  // verify-bounds ------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify-bounds",
      "Train to convergence on a subset, then check the mistake bound");
  auto v_opts = std::make_shared<TrainCliOpts>();
  auto v_train = std::make_shared<std::string>();
  auto v_subset = std::make_shared<std::size_t>(1000);
  add_train_options(verify, v_opts.get());
  verify->add_option("--train", *v_train, "Training corpus")->required();
  verify->add_option("--subset", *v_subset,
                     "Number of leading sentences to use")
      ->capture_default_str();
  verify->callback(
      [=, &rc]() { rc = cmd_verify_bounds(*v_opts, *v_train, *v_subset); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ContractViolation& e) {
    std::cerr << "task contract violation: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
