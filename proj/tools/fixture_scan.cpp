// Tuning harness for the bundled fixture: runs the beam-mismatch sweep and
// the update-mode comparison concurrently and prints the quantities the
// acceptance checks gate on. Not part of the shipped library or tests.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "laso/conll.hpp"
#include "laso/driver.hpp"
#include "laso/eval.hpp"

using namespace laso;

namespace {

RunConfig base_config(int epochs, unsigned seed) {
  RunConfig cfg;
  cfg.task = TaskKind::kChunk;
  cfg.epochs = epochs;
  cfg.seed = seed;
  cfg.templates.max_chunk_length = 5;
  return cfg;
}

double eval_f1(const Model& m, const std::vector<Sentence>& eval, int beam) {
  auto pred = decode_corpus(m, eval, beam, GazetteerSet{}, 4);
  return evaluate_for_task(m.task, eval, pred).f1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s train.conll eval.conll [epochs] [seed]\n", argv[0]);
    return 2;
  }
  const auto train_data = read_conll_file(argv[1]).sentences;
  const auto eval_data = read_conll_file(argv[2]).sentences;
  const int epochs = argc > 3 ? std::atoi(argv[3]) : 8;
  const unsigned seed = argc > 4 ? static_cast<unsigned>(std::atoi(argv[4])) : 7;

  Model t1, t5, m_laso, m_early, m_end;
  std::vector<std::thread> workers;
  workers.emplace_back([&] {
    auto cfg = base_config(epochs, seed);
    cfg.beam_train = 1;
    t1 = train_model(train_data, cfg).model;
  });
  workers.emplace_back([&] {
    auto cfg = base_config(epochs, seed);
    cfg.beam_train = 5;
    t5 = train_model(train_data, cfg).model;
  });
  workers.emplace_back([&] {
    auto cfg = base_config(epochs, seed);
    cfg.beam_train = 10;
    m_laso = train_model(train_data, cfg).model;
  });
  workers.emplace_back([&] {
    auto cfg = base_config(epochs, seed);
    cfg.beam_train = 10;
    cfg.mode = UpdateMode::kEarlyUpdate;
    m_early = train_model(train_data, cfg).model;
  });
  workers.emplace_back([&] {
    auto cfg = base_config(epochs, seed);
    cfg.beam_train = 10;
    cfg.mode = UpdateMode::kEndOnly;
    m_end = train_model(train_data, cfg).model;
  });
  for (auto& t : workers) t.join();

  const double f11 = eval_f1(t1, eval_data, 1);
  const double f15 = eval_f1(t1, eval_data, 5);
  const double f51 = eval_f1(t5, eval_data, 1);
  const double f55 = eval_f1(t5, eval_data, 5);
  const double fl = eval_f1(m_laso, eval_data, 10);
  const double fe = eval_f1(m_early, eval_data, 10);
  const double fo = eval_f1(m_end, eval_data, 10);

  std::printf("sweep  F(1,1)=%.4f F(1,5)=%.4f F(5,1)=%.4f F(5,5)=%.4f\n", f11, f15,
              f51, f55);
  std::printf("  mismatch: F(1,1)>F(1,5) %s   F(5,5)>F(5,1) %s\n",
              f11 > f15 ? "PASS" : "FAIL", f55 > f51 ? "PASS" : "FAIL");
  std::printf("modes  laso=%.4f early=%.4f end=%.4f\n", fl, fe, fo);
  std::printf("  order: laso>=early %s   early>=end-0.003 %s\n",
              fl >= fe ? "PASS" : "FAIL", fe >= fo - 0.003 ? "PASS" : "FAIL");
  return 0;
}
