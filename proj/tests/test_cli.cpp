// End-to-end tests for the installed binary: spawn it like a user would and
// check the files, streams, and exit codes it leaves behind.
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef LASO_CLI_PATH
#error "build must define LASO_CLI_PATH"
#endif

namespace fs = std::filesystem;

namespace {

const char* kFixture =
    "the DT B-NP\n"
    "dog NN I-NP\n"
    "runs VB B-VP\n"
    ". . O\n"
    "\n"
    "a DT B-NP\n"
    "cat NN I-NP\n"
    "sleeps VB B-VP\n"
    ". . O\n"
    "\n"
    "the DT B-NP\n"
    "cat NN I-NP\n"
    "runs VB B-VP\n"
    "quickly RB O\n"
    "\n"
    "a DT B-NP\n"
    "dog NN I-NP\n"
    "sleeps VB B-VP\n"
    ". . O\n"
    "\n"
    "dogs NN B-NP\n"
    "run VB B-VP\n"
    ". . O\n"
    "\n"
    "cats NN B-NP\n"
    "sleep VB B-VP\n"
    "quickly RB O\n"
    "\n"
    "the DT B-NP\n"
    "dogs NN I-NP\n"
    "run VB B-VP\n"
    ". . O\n"
    "\n"
    "cats NN B-NP\n"
    "run VB B-VP\n"
    ". . O\n";

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("laso_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

// Runs the binary with stdout/stderr captured, returns the exit code.
int run_cli(const std::string& args, const std::string& out_file,
            const std::string& err_file) {
  const std::string cmd = std::string(LASO_CLI_PATH) + " " + args + " > " +
                          out_file + " 2> " + err_file;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("train / decode / eval round trip on a learnable corpus") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);

  const std::string train_args =
      "train --train " + tmp.file("train.conll") + " --model " +
      tmp.file("m.model") +
      " --beam 2 --epochs 20 --stop-when-converged --seed 3 --report " +
      tmp.file("report.json");
  CHECK(run_cli(train_args, tmp.file("train.out"), tmp.file("train.err")) == 0);
  const std::string report = slurp(tmp.file("train.out"));
  CHECK(contains(report, "converged=1"));
  CHECK(contains(report, "model " + tmp.file("m.model")));
  CHECK(contains(slurp(tmp.file("report.json")), "\"total_updates\""));

  // Decoding the training corpus back reproduces the gold tiling exactly.
  const std::string decode_args =
      "decode --model " + tmp.file("m.model") + " --input " +
      tmp.file("train.conll") + " --output " + tmp.file("pred.conll");
  CHECK(run_cli(decode_args, tmp.file("dec.out"), tmp.file("dec.err")) == 0);

  const std::string eval_args = "eval --task chunk --gold " +
                                tmp.file("train.conll") + " --pred " +
                                tmp.file("pred.conll");
  CHECK(run_cli(eval_args, tmp.file("eval.out"), tmp.file("eval.err")) == 0);
  const std::string metrics = slurp(tmp.file("eval.out"));
  CHECK(contains(metrics, "precision 1.0000"));
  CHECK(contains(metrics, "recall 1.0000"));
  CHECK(contains(metrics, "f1 1.0000"));
}

TEST_CASE("same seed and flags write byte-identical models") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);
  const std::string common = "train --train " + tmp.file("train.conll") +
                             " --beam 2 --epochs 6 --seed 11 --shuffle";
  CHECK(run_cli(common + " --model " + tmp.file("a.model"),
                tmp.file("a.out"), tmp.file("a.err")) == 0);
  CHECK(run_cli(common + " --model " + tmp.file("b.model"),
                tmp.file("b.out"), tmp.file("b.err")) == 0);
  const std::string a = slurp(tmp.file("a.model"));
  const std::string b = slurp(tmp.file("b.model"));
  REQUIRE(!a.empty());
  CHECK(a == b);
}

TEST_CASE("a config file stands in for command-line flags") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);
  write_file(tmp.file("train.ini"),
             "[train]\nbeam=2\nepochs=6\nseed=11\nshuffle=true\n");
  CHECK(run_cli("train --train " + tmp.file("train.conll") + " --model " +
                    tmp.file("flags.model") +
                    " --beam 2 --epochs 6 --seed 11 --shuffle",
                tmp.file("f.out"), tmp.file("f.err")) == 0);
  CHECK(run_cli("train --train " + tmp.file("train.conll") + " --model " +
                    tmp.file("config.model") + " --config " +
                    tmp.file("train.ini"),
                tmp.file("c.out"), tmp.file("c.err")) == 0);
  CHECK(slurp(tmp.file("flags.model")) == slurp(tmp.file("config.model")));

  // Explicit flags beat config values.
  CHECK(run_cli("train --train " + tmp.file("train.conll") + " --model " +
                    tmp.file("override.model") + " --config " +
                    tmp.file("train.ini") + " --epochs 3",
                tmp.file("o.out"), tmp.file("o.err")) == 0);
  CHECK(contains(slurp(tmp.file("o.out")), "epochs_run=3"));
}

TEST_CASE("decode writes the sentence stream to stdout when asked") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);
  CHECK(run_cli("train --train " + tmp.file("train.conll") + " --model " +
                    tmp.file("m.model") + " --beam 2 --epochs 10",
                tmp.file("t.out"), tmp.file("t.err")) == 0);
  CHECK(run_cli("decode --model " + tmp.file("m.model") + " --input " +
                    tmp.file("train.conll") + " --output -",
                tmp.file("d.out"), tmp.file("d.err")) == 0);
  const std::string out = slurp(tmp.file("d.out"));
  CHECK(contains(out, "the DT B-NP"));
  // Same token count in and out, one row per token.
  std::size_t rows = 0;
  std::istringstream lines(out);
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 29);
}

TEST_CASE("usage errors exit 2, unreadable data exits 3") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);

  SUBCASE("missing required option") {
    CHECK(run_cli("train --train " + tmp.file("train.conll"),
                  tmp.file("o"), tmp.file("e")) == 2);
  }
  SUBCASE("unknown update mode") {
    CHECK(run_cli("train --train " + tmp.file("train.conll") + " --model " +
                      tmp.file("m.model") + " --mode sideways",
                  tmp.file("o"), tmp.file("e")) == 2);
  }
  SUBCASE("nonexistent training corpus") {
    CHECK(run_cli("train --train " + tmp.file("missing.conll") + " --model " +
                      tmp.file("m.model"),
                  tmp.file("o"), tmp.file("e")) == 3);
  }
  SUBCASE("nonexistent model at decode time") {
    CHECK(run_cli("decode --model " + tmp.file("missing.model") + " --input " +
                      tmp.file("train.conll"),
                  tmp.file("o"), tmp.file("e")) == 3);
  }
  SUBCASE("eval rejects an unknown task") {
    CHECK(run_cli("eval --task sideways --gold " + tmp.file("train.conll") +
                      " --pred " + tmp.file("train.conll"),
                  tmp.file("o"), tmp.file("e")) == 2);
  }
}

TEST_CASE("beam-sweep prints the f1 table") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);
  CHECK(run_cli("beam-sweep --train " + tmp.file("train.conll") + " --eval " +
                    tmp.file("train.conll") +
                    " --train-beams 1,2 --decode-beams 1,2 --epochs 5",
                tmp.file("s.out"), tmp.file("s.err")) == 0);
  const std::string table = slurp(tmp.file("s.out"));
  CHECK(contains(table, "train\\dec"));
  CHECK(contains(table, "1.0000"));
}

TEST_CASE("verify-bounds reports a verdict on a separable corpus") {
  TempDir tmp;
  write_file(tmp.file("train.conll"), kFixture);
  CHECK(run_cli("verify-bounds --train " + tmp.file("train.conll") +
                    " --beam 1 --epochs -1",
                tmp.file("v.out"), tmp.file("v.err")) == 0);
  const std::string out = slurp(tmp.file("v.out"));
  CHECK(contains(out, "converged yes"));
  CHECK(contains(out, "verdict"));
}
