// Copyright 2026 The MentorLens Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "mentorlens/fileio.hpp"
#include "testutil.hpp"

using mentorlens::read_file;
using mentorlens::testutil::TempDir;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

// Runs the pipeline binary through a shell. `env_prefix` may carry VAR=value
// assignments; `args` is appended verbatim after the program name.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string command;
  if (!env_prefix.empty()) command += env_prefix + " ";
  command += shell_quote(MENTORLENS_CLI_PATH) + " " + args + " 2>&1";
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

long count_lines(const std::string& path) {
  const std::string text = read_file(path);
  long lines = 0;
  for (const char c : text) lines += c == '\n' ? 1 : 0;
  return lines;
}

// Shared flags pointing every stage at one corpus and working directory.
std::string base_args(const std::string& dir) {
  return "--papers " + shell_quote(dir + "/papers.jsonl") + " --authors " +
         shell_quote(dir + "/authors.jsonl") + " --gold " +
         shell_quote(dir + "/gold.csv") + " --workdir " + shell_quote(dir) +
         " --seed 5";
}

// Generates a corpus and drives every stage in order. Returns the output of
// whichever stage failed, or an empty string when all succeeded.
std::string run_pipeline(const std::string& dir, const std::string& extra) {
  const std::vector<std::string> stages = {
      "synth --n-mentors 25 --mentees-per-mentor 4 --noise-authors 250",
      "ingest",
      "link",
      "candidates",
      "featurize",
      "train --search-iterations 2 --n-rounds 20",
      "infer",
      "graph-metrics",
      "glm",
      "report",
  };
  for (const std::string& stage : stages) {
    const CliResult r = run_cli(stage + " " + base_args(dir) + " " + extra);
    if (r.exit_code != 0) {
      return "stage `" + stage + "` exited " + std::to_string(r.exit_code) +
             ":\n" + r.output;
    }
  }
  return "";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bad invocations exit with the usage code") {
  CHECK(run_cli("").exit_code == 1);                       // no subcommand
  CHECK(run_cli("frobnicate").exit_code == 1);             // unknown subcommand
  CHECK(run_cli("ingest --no-such-flag").exit_code == 1);  // unknown flag

  const CliResult bad_k = run_cli("candidates --k 0");
  CHECK(bad_k.exit_code == 1);
  CHECK(bad_k.output.find("k must be >= 1") != std::string::npos);
  CHECK(run_cli("ingest --percent 50").exit_code == 1);
  CHECK(run_cli("featurize --out somewhere.csv").exit_code == 1);

  const CliResult missing =
      run_cli("ingest --papers /nonexistent/papers.jsonl");
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("missing input file") != std::string::npos);
}

TEST_CASE("corrupt corpus data exits with the data code") {
  TempDir dir("cli_bad");
  const std::string papers = dir.file("papers.jsonl");
  {
    mentorlens::AtomicFile file(papers);
    file.stream() << "{\"paper_id\": \"p1\", \"year\": 1999, \"authors\": "
                  << "[\"a\"]}\n";
    file.stream() << "this is not json\n";
    file.commit();
  }
  const CliResult r = run_cli("ingest --papers " + shell_quote(papers) +
                              " --workdir " + shell_quote(dir.file("work")));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("data error") != std::string::npos);
}

TEST_CASE("pipeline runs end to end and reruns reproduce artifacts") {
  TempDir a("cli_run_a");
  const std::string a_dir = a.path().string();
  const std::string failure = run_pipeline(a_dir, "--threads 1");
  REQUIRE_MESSAGE(failure.empty(), failure);

  // Every artifact the stages promise, in place.
  const std::vector<std::string> artifacts = {
      "corpus_stats.json",    "linked_pairs.csv",
      "link_report.json",     "train_pairs.csv",
      "candidates.csv",       "train_features.csv",
      "candidate_features.csv", "stage1_model.json",
      "stage2_model.json",    "trial_log_stage1.csv",
      "trial_log_stage2.csv", "train_report.json",
      "edges.tsv",            "node_metrics.csv",
      "glm_results.csv",      "report.md",
  };
  for (const std::string& name : artifacts) {
    CAPTURE(name);
    CHECK(fs::exists(a_dir + "/" + name));
  }
  // One scored edge per candidate pair; the edge list has no header while the
  // candidates CSV carries one.
  CHECK(count_lines(a_dir + "/edges.tsv") + 1 ==
        count_lines(a_dir + "/candidates.csv"));
  const std::string report = read_file(a_dir + "/report.md");
  CHECK(report.find("## Corpus") != std::string::npos);
  CHECK(report.find("## Training") != std::string::npos);
  CHECK(report.find("NB2") != std::string::npos);

  // A rerun with the same seed but different parallelism must reproduce the
  // numeric artifacts byte for byte.
  TempDir b("cli_run_b");
  const std::string b_dir = b.path().string();
  const std::string failure_b = run_pipeline(b_dir, "--threads 4");
  REQUIRE_MESSAGE(failure_b.empty(), failure_b);
  const std::vector<std::string> compared = {
      "papers.jsonl",       "linked_pairs.csv",   "train_pairs.csv",
      "candidates.csv",     "train_features.csv", "candidate_features.csv",
      "stage1_model.json",  "stage2_model.json",  "edges.tsv",
      "node_metrics.csv",   "glm_results.csv",
  };
  for (const std::string& name : compared) {
    CAPTURE(name);
    CHECK(read_file(a_dir + "/" + name) == read_file(b_dir + "/" + name));
  }
}

TEST_CASE("config file, environment, and flags layer in order") {
  TempDir dir("cli_cfg");
  const std::string dir_env = dir.file("from_env");
  const std::string dir_file = dir.file("from_file");
  const std::string dir_flag = dir.file("from_flag");
  const std::string cfg_env = dir.file("env.cfg");
  const std::string cfg_file = dir.file("flag.cfg");
  {
    mentorlens::AtomicFile f(cfg_env);
    f.stream() << "# settings picked up via $MENTORLENS_CONFIG\n";
    f.stream() << "workdir = " << dir_env << "\n";
    f.commit();
  }
  {
    mentorlens::AtomicFile f(cfg_file);
    f.stream() << "workdir = " << dir_file << "\n";
    f.commit();
  }
  const std::string synth =
      "synth --n-mentors 2 --mentees-per-mentor 1 --noise-authors 5 "
      "--no-mega-mentor";
  const std::string env = "MENTORLENS_CONFIG=" + shell_quote(cfg_env);

  // Environment alone decides the working directory.
  CHECK(run_cli(synth, env).exit_code == 0);
  CHECK(fs::exists(dir_env + "/truth.csv"));

  // --config beats the environment.
  CHECK(run_cli(synth + " --config " + shell_quote(cfg_file), env).exit_code ==
        0);
  CHECK(fs::exists(dir_file + "/truth.csv"));

  // An explicit flag beats the config file.
  CHECK(run_cli(synth + " --config " + shell_quote(cfg_file) + " --workdir " +
                    shell_quote(dir_flag),
                env)
            .exit_code == 0);
  CHECK(fs::exists(dir_flag + "/truth.csv"));

  // Unknown keys in a config file are a usage error.
  const std::string cfg_bad = dir.file("bad.cfg");
  {
    mentorlens::AtomicFile f(cfg_bad);
    f.stream() << "mystery = 1\n";
    f.commit();
  }
  const CliResult bad = run_cli(synth + " --config " + shell_quote(cfg_bad));
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("unknown config key") != std::string::npos);
}

}  // TEST_SUITE
