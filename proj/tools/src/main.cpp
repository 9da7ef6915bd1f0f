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

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mentorlens/errors.hpp"
#include "pipeline_config.hpp"

namespace {

using mentorlens::PipelineConfig;
using mentorlens::SynthConfig;

// Finds the config file before CLI11 runs, so flag defaults reflect its
// contents and explicit flags still override it. --config on the command
// line beats $MENTORLENS_CONFIG.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" || arg == "-c") {
      if (i + 1 >= argc) throw mentorlens::UsageError("--config needs a path");
      return argv[i + 1];
    }
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  if (const char* env = std::getenv("MENTORLENS_CONFIG");
      env != nullptr && *env != '\0') {
    return env;
  }
  return "";
}

int run(int argc, char** argv) {
  const std::string config_path = find_config_path(argc, argv);
  PipelineConfig cfg = config_path.empty()
                           ? PipelineConfig{}
                           : mentorlens::load_pipeline_config(config_path);

  CLI::App app{"MentorLens: mentorship inference from co-authorship records"};
  app.require_subcommand(1);
  // Let global flags appear after the subcommand name.
  app.fallthrough();
  std::string config_flag;  // consumed by find_config_path already
  app.add_option("-c,--config", config_flag,
                 "Flat key=value config file ($MENTORLENS_CONFIG)");
  app.add_option("--papers", cfg.papers, "Papers JSONL path")
      ->capture_default_str();
  app.add_option("--authors", cfg.authors, "Authors JSONL path")
      ->capture_default_str();
  app.add_option("--gold", cfg.gold, "Gold mentorship pairs CSV path")
      ->capture_default_str();
  app.add_option("--workdir", cfg.workdir, "Pipeline artifact directory")
      ->capture_default_str();
  app.add_option("--k", cfg.k, "Minimum co-publications for a candidate")
      ->capture_default_str();
  app.add_option("--percent", cfg.percent,
                 "Dense-period coverage percentage (60, 100]")
      ->capture_default_str();
  app.add_option("--search-iterations", cfg.search_iterations,
                 "Random-search trials per stage")
      ->capture_default_str();
  app.add_option("--n-rounds", cfg.n_rounds, "Boosting rounds per trial")
      ->capture_default_str();
  app.add_option("--val-fraction", cfg.val_fraction,
                 "Mentee-grouped validation fraction")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Pipeline random seed")
      ->capture_default_str();
  app.add_option("--glm-alpha", cfg.glm_alpha,
                 "NB2 dispersion parameter for the regression")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--max-negatives-per-mentee", cfg.max_negatives_per_mentee,
                 "Cap on sampled negatives per mentee (0 = keep all)")
      ->capture_default_str();

  // synth
  SynthConfig synth_cfg;
  std::string synth_out_dir;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a seeded corpus with planted mentorships");
  synth->add_option("--out-dir", synth_out_dir,
                    "Output directory (default: workdir)");
  synth->add_option("--n-mentors", synth_cfg.n_mentors, "Number of mentors")
      ->capture_default_str();
  synth->add_option("--mentees-per-mentor", synth_cfg.mentees_per_mentor,
                    "Mentees per mentor")
      ->capture_default_str();
  synth->add_option("--noise-authors", synth_cfg.noise_authors,
                    "Number of noise authors")
      ->capture_default_str();
  bool no_mega = false;
  synth->add_flag("--no-mega-mentor", no_mega,
                  "Disable the 10x-mentees mega mentor");

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Validate corpus files and write corpus stats");
  CLI::App* link = app.add_subcommand(
      "link", "Resolve gold mentorship pairs to corpus author IDs");
  CLI::App* candidates = app.add_subcommand(
      "candidates",
      "Build labeled training pairs and enumerate all candidate pairs");

  std::string featurize_pairs, featurize_out;
  CLI::App* featurize = app.add_subcommand(
      "featurize", "Compute pairwise features for pair files");
  featurize->add_option("--pairs", featurize_pairs,
                        "Pairs CSV to featurize (default: both workdir files)");
  featurize->add_option("--out", featurize_out,
                        "Output CSV (only with --pairs)");

  CLI::App* train = app.add_subcommand(
      "train", "Random-search both classifier stages and save the models");
  CLI::App* infer = app.add_subcommand(
      "infer", "Score every candidate pair with the two-stage model");

  std::string metric = "mentorship_sum";
  int top_n = 10;
  CLI::App* graph_metrics = app.add_subcommand(
      "graph-metrics", "Aggregate the scored graph into per-author metrics");
  graph_metrics->add_option("--metric", metric, "Ranking metric for stdout")
      ->capture_default_str();
  graph_metrics->add_option("--top", top_n, "How many top authors to print")
      ->capture_default_str();

  CLI::App* glm = app.add_subcommand(
      "glm", "Fit the NB2 h-index regression on graph metrics");
  CLI::App* report = app.add_subcommand(
      "report", "Aggregate all pipeline artifacts into one document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.validate();
  synth_cfg.seed = cfg.seed;
  synth_cfg.mega_mentor = !no_mega;
  // Re-apply subcommand flags over the value sync above (CLI11 already wrote
  // directly into synth_cfg for everything except the derived fields).

  if (synth->parsed()) {
    mentorlens::run_synth(cfg, synth_cfg, synth_out_dir);
  } else if (ingest->parsed()) {
    mentorlens::run_ingest(cfg);
  } else if (link->parsed()) {
    mentorlens::run_link(cfg);
  } else if (candidates->parsed()) {
    mentorlens::run_candidates(cfg);
  } else if (featurize->parsed()) {
    if (!featurize_out.empty() && featurize_pairs.empty()) {
      throw mentorlens::UsageError("--out requires --pairs");
    }
    mentorlens::run_featurize(cfg, featurize_pairs, featurize_out);
  } else if (train->parsed()) {
    mentorlens::run_train(cfg);
  } else if (infer->parsed()) {
    mentorlens::run_infer(cfg);
  } else if (graph_metrics->parsed()) {
    mentorlens::run_graph_metrics(cfg, metric, top_n);
  } else if (glm->parsed()) {
    mentorlens::run_glm(cfg);
  } else if (report->parsed()) {
    mentorlens::run_report(cfg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mentorlens::UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const mentorlens::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
