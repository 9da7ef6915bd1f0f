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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "json.hpp"
#include "mentorlens/cohort.hpp"
#include "mentorlens/corpus.hpp"
#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/gbdt.hpp"
#include "mentorlens/linker.hpp"
#include "mentorlens/mentorship_graph.hpp"
#include "mentorlens/negbin_glm.hpp"
#include "mentorlens/pair_features.hpp"
#include "mentorlens/rng.hpp"

namespace mentorlens {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void require_input(const std::string& path, const std::string& hint) {
  if (path.empty()) {
    throw UsageError("missing input path (" + hint + ")");
  }
  if (!fs::exists(path)) {
    throw UsageError("missing input file: " + path + " (" + hint + ")");
  }
}

void ensure_workdir(const PipelineConfig& cfg) {
  if (!cfg.workdir.empty()) fs::create_directories(cfg.workdir);
}

Corpus load_corpus(const PipelineConfig& cfg) {
  require_input(cfg.papers, "set `papers` in the config or pass --papers");
  if (!cfg.authors.empty()) {
    require_input(cfg.authors, "set `authors` in the config or pass --authors");
  }
  return Corpus::load(cfg.papers, cfg.authors);
}

void write_json_file(const std::string& path, const ordered_json& doc) {
  AtomicFile file(path);
  file.stream() << doc.dump(2) << '\n';
  file.commit();
}

ordered_json read_json_file(const std::string& path) {
  try {
    return ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
}

ordered_json config_to_json(const TrainConfig& c) {
  ordered_json j;
  j["learning_rate"] = c.learning_rate;
  j["num_leaves"] = c.num_leaves;
  j["colsample_bytree"] = c.colsample_bytree;
  j["subsample"] = c.subsample;
  j["min_child_samples"] = c.min_child_samples;
  j["min_child_weight"] = c.min_child_weight;
  j["reg_alpha"] = c.reg_alpha;
  j["reg_lambda"] = c.reg_lambda;
  j["max_depth"] = c.max_depth;
  j["n_rounds"] = c.n_rounds;
  return j;
}

// Rows of `matrix` selected by `idx`, schema preserved.
FeatureMatrix take_rows(const FeatureMatrix& matrix,
                        std::span<const std::size_t> idx) {
  FeatureMatrix out;
  out.schema = matrix.schema;
  out.values.reserve(idx.size() * matrix.n_cols());
  for (const std::size_t r : idx) {
    const auto row = matrix.row(r);
    out.values.insert(out.values.end(), row.begin(), row.end());
  }
  return out;
}

ordered_json stage_summary(const SearchResult& search, double val_auc,
                           const GbdtModel& model) {
  ordered_json j;
  j["best_trial"] = search.best_trial;
  j["val_auc"] = val_auc;
  j["best_config"] = config_to_json(search.best_config);
  // Top split-gain features, most important first.
  std::vector<std::pair<std::string, double>> gains;
  for (const auto& [name, gain] : feature_importance(model)) {
    if (gain > 0.0) gains.emplace_back(name, gain);
  }
  std::sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  ordered_json top = ordered_json::array();
  for (std::size_t i = 0; i < gains.size() && i < 10; ++i) {
    top.push_back({{"feature", gains[i].first}, {"gain", gains[i].second}});
  }
  j["top_features"] = top;
  return j;
}

}  // namespace

void run_synth(const PipelineConfig& cfg, const SynthConfig& synth_cfg,
               const std::string& out_dir) {
  const std::string dir = out_dir.empty() ? cfg.workdir : out_dir;
  if (!dir.empty()) fs::create_directories(dir);
  const auto path = [&](const char* name) {
    return dir.empty() ? std::string(name) : dir + "/" + name;
  };
  const SynthOutput out = generate_records(synth_cfg);
  write_papers_jsonl(path(kPapersFile), out.papers);
  write_authors_jsonl(path(kAuthorsFile), out.authors);
  write_gold_pairs_csv(path(kGoldFile), out.gold);
  write_truth_csv(path(kTruthFile), out.truth);
  std::printf("synth: %zu papers, %zu authors, %zu gold pairs -> %s\n",
              out.papers.size(), out.authors.size(), out.gold.size(),
              dir.empty() ? "." : dir.c_str());
}

void run_ingest(const PipelineConfig& cfg) {
  const Corpus corpus = load_corpus(cfg);
  std::optional<std::size_t> gold_pairs;
  if (!cfg.gold.empty()) {
    require_input(cfg.gold, "set `gold` in the config or pass --gold");
    gold_pairs = read_gold_pairs_csv(cfg.gold).size();
  }

  int year_min = std::numeric_limits<int>::max();
  int year_max = std::numeric_limits<int>::min();
  std::size_t authorships = 0;
  for (PaperIdx p = 0; p < corpus.paper_count(); ++p) {
    year_min = std::min(year_min, corpus.paper_year(p));
    year_max = std::max(year_max, corpus.paper_year(p));
    authorships += corpus.paper_author_idxs(p).size();
  }

  ordered_json stats;
  stats["papers"] = corpus.paper_count();
  stats["authors"] = corpus.author_count();
  stats["authorships"] = authorships;
  stats["year_min"] = year_min;
  stats["year_max"] = year_max;
  if (gold_pairs) stats["gold_pairs"] = *gold_pairs;

  ensure_workdir(cfg);
  write_json_file(cfg.workpath(kCorpusStatsFile), stats);
  const std::string gold_note =
      gold_pairs ? ", " + std::to_string(*gold_pairs) + " gold pairs" : "";
  std::printf("ingest: %zu papers, %zu authors, years %d-%d%s\n",
              corpus.paper_count(), corpus.author_count(), year_min, year_max,
              gold_note.c_str());
}

void run_link(const PipelineConfig& cfg) {
  const Corpus corpus = load_corpus(cfg);
  require_input(cfg.gold, "set `gold` in the config or pass --gold");
  const std::vector<GoldPair> gold = read_gold_pairs_csv(cfg.gold);

  const Linker linker(corpus);
  const auto [attempts, report] =
      linker.link_all(gold, cfg.resolved_threads());

  ensure_workdir(cfg);
  write_linked_pairs_csv(cfg.workpath(kLinkedPairsFile), linked_only(attempts));
  AtomicFile report_file(cfg.workpath(kLinkReportFile));
  report_file.stream() << report.to_json() << '\n';
  report_file.commit();
  std::fputs(report.to_text().c_str(), stdout);
}

void run_candidates(const PipelineConfig& cfg) {
  const Corpus corpus = load_corpus(cfg);
  const std::string linked_path = cfg.workpath(kLinkedPairsFile);
  require_input(linked_path, "run `mentorlens link` first");
  const std::vector<LinkedPair> linked = read_linked_pairs_csv(linked_path);

  const auto [training, report] = build_training_pairs(
      corpus, linked, cfg.k, cfg.max_negatives_per_mentee, cfg.seed,
      cfg.resolved_threads());
  const std::vector<LabeledPair> all_pairs =
      enumerate_candidate_pairs(corpus, cfg.k);

  ensure_workdir(cfg);
  write_pairs_csv(cfg.workpath(kTrainPairsFile), training, true);
  write_pairs_csv(cfg.workpath(kCandidatesFile), all_pairs, false);
  std::printf(
      "candidates: %ld positives, %ld negatives (%ld gold pairs dropped "
      "below k=%d); %zu corpus-wide candidate pairs\n",
      report.positives, report.negatives, report.dropped_positives, cfg.k,
      all_pairs.size());
}

void run_featurize(const PipelineConfig& cfg, const std::string& pairs_path,
                   const std::string& out_path) {
  const Corpus corpus = load_corpus(cfg);
  const int threads = cfg.resolved_threads();
  ensure_workdir(cfg);

  const auto featurize_one = [&](const std::string& in,
                                 const std::string& out) {
    const PairsFile pf = read_pairs_csv(in);
    const FeatureMatrix matrix =
        extract_matrix(corpus, pf.pairs, cfg.percent, threads);
    std::vector<int> labels;
    if (pf.has_labels) {
      labels.reserve(pf.pairs.size());
      for (const LabeledPair& p : pf.pairs) labels.push_back(p.label);
    }
    write_features_csv(out, pf.pairs, matrix,
                       pf.has_labels ? &labels : nullptr);
    std::printf("featurize: %zu rows x %zu features -> %s\n", matrix.n_rows(),
                matrix.n_cols(), out.c_str());
  };

  if (!pairs_path.empty()) {
    require_input(pairs_path, "pass --pairs with an existing pairs CSV");
    featurize_one(pairs_path,
                  out_path.empty() ? cfg.workpath("features.csv") : out_path);
    return;
  }
  const std::string train_pairs = cfg.workpath(kTrainPairsFile);
  const std::string candidates = cfg.workpath(kCandidatesFile);
  require_input(train_pairs, "run `mentorlens candidates` first");
  require_input(candidates, "run `mentorlens candidates` first");
  featurize_one(train_pairs, cfg.workpath(kTrainFeaturesFile));
  featurize_one(candidates, cfg.workpath(kCandidateFeaturesFile));
}

void run_train(const PipelineConfig& cfg) {
  const std::string features_path = cfg.workpath(kTrainFeaturesFile);
  require_input(features_path, "run `mentorlens featurize` first");
  const FeaturesFile ff = read_features_csv(features_path);
  if (!ff.has_labels) {
    throw DataError(features_path + ": training features need a label column");
  }
  const int threads = cfg.resolved_threads();

  const auto [train_idx, val_idx] =
      group_split_indices(ff.pairs, cfg.val_fraction, cfg.seed);
  const FeatureMatrix x_train = take_rows(ff.matrix, train_idx);
  const FeatureMatrix x_val = take_rows(ff.matrix, val_idx);
  std::vector<int> y_train, y_val;
  std::vector<LabeledPair> p_train, p_val;
  for (const std::size_t i : train_idx) {
    y_train.push_back(ff.labels[i]);
    p_train.push_back(ff.pairs[i]);
  }
  for (const std::size_t i : val_idx) {
    y_val.push_back(ff.labels[i]);
    p_val.push_back(ff.pairs[i]);
  }
  std::printf("train: %zu train rows, %zu validation rows\n", train_idx.size(),
              val_idx.size());

  SearchSpace space = SearchSpace::defaults();
  space.n_iterations = cfg.search_iterations;
  space.n_rounds = cfg.n_rounds;

  // Stage 1: pairwise features only.
  const SearchResult stage1 = random_search(
      space, x_train, y_train, x_val, y_val, Rng::mix(cfg.seed, 1), threads);
  std::printf("train: stage-1 best trial %d, validation AUC %.4f\n",
              stage1.best_trial, stage1.best_val_auc);

  // Stage 2: append graph features derived from stage-1 scores over every
  // labeled pair (train and validation together, matching how inference
  // builds its graph over all scored candidates).
  const std::vector<double> s_train = stage1.best_model.predict(x_train);
  const std::vector<double> s_val = stage1.best_model.predict(x_val);
  std::vector<ScoredEdge> edges;
  edges.reserve(ff.pairs.size());
  for (std::size_t i = 0; i < train_idx.size(); ++i) {
    edges.push_back(ScoredEdge{p_train[i].mentor_candidate_id,
                               p_train[i].mentee_id, s_train[i]});
  }
  for (std::size_t i = 0; i < val_idx.size(); ++i) {
    edges.push_back(
        ScoredEdge{p_val[i].mentor_candidate_id, p_val[i].mentee_id, s_val[i]});
  }
  const MentorshipGraph graph = MentorshipGraph::build(edges);
  const FeatureMatrix x2_train = concat_graph_features(x_train, graph, p_train);
  const FeatureMatrix x2_val = concat_graph_features(x_val, graph, p_val);

  const SearchResult stage2 =
      random_search(space, x2_train, y_train, x2_val, y_val,
                    Rng::mix(cfg.seed, 2), threads);
  std::printf("train: stage-2 best trial %d, validation AUC %.4f\n",
              stage2.best_trial, stage2.best_val_auc);

  ensure_workdir(cfg);
  save_model(cfg.workpath(kStage1ModelFile), stage1.best_model);
  save_model(cfg.workpath(kStage2ModelFile), stage2.best_model);
  write_trial_log_csv(cfg.workpath(kTrialLogStage1File), stage1.trials);
  write_trial_log_csv(cfg.workpath(kTrialLogStage2File), stage2.trials);

  ordered_json report;
  report["n_train"] = train_idx.size();
  report["n_val"] = val_idx.size();
  report["positives"] =
      std::count(ff.labels.begin(), ff.labels.end(), 1);
  report["negatives"] =
      std::count(ff.labels.begin(), ff.labels.end(), 0);
  report["search_iterations"] = cfg.search_iterations;
  report["stage1"] =
      stage_summary(stage1, stage1.best_val_auc, stage1.best_model);
  report["stage2"] =
      stage_summary(stage2, stage2.best_val_auc, stage2.best_model);
  write_json_file(cfg.workpath(kTrainReportFile), report);
}

void run_infer(const PipelineConfig& cfg) {
  const std::string features_path = cfg.workpath(kCandidateFeaturesFile);
  require_input(features_path, "run `mentorlens featurize` first");
  const std::string stage1_path = cfg.workpath(kStage1ModelFile);
  const std::string stage2_path = cfg.workpath(kStage2ModelFile);
  require_input(stage1_path, "run `mentorlens train` first");
  require_input(stage2_path, "run `mentorlens train` first");

  const FeaturesFile ff = read_features_csv(features_path);
  const GbdtModel stage1 = load_model(stage1_path);
  const GbdtModel stage2 = load_model(stage2_path);
  const std::vector<EdgeRecord> edges =
      score_two_stage(ff.pairs, ff.matrix, stage1, stage2);

  ensure_workdir(cfg);
  write_edges_tsv(cfg.workpath(kEdgesFile), edges);
  std::printf("infer: scored %zu candidate pairs -> %s\n", edges.size(),
              cfg.workpath(kEdgesFile).c_str());
}

void run_graph_metrics(const PipelineConfig& cfg, const std::string& metric,
                       int top_n) {
  const std::string edges_path = cfg.workpath(kEdgesFile);
  require_input(edges_path, "run `mentorlens infer` first");
  const std::vector<EdgeRecord> records = read_edges_tsv(edges_path);

  std::vector<ScoredEdge> edges;
  edges.reserve(records.size());
  for (const EdgeRecord& r : records) {
    edges.push_back(ScoredEdge{r.mentor_id, r.mentee_id, r.stage2_score});
  }
  const MentorshipGraph graph = MentorshipGraph::build(edges);

  ensure_workdir(cfg);
  write_node_metrics_csv(cfg.workpath(kNodeMetricsFile), graph);
  std::printf("graph-metrics: %zu nodes, %zu edges, total weight %.3f\n",
              graph.node_count(), graph.edge_count(),
              graph.total_edge_weight());
  if (top_n > 0) {
    const GraphMetric gm = parse_graph_metric(metric);
    std::printf("top %d by %s:\n", top_n, metric.c_str());
    for (const auto& [id, value] :
         graph.top_by_metric(gm, static_cast<std::size_t>(top_n))) {
      std::printf("  %-24s %.6f\n", id.c_str(), value);
    }
  }
}

void run_glm(const PipelineConfig& cfg) {
  const std::string metrics_path = cfg.workpath(kNodeMetricsFile);
  require_input(metrics_path, "run `mentorlens graph-metrics` first");
  const Corpus corpus = load_corpus(cfg);
  const auto metrics = read_node_metrics_csv(metrics_path);

  std::vector<GlmRow> rows;
  rows.reserve(metrics.size());
  for (const auto& [author_id, m] : metrics) {
    const auto idx = corpus.find_author(author_id);
    if (!idx) {
      throw DataError(metrics_path + ": author '" + author_id +
                      "' not present in the corpus");
    }
    const AuthorRecord& a = corpus.author(*idx);
    GlmRow row;
    row.author_id = author_id;
    row.h_index = a.h_index;
    row.paper_count = a.paper_count;
    row.citation_count = a.citation_count;
    row.field_of_study = a.field_of_study;
    row.menteeship_sum = m.menteeship_sum;
    row.menteeship_mean = m.menteeship_mean;
    row.mentorship_sum = m.mentorship_sum;
    row.mentorship_mean = m.mentorship_mean;
    rows.push_back(std::move(row));
  }

  const auto [clean, outliers] = remove_outliers(rows);
  std::printf("glm: %ld rows, %ld dropped as 99th-percentile outliers\n",
              outliers.rows_in, outliers.rows_dropped);
  const GlmDesign design = build_design(clean);
  if (design.skipped_missing_response > 0 ||
      design.skipped_missing_covariates > 0) {
    std::printf("glm: skipped %ld rows missing response, %ld missing counts\n",
                design.skipped_missing_response,
                design.skipped_missing_covariates);
  }
  const GlmResult result = fit_negbin_glm(design, cfg.glm_alpha);

  ensure_workdir(cfg);
  write_glm_results_csv(cfg.workpath(kGlmResultsFile), result);
  std::printf("glm: alpha %.3f, %s after %d iterations\n", result.alpha,
              result.converged ? "converged" : "NOT converged",
              result.iterations);
  std::printf("%-28s %10s %10s %8s %10s\n", "covariate", "coef", "std_err",
              "z", "exp(coef)");
  for (const GlmTerm& t : result.terms) {
    std::printf("%-28s %10.4f %10.4f %8.2f %10.4f\n", t.name.c_str(), t.coef,
                t.std_err, t.z, interpret_multiplicative(t.coef));
  }
}

void run_report(const PipelineConfig& cfg) {
  const std::string report_path = cfg.workpath(kReportFile);
  AtomicFile file(report_path);
  auto& out = file.stream();
  out << "# MentorLens pipeline report\n";

  const std::string stats_path = cfg.workpath(kCorpusStatsFile);
  if (fs::exists(stats_path)) {
    const ordered_json stats = read_json_file(stats_path);
    out << "\n## Corpus\n\n";
    out << "- papers: " << stats.value("papers", 0) << "\n";
    out << "- authors: " << stats.value("authors", 0) << "\n";
    out << "- years: " << stats.value("year_min", 0) << "-"
        << stats.value("year_max", 0) << "\n";
    if (stats.contains("gold_pairs")) {
      out << "- gold pairs: " << stats["gold_pairs"].get<long>() << "\n";
    }
  }

  const std::string link_path = cfg.workpath(kLinkReportFile);
  require_input(link_path, "run `mentorlens link` first");
  const ordered_json link = read_json_file(link_path);
  out << "\n## Linking\n\n";
  out << "- gold pairs: " << link.value("total", 0) << "\n";
  out << "- linked: " << link.value("linked", 0) << "\n";
  out << "- no mentee match: " << link.value("no_mentee_match", 0) << "\n";
  out << "- no mentor match: " << link.value("no_mentor_match", 0) << "\n";
  if (link.contains("ambiguity_histogram")) {
    out << "- ambiguity degree histogram:";
    for (const auto& [degree, count] : link["ambiguity_histogram"].items()) {
      out << " " << degree << ":" << count.get<long>();
    }
    out << "\n";
  }

  const std::string train_path = cfg.workpath(kTrainReportFile);
  require_input(train_path, "run `mentorlens train` first");
  const ordered_json train = read_json_file(train_path);
  out << "\n## Training\n\n";
  out << "- rows: " << train.value("n_train", 0) << " train / "
      << train.value("n_val", 0) << " validation ("
      << train.value("positives", 0) << " positive, "
      << train.value("negatives", 0) << " negative)\n";
  out << "- search iterations per stage: "
      << train.value("search_iterations", 0) << "\n";
  for (const char* stage : {"stage1", "stage2"}) {
    if (!train.contains(stage)) continue;
    const ordered_json& s = train[stage];
    out << "- " << stage << ": validation AUC "
        << format_fixed(s.value("val_auc", 0.0), 4) << " (trial "
        << s.value("best_trial", -1) << ")\n";
    if (s.contains("top_features") && !s["top_features"].empty()) {
      out << "  top features:";
      std::size_t shown = 0;
      for (const auto& f : s["top_features"]) {
        if (shown++ == 5) break;
        out << " " << f.value("feature", std::string());
      }
      out << "\n";
    }
  }

  const std::string edges_path = cfg.workpath(kEdgesFile);
  require_input(edges_path, "run `mentorlens infer` first");
  const std::vector<EdgeRecord> edges = read_edges_tsv(edges_path);
  double weight_sum = 0.0;
  std::size_t confident = 0;
  for (const EdgeRecord& e : edges) {
    weight_sum += e.stage2_score;
    if (e.stage2_score > 0.5) ++confident;
  }
  out << "\n## Inference\n\n";
  out << "- scored candidate pairs: " << edges.size() << "\n";
  if (!edges.empty()) {
    out << "- mean edge weight: "
        << format_fixed(weight_sum / static_cast<double>(edges.size()), 4)
        << "\n";
    out << "- edges above 0.5: " << confident << "\n";
  }

  const std::string metrics_path = cfg.workpath(kNodeMetricsFile);
  require_input(metrics_path, "run `mentorlens graph-metrics` first");
  auto metrics = read_node_metrics_csv(metrics_path);
  std::sort(metrics.begin(), metrics.end(), [](const auto& a, const auto& b) {
    return a.second.mentorship_sum != b.second.mentorship_sum
               ? a.second.mentorship_sum > b.second.mentorship_sum
               : a.first < b.first;
  });
  out << "\n## Top mentors by mentorship sum\n\n";
  out << "| author | mentorship_sum | mentees (out-degree) |\n";
  out << "|---|---|---|\n";
  for (std::size_t i = 0; i < metrics.size() && i < 10; ++i) {
    out << "| " << metrics[i].first << " | "
        << format_fixed(metrics[i].second.mentorship_sum, 3) << " | "
        << metrics[i].second.out_degree << " |\n";
  }

  const std::string glm_path = cfg.workpath(kGlmResultsFile);
  require_input(glm_path, "run `mentorlens glm` first");
  out << "\n## Scholarly-impact regression (NB2, h-index response)\n\n";
  out << "| covariate | coef | std_err | z | p | 95% CI | exp(coef) |\n";
  out << "|---|---|---|---|---|---|---|\n";
  CsvReader reader(glm_path);
  std::vector<std::string> fields;
  reader.next(fields);  // header
  while (reader.next(fields)) {
    if (fields.size() != 7) {
      throw DataError(glm_path + ": expected 7 columns");
    }
    const std::string where = glm_path;
    const double coef = parse_double(fields[1], where);
    out << "| " << fields[0] << " | " << format_fixed(coef, 4) << " | "
        << format_fixed(parse_double(fields[2], where), 4) << " | "
        << format_fixed(parse_double(fields[3], where), 2) << " | "
        << format_fixed(parse_double(fields[4], where), 4) << " | ["
        << format_fixed(parse_double(fields[5], where), 4) << ", "
        << format_fixed(parse_double(fields[6], where), 4) << "] | "
        << format_fixed(interpret_multiplicative(coef), 4) << " |\n";
  }

  file.commit();
  std::printf("report: wrote %s\n", report_path.c_str());
}

}  // namespace mentorlens
