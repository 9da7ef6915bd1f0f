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

#ifndef MENTORLENS_TOOLS_COMMANDS_HPP
#define MENTORLENS_TOOLS_COMMANDS_HPP

#include <string>

#include "mentorlens/synth.hpp"
#include "pipeline_config.hpp"

namespace mentorlens {

// Artifact names inside the working directory. Pipeline stages communicate
// exclusively through these files.
inline constexpr const char* kPapersFile = "papers.jsonl";
inline constexpr const char* kAuthorsFile = "authors.jsonl";
inline constexpr const char* kGoldFile = "gold.csv";
inline constexpr const char* kTruthFile = "truth.csv";
inline constexpr const char* kCorpusStatsFile = "corpus_stats.json";
inline constexpr const char* kLinkedPairsFile = "linked_pairs.csv";
inline constexpr const char* kLinkReportFile = "link_report.json";
inline constexpr const char* kTrainPairsFile = "train_pairs.csv";
inline constexpr const char* kCandidatesFile = "candidates.csv";
inline constexpr const char* kTrainFeaturesFile = "train_features.csv";
inline constexpr const char* kCandidateFeaturesFile = "candidate_features.csv";
inline constexpr const char* kStage1ModelFile = "stage1_model.json";
inline constexpr const char* kStage2ModelFile = "stage2_model.json";
inline constexpr const char* kTrialLogStage1File = "trial_log_stage1.csv";
inline constexpr const char* kTrialLogStage2File = "trial_log_stage2.csv";
inline constexpr const char* kTrainReportFile = "train_report.json";
inline constexpr const char* kEdgesFile = "edges.tsv";
inline constexpr const char* kNodeMetricsFile = "node_metrics.csv";
inline constexpr const char* kGlmResultsFile = "glm_results.csv";
inline constexpr const char* kReportFile = "report.md";

// Each command reads its declared inputs, writes its artifacts atomically,
// and throws UsageError/DataError/Error on failure (mapped to exit codes by
// main). Progress summaries go to stdout.
void run_synth(const PipelineConfig& cfg, const SynthConfig& synth_cfg,
               const std::string& out_dir);
void run_ingest(const PipelineConfig& cfg);
void run_link(const PipelineConfig& cfg);
void run_candidates(const PipelineConfig& cfg);
void run_featurize(const PipelineConfig& cfg, const std::string& pairs_path,
                   const std::string& out_path);
void run_train(const PipelineConfig& cfg);
void run_infer(const PipelineConfig& cfg);
void run_graph_metrics(const PipelineConfig& cfg, const std::string& metric,
                       int top_n);
void run_glm(const PipelineConfig& cfg);
void run_report(const PipelineConfig& cfg);

}  // namespace mentorlens

#endif  // MENTORLENS_TOOLS_COMMANDS_HPP
