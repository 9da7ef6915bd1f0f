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

#ifndef MENTORLENS_MENTORSHIP_GRAPH_HPP
#define MENTORLENS_MENTORSHIP_GRAPH_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mentorlens/cohort.hpp"
#include "mentorlens/corpus.hpp"
#include "mentorlens/gbdt.hpp"
#include "mentorlens/pair_features.hpp"

namespace mentorlens {

// Input edge for graph construction: weight is a stage-1 score in [0,1].
struct ScoredEdge {
  std::string mentor_id;
  std::string mentee_id;
  double weight = 0.0;
};

// Final inference output: one line of the released edge list.
struct EdgeRecord {
  std::string mentor_id;
  std::string mentee_id;
  double stage1_score = 0.0;
  double stage2_score = 0.0;
};

struct NodeMetrics {
  double menteeship_sum = 0.0;   // sum of incoming weights
  double menteeship_mean = 0.0;  // 0 when no incoming edges
  double mentorship_sum = 0.0;   // sum of outgoing weights
  double mentorship_mean = 0.0;  // 0 when no outgoing edges
  long in_degree = 0;
  long out_degree = 0;
};

enum class GraphMetric {
  kMentorshipSum,
  kMenteeshipSum,
  kMentorshipMean,
  kMenteeshipMean,
};

GraphMetric parse_graph_metric(std::string_view name);

// Names of the 20 second-stage features, in canonical order.
const std::vector<std::string>& graph_feature_schema();

// Weighted directed mentor -> mentee graph with per-node aggregates.
class MentorshipGraph {
 public:
  // Errors on duplicate ordered pairs or weights outside [0,1].
  static MentorshipGraph build(std::span<const ScoredEdge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  double total_edge_weight() const { return total_weight_; }

  // Absent authors yield all-zero metrics.
  NodeMetrics node_metrics(std::string_view author_id) const;

  // All nodes in ID order, for reports and the metrics CSV.
  std::vector<std::pair<std::string, NodeMetrics>> all_node_metrics() const;

  // The 20 features for one (candidate-mentor, mentee) pair, aligned to
  // graph_feature_schema(). Ratios with zero denominators are MISSING.
  std::vector<double> graph_features(std::string_view mentor_candidate_id,
                                     std::string_view mentee_id) const;

  // Out-neighbors with weight strictly above the threshold, sorted by weight
  // descending then mentee ID.
  std::vector<std::pair<std::string, double>> mentees_above(
      std::string_view mentor_id, double threshold) const;

  // Top-n authors by the chosen metric, ties broken by ID.
  std::vector<std::pair<std::string, double>> top_by_metric(GraphMetric metric,
                                                            std::size_t n) const;

 private:
  struct SideAggregate {
    double sum = 0.0;
    double min = 0.0;
    double max = 0.0;
    long count = 0;

    void add(double w);
  };
  struct Node {
    SideAggregate out;  // edges where this author mentors
    SideAggregate in;   // edges where this author is mentored
  };

  std::map<std::string, Node, std::less<>> nodes_;
  std::map<std::string, std::vector<std::pair<std::string, double>>,
           std::less<>>
      out_edges_;
  std::size_t edge_count_ = 0;
  double total_weight_ = 0.0;
};

// Appends the 20 graph features to each stage-1 row; pairs must align with
// the matrix rows.
FeatureMatrix concat_graph_features(const FeatureMatrix& stage1,
                                    const MentorshipGraph& graph,
                                    std::span<const LabeledPair> pairs);

// Every (candidate mentor, mentee) pair corpus-wide, labels set to -1,
// ordered by (mentee_id, mentor_id). Any author with publications counts as a
// potential mentee.
std::vector<LabeledPair> enumerate_candidate_pairs(const Corpus& corpus, int k);

// Two-stage scoring of prepared pairs: stage-1 scores -> graph over all
// scored pairs -> concatenated features -> stage-2 scores. Output order
// matches the input pairs.
std::vector<EdgeRecord> score_two_stage(std::span<const LabeledPair> pairs,
                                        const FeatureMatrix& base,
                                        const GbdtModel& stage1,
                                        const GbdtModel& stage2);

// Full-corpus two-stage inference over enumerate_candidate_pairs. Output is
// ordered by (mentee_id, mentor_id).
std::vector<EdgeRecord> infer_two_stage(const Corpus& corpus,
                                        const GbdtModel& stage1,
                                        const GbdtModel& stage2, double percent,
                                        int k, int threads = 1);

void write_edges_tsv(const std::string& path, std::span<const EdgeRecord>);
std::vector<EdgeRecord> read_edges_tsv(const std::string& path);
void write_node_metrics_csv(const std::string& path,
                            const MentorshipGraph& graph);
std::vector<std::pair<std::string, NodeMetrics>> read_node_metrics_csv(
    const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_MENTORSHIP_GRAPH_HPP
