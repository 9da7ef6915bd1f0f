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

#include "mentorlens/mentorship_graph.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/missing.hpp"

namespace mentorlens {
namespace {

// Schema slots for the 20 graph features.
enum GraphSlot : std::size_t {
  kCoaOutMin = 0,
  kCoaInMin,
  kMteOutMin,
  kMteInMin,
  kCoaOutMax,
  kCoaInMax,
  kMteOutMax,
  kMteInMax,
  kCoaOutSum,
  kCoaInSum,
  kMteOutSum,
  kMteInSum,
  kMteWeightSum,
  kCoaWeightSum,
  kMteAvgIn,
  kMteAvgOut,
  kCoaAvgIn,
  kCoaAvgOut,
  kMteRatioInOut,
  kCoaRatioInOut,
  kGraphSlotCount,
};

constexpr std::array<const char*, kGraphSlotCount> kGraphSchema = {
    "coa_out_min", "coa_in_min", "mte_out_min", "mte_in_min",
    "coa_out_max", "coa_in_max", "mte_out_max", "mte_in_max",
    "coa_out_sum", "coa_in_sum", "mte_out_sum", "mte_in_sum",
    "mte_weight_sum", "coa_weight_sum", "mte_avg_in", "mte_avg_out",
    "coa_avg_in", "coa_avg_out", "mte_ratio_in_out", "coa_ratio_in_out",
};

}  // namespace

GraphMetric parse_graph_metric(std::string_view name) {
  if (name == "mentorship_sum") return GraphMetric::kMentorshipSum;
  if (name == "menteeship_sum") return GraphMetric::kMenteeshipSum;
  if (name == "mentorship_mean") return GraphMetric::kMentorshipMean;
  if (name == "menteeship_mean") return GraphMetric::kMenteeshipMean;
  throw UsageError("unknown graph metric '" + std::string(name) +
                   "'; expected mentorship_sum, menteeship_sum, "
                   "mentorship_mean, or menteeship_mean");
}

const std::vector<std::string>& graph_feature_schema() {
  static const std::vector<std::string> schema(kGraphSchema.begin(),
                                               kGraphSchema.end());
  return schema;
}

void MentorshipGraph::SideAggregate::add(double w) {
  if (count == 0) {
    min = max = w;
  } else {
    min = std::min(min, w);
    max = std::max(max, w);
  }
  sum += w;
  ++count;
}

MentorshipGraph MentorshipGraph::build(std::span<const ScoredEdge> edges) {
  MentorshipGraph g;
  for (const ScoredEdge& e : edges) {
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
      throw DataError("edge (" + e.mentor_id + " -> " + e.mentee_id +
                      ") weight " + format_double(e.weight) +
                      " outside [0, 1]");
    }
    auto& out_list = g.out_edges_[e.mentor_id];
    for (const auto& [mentee, _] : out_list) {
      if (mentee == e.mentee_id) {
        throw DataError("duplicate edge (" + e.mentor_id + " -> " +
                        e.mentee_id + ")");
      }
    }
    out_list.emplace_back(e.mentee_id, e.weight);
    g.nodes_[e.mentor_id].out.add(e.weight);
    g.nodes_[e.mentee_id].in.add(e.weight);
    ++g.edge_count_;
    g.total_weight_ += e.weight;
  }
  return g;
}

NodeMetrics MentorshipGraph::node_metrics(std::string_view author_id) const {
  NodeMetrics m;
  const auto it = nodes_.find(author_id);
  if (it == nodes_.end()) return m;
  const Node& node = it->second;
  m.menteeship_sum = node.in.sum;
  m.mentorship_sum = node.out.sum;
  m.in_degree = node.in.count;
  m.out_degree = node.out.count;
  if (node.in.count > 0) {
    m.menteeship_mean = node.in.sum / static_cast<double>(node.in.count);
  }
  if (node.out.count > 0) {
    m.mentorship_mean = node.out.sum / static_cast<double>(node.out.count);
  }
  return m;
}

std::vector<std::pair<std::string, NodeMetrics>>
MentorshipGraph::all_node_metrics() const {
  std::vector<std::pair<std::string, NodeMetrics>> out;
  out.reserve(nodes_.size());
  for (const auto& [id, _] : nodes_) out.emplace_back(id, node_metrics(id));
  return out;
}

std::vector<double> MentorshipGraph::graph_features(
    std::string_view mentor_candidate_id, std::string_view mentee_id) const {
  // Absent endpoints behave like isolated nodes: zero aggregates.
  Node coa, mte;
  if (const auto it = nodes_.find(mentor_candidate_id); it != nodes_.end()) {
    coa = it->second;
  }
  if (const auto it = nodes_.find(mentee_id); it != nodes_.end()) {
    mte = it->second;
  }
  auto avg = [](const SideAggregate& side) {
    return side.count > 0 ? side.sum / static_cast<double>(side.count) : 0.0;
  };

  std::vector<double> f(kGraphSlotCount, 0.0);
  f[kCoaOutMin] = coa.out.count > 0 ? coa.out.min : 0.0;
  f[kCoaInMin] = coa.in.count > 0 ? coa.in.min : 0.0;
  f[kMteOutMin] = mte.out.count > 0 ? mte.out.min : 0.0;
  f[kMteInMin] = mte.in.count > 0 ? mte.in.min : 0.0;
  f[kCoaOutMax] = coa.out.count > 0 ? coa.out.max : 0.0;
  f[kCoaInMax] = coa.in.count > 0 ? coa.in.max : 0.0;
  f[kMteOutMax] = mte.out.count > 0 ? mte.out.max : 0.0;
  f[kMteInMax] = mte.in.count > 0 ? mte.in.max : 0.0;
  f[kCoaOutSum] = coa.out.sum;
  f[kCoaInSum] = coa.in.sum;
  f[kMteOutSum] = mte.out.sum;
  f[kMteInSum] = mte.in.sum;
  f[kMteWeightSum] = mte.in.sum + mte.out.sum;
  f[kCoaWeightSum] = coa.in.sum + coa.out.sum;
  f[kMteAvgIn] = avg(mte.in);
  f[kMteAvgOut] = avg(mte.out);
  f[kCoaAvgIn] = avg(coa.in);
  f[kCoaAvgOut] = avg(coa.out);
  f[kMteRatioInOut] = ratio_or_missing(mte.in.sum, mte.out.sum);
  f[kCoaRatioInOut] = ratio_or_missing(coa.in.sum, coa.out.sum);
  return f;
}

std::vector<std::pair<std::string, double>> MentorshipGraph::mentees_above(
    std::string_view mentor_id, double threshold) const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw UsageError("threshold must lie in [0, 1]");
  }
  std::vector<std::pair<std::string, double>> out;
  const auto it = out_edges_.find(mentor_id);
  if (it == out_edges_.end()) return out;
  for (const auto& [mentee, weight] : it->second) {
    if (weight > threshold) out.emplace_back(mentee, weight);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  return out;
}

std::vector<std::pair<std::string, double>> MentorshipGraph::top_by_metric(
    GraphMetric metric, std::size_t n) const {
  if (n < 1) throw UsageError("top_by_metric needs n >= 1");
  auto value = [&](const NodeMetrics& m) {
    switch (metric) {
      case GraphMetric::kMentorshipSum: return m.mentorship_sum;
      case GraphMetric::kMenteeshipSum: return m.menteeship_sum;
      case GraphMetric::kMentorshipMean: return m.mentorship_mean;
      case GraphMetric::kMenteeshipMean: return m.menteeship_mean;
    }
    throw Error("unreachable graph metric");
  };
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(nodes_.size());
  for (const auto& [id, _] : nodes_) {
    ranked.emplace_back(id, value(node_metrics(id)));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

FeatureMatrix concat_graph_features(const FeatureMatrix& stage1,
                                    const MentorshipGraph& graph,
                                    std::span<const LabeledPair> pairs) {
  if (pairs.size() != stage1.n_rows()) {
    throw Error("pair list does not align with the stage-1 matrix");
  }
  FeatureMatrix out;
  out.schema = stage1.schema;
  const auto& extra = graph_feature_schema();
  out.schema.insert(out.schema.end(), extra.begin(), extra.end());
  out.values.reserve(pairs.size() * out.schema.size());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto row = stage1.row(r);
    out.values.insert(out.values.end(), row.begin(), row.end());
    const auto g = graph.graph_features(pairs[r].mentor_candidate_id,
                                        pairs[r].mentee_id);
    out.values.insert(out.values.end(), g.begin(), g.end());
  }
  return out;
}

std::vector<LabeledPair> enumerate_candidate_pairs(const Corpus& corpus,
                                                   int k) {
  // Candidate pool: every author with publications is a potential mentee.
  std::vector<LabeledPair> pairs;
  for (AuthorIdx mentee = 0; mentee < corpus.author_count(); ++mentee) {
    if (!corpus.first_pub_year(mentee)) continue;
    for (AuthorIdx cand : candidate_mentor_idxs(corpus, mentee, k)) {
      pairs.push_back(LabeledPair{corpus.author(cand).author_id,
                                  corpus.author(mentee).author_id, -1});
    }
  }
  // Enumeration walks mentees in index (= ID) order with sorted candidate
  // lists, but the released shape is (mentee, mentor) sorted.
  std::sort(pairs.begin(), pairs.end(),
            [](const LabeledPair& a, const LabeledPair& b) {
              return std::tie(a.mentee_id, a.mentor_candidate_id) <
                     std::tie(b.mentee_id, b.mentor_candidate_id);
            });
  return pairs;
}

std::vector<EdgeRecord> score_two_stage(std::span<const LabeledPair> pairs,
                                        const FeatureMatrix& base,
                                        const GbdtModel& stage1,
                                        const GbdtModel& stage2) {
  if (pairs.size() != base.n_rows()) {
    throw Error("pair count does not match feature rows");
  }
  if (pairs.empty()) return {};

  const std::vector<double> s1 = stage1.predict(base);

  std::vector<ScoredEdge> edges;
  edges.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    edges.push_back(
        ScoredEdge{pairs[i].mentor_candidate_id, pairs[i].mentee_id, s1[i]});
  }
  const MentorshipGraph graph = MentorshipGraph::build(edges);
  const FeatureMatrix full = concat_graph_features(base, graph, pairs);
  const std::vector<double> s2 = stage2.predict(full);

  std::vector<EdgeRecord> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back(EdgeRecord{pairs[i].mentor_candidate_id, pairs[i].mentee_id,
                             s1[i], s2[i]});
  }
  return out;
}

std::vector<EdgeRecord> infer_two_stage(const Corpus& corpus,
                                        const GbdtModel& stage1,
                                        const GbdtModel& stage2, double percent,
                                        int k, int threads) {
  const std::vector<LabeledPair> pairs = enumerate_candidate_pairs(corpus, k);
  if (pairs.empty()) return {};
  const FeatureMatrix base = extract_matrix(corpus, pairs, percent, threads);
  return score_two_stage(pairs, base, stage1, stage2);
}

void write_edges_tsv(const std::string& path,
                     std::span<const EdgeRecord> edges) {
  AtomicFile file(path);
  for (const EdgeRecord& e : edges) {
    file.stream() << e.mentor_id << '\t' << e.mentee_id << '\t'
                  << format_fixed(e.stage1_score, 6) << '\t'
                  << format_fixed(e.stage2_score, 6) << '\n';
  }
  file.commit();
}

std::vector<EdgeRecord> read_edges_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<EdgeRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 4 tab-separated fields");
    }
    EdgeRecord e;
    e.mentor_id = fields[0];
    e.mentee_id = fields[1];
    const std::string where = path + ":" + std::to_string(line_no);
    e.stage1_score = parse_double(fields[2], where);
    e.stage2_score = parse_double(fields[3], where);
    out.push_back(std::move(e));
  }
  return out;
}

void write_node_metrics_csv(const std::string& path,
                            const MentorshipGraph& graph) {
  AtomicFile file(path);
  file.stream() << "author_id,menteeship_sum,menteeship_mean,mentorship_sum,"
                   "mentorship_mean,in_degree,out_degree\n";
  for (const auto& [id, m] : graph.all_node_metrics()) {
    file.stream() << csv_escape(id) << ',' << format_double(m.menteeship_sum)
                  << ',' << format_double(m.menteeship_mean) << ','
                  << format_double(m.mentorship_sum) << ','
                  << format_double(m.mentorship_mean) << ',' << m.in_degree
                  << ',' << m.out_degree << '\n';
  }
  file.commit();
}

std::vector<std::pair<std::string, NodeMetrics>> read_node_metrics_csv(
    const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 7 || fields[0] != "author_id") {
    throw DataError(path + ": expected node metrics header");
  }
  std::vector<std::pair<std::string, NodeMetrics>> out;
  while (reader.next(fields)) {
    const std::string where = path + ":" + std::to_string(reader.line_number());
    if (fields.size() != 7) throw DataError(where + ": expected 7 fields");
    NodeMetrics m;
    m.menteeship_sum = parse_double(fields[1], where);
    m.menteeship_mean = parse_double(fields[2], where);
    m.mentorship_sum = parse_double(fields[3], where);
    m.mentorship_mean = parse_double(fields[4], where);
    m.in_degree = parse_long(fields[5], where);
    m.out_degree = parse_long(fields[6], where);
    out.emplace_back(fields[0], m);
  }
  return out;
}

}  // namespace mentorlens
