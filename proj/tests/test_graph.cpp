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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/gbdt.hpp"
#include "mentorlens/mentorship_graph.hpp"
#include "mentorlens/missing.hpp"
#include "mentorlens/rng.hpp"
#include "testutil.hpp"

using namespace mentorlens;
using mentorlens::testutil::TempDir;
using mentorlens::testutil::golden_corpus;

namespace {

std::vector<ScoredEdge> random_edges(Rng& rng, int n_edges, int n_authors) {
  std::vector<ScoredEdge> edges;
  std::set<std::pair<std::string, std::string>> seen;
  while (static_cast<int>(edges.size()) < n_edges) {
    const std::string a = "a" + std::to_string(rng.below(n_authors));
    const std::string b = "b" + std::to_string(rng.below(n_authors));
    if (!seen.insert({a, b}).second) continue;
    edges.push_back({a, b, rng.unit()});
  }
  return edges;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("out-weights 0.5 and 0.7 aggregate exactly") {
  const std::vector<ScoredEdge> edges = {{"m", "s1", 0.5}, {"m", "s2", 0.7}};
  const MentorshipGraph g = MentorshipGraph::build(edges);
  const NodeMetrics m = g.node_metrics("m");
  CHECK(m.mentorship_sum == 1.2);
  CHECK(m.mentorship_mean == 0.6);
  CHECK(m.out_degree == 2);
  CHECK(m.in_degree == 0);
  CHECK(m.menteeship_sum == 0.0);
  CHECK(m.menteeship_mean == 0.0);
  const NodeMetrics s1 = g.node_metrics("s1");
  CHECK(s1.menteeship_sum == 0.5);
  CHECK(s1.menteeship_mean == 0.5);
  CHECK(s1.in_degree == 1);
  CHECK(g.node_metrics("absent").mentorship_sum == 0.0);
  CHECK(g.node_metrics("absent").in_degree == 0);
  CHECK(g.total_edge_weight() == 1.2);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("build rejects bad edges") {
  CHECK_THROWS_AS(MentorshipGraph::build(std::vector<ScoredEdge>{
                      {"a", "b", 0.5}, {"a", "b", 0.6}}),
                  DataError);
  CHECK_THROWS_AS(
      MentorshipGraph::build(std::vector<ScoredEdge>{{"a", "b", 1.5}}),
      DataError);
  CHECK_THROWS_AS(
      MentorshipGraph::build(std::vector<ScoredEdge>{{"a", "b", -0.1}}),
      DataError);
  // Opposite directions are two distinct edges.
  const MentorshipGraph g = MentorshipGraph::build(
      std::vector<ScoredEdge>{{"a", "b", 0.4}, {"b", "a", 0.6}});
  CHECK(g.edge_count() == 2);
  CHECK(g.node_metrics("a").mentorship_sum == 0.4);
  CHECK(g.node_metrics("a").menteeship_sum == 0.6);
}

TEST_CASE("aggregates match an independent recomputation") {
  Rng rng(81);
  const auto edges = random_edges(rng, 2000, 150);
  const MentorshipGraph g = MentorshipGraph::build(edges);

  std::map<std::string, double> out_sum, in_sum;
  std::map<std::string, long> out_deg, in_deg;
  double total = 0.0;
  for (const ScoredEdge& e : edges) {
    out_sum[e.mentor_id] += e.weight;
    in_sum[e.mentee_id] += e.weight;
    ++out_deg[e.mentor_id];
    ++in_deg[e.mentee_id];
    total += e.weight;
  }
  CHECK(g.edge_count() == edges.size());
  CHECK(g.total_edge_weight() == doctest::Approx(total).epsilon(1e-12));

  double sum_mentorship = 0.0, sum_menteeship = 0.0;
  for (const auto& [id, metrics] : g.all_node_metrics()) {
    CHECK(metrics.mentorship_sum ==
          doctest::Approx(out_sum.count(id) ? out_sum[id] : 0.0)
              .epsilon(1e-12));
    CHECK(metrics.menteeship_sum ==
          doctest::Approx(in_sum.count(id) ? in_sum[id] : 0.0).epsilon(1e-12));
    CHECK(metrics.out_degree == (out_deg.count(id) ? out_deg[id] : 0));
    CHECK(metrics.in_degree == (in_deg.count(id) ? in_deg[id] : 0));
    if (metrics.out_degree > 0) {
      CHECK(metrics.mentorship_mean ==
            doctest::Approx(metrics.mentorship_sum /
                            static_cast<double>(metrics.out_degree)));
    } else {
      CHECK(metrics.mentorship_mean == 0.0);
    }
    sum_mentorship += metrics.mentorship_sum;
    sum_menteeship += metrics.menteeship_sum;
  }
  // Conservation: every edge contributes once to each side.
  CHECK(std::fabs(sum_mentorship - sum_menteeship) < 1e-9);
  CHECK(std::fabs(sum_mentorship - g.total_edge_weight()) < 1e-9);
}

TEST_CASE("graph features recompute from node aggregates") {
  const std::vector<ScoredEdge> edges = {
      {"m", "s1", 0.5}, {"m", "s2", 0.7}, {"g", "m", 0.9}, {"x", "s1", 0.2}};
  const MentorshipGraph g = MentorshipGraph::build(edges);
  const auto& schema = graph_feature_schema();
  REQUIRE(schema.size() == 20);

  const auto f = g.graph_features("m", "s1");
  REQUIRE(f.size() == 20);
  const auto at = [&](const char* name) {
    const auto it = std::find(schema.begin(), schema.end(), name);
    REQUIRE(it != schema.end());
    return f[static_cast<std::size_t>(it - schema.begin())];
  };
  // Candidate-mentor side: out {0.5, 0.7}, in {0.9}.
  CHECK(at("coa_out_min") == 0.5);
  CHECK(at("coa_out_max") == 0.7);
  CHECK(at("coa_out_sum") == 1.2);
  CHECK(at("coa_in_min") == 0.9);
  CHECK(at("coa_in_max") == 0.9);
  CHECK(at("coa_in_sum") == 0.9);
  CHECK(at("coa_weight_sum") == 2.1);
  CHECK(at("coa_avg_out") == 0.6);
  CHECK(at("coa_avg_in") == 0.9);
  CHECK(at("coa_ratio_in_out") == 0.75);
  // Mentee side: in {0.5, 0.2}, no outgoing edges.
  CHECK(at("mte_in_min") == 0.2);
  CHECK(at("mte_in_max") == 0.5);
  CHECK(at("mte_in_sum") == 0.7);
  CHECK(at("mte_out_min") == 0.0);
  CHECK(at("mte_out_max") == 0.0);
  CHECK(at("mte_out_sum") == 0.0);
  CHECK(at("mte_weight_sum") == 0.7);
  CHECK(at("mte_avg_in") == 0.35);
  CHECK(at("mte_avg_out") == 0.0);
  CHECK(is_missing(at("mte_ratio_in_out")));  // zero out-sum denominator

  // Unknown endpoints behave as isolated nodes.
  const auto fu = g.graph_features("nobody", "nowhere");
  for (std::size_t i = 0; i < fu.size(); ++i) {
    if (schema[i].find("ratio") != std::string::npos) {
      CHECK(is_missing(fu[i]));
    } else {
      CHECK(fu[i] == 0.0);
    }
  }
}

TEST_CASE("top lists order by weight and break ties by id") {
  const std::vector<ScoredEdge> edges = {
      {"m1", "s1", 0.9}, {"m1", "s2", 0.8}, {"m2", "s3", 0.9},
      {"m2", "s4", 0.8}, {"m3", "s5", 0.4},
  };
  const MentorshipGraph g = MentorshipGraph::build(edges);
  const auto top = g.top_by_metric(GraphMetric::kMentorshipSum, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == "m1");  // tie at 1.7 resolves towards smaller id
  CHECK(top[1].first == "m2");
  CHECK(top[0].second == doctest::Approx(1.7).epsilon(1e-15));
  const auto all = g.top_by_metric(GraphMetric::kMenteeshipSum, 100);
  CHECK(all.size() == g.node_count());

  const auto mentees = g.mentees_above("m1", 0.85);
  REQUIRE(mentees.size() == 1);
  CHECK(mentees[0].first == "s1");
  const auto both = g.mentees_above("m1", 0.0);
  REQUIRE(both.size() == 2);
  CHECK(both[0].first == "s1");  // sorted by weight descending
  CHECK(both[1].first == "s2");
  CHECK(g.mentees_above("absent", 0.5).empty());
  CHECK_THROWS_AS(g.mentees_above("m1", 1.5), UsageError);

  CHECK(parse_graph_metric("mentorship_sum") == GraphMetric::kMentorshipSum);
  CHECK(parse_graph_metric("menteeship_mean") == GraphMetric::kMenteeshipMean);
  CHECK_THROWS_AS(parse_graph_metric("bogus"), UsageError);
}

TEST_CASE("edges tsv rounds scores to six places and then round-trips") {
  TempDir dir("graph");
  Rng rng(82);
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < 50; ++i) {
    edges.push_back({"m" + std::to_string(i % 7), "s" + std::to_string(i),
                     rng.unit(), rng.unit()});
  }
  const std::string path = dir.file("edges.tsv");
  write_edges_tsv(path, edges);

  // The released list fixes six decimal places, so the first write quantizes.
  const auto back = read_edges_tsv(path);
  REQUIRE(back.size() == edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    CHECK(back[i].mentor_id == edges[i].mentor_id);
    CHECK(back[i].mentee_id == edges[i].mentee_id);
    CHECK(std::fabs(back[i].stage1_score - edges[i].stage1_score) <= 5e-7);
    CHECK(std::fabs(back[i].stage2_score - edges[i].stage2_score) <= 5e-7);
  }

  // Once quantized, write -> read -> write is byte-stable.
  const std::string again = dir.file("edges2.tsv");
  write_edges_tsv(again, back);
  CHECK(read_file(again) == read_file(path));
}

TEST_CASE("node metrics csv round-trips") {
  TempDir dir("graph");
  Rng rng(83);
  const auto scored = random_edges(rng, 200, 40);
  const MentorshipGraph g = MentorshipGraph::build(scored);
  const std::string path = dir.file("metrics.csv");
  write_node_metrics_csv(path, g);
  const auto back = read_node_metrics_csv(path);
  const auto want = g.all_node_metrics();
  REQUIRE(back.size() == want.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].first == want[i].first);
    CHECK(back[i].second.menteeship_sum == want[i].second.menteeship_sum);
    CHECK(back[i].second.mentorship_sum == want[i].second.mentorship_sum);
    CHECK(back[i].second.mentorship_mean == want[i].second.mentorship_mean);
    CHECK(back[i].second.in_degree == want[i].second.in_degree);
    CHECK(back[i].second.out_degree == want[i].second.out_degree);
  }
}

TEST_CASE("candidate enumeration covers every qualifying pair") {
  Rng rng(84);
  for (int iter = 0; iter < 40; ++iter) {
    const auto papers = testutil::random_paper_records(rng);
    const Corpus corpus = Corpus::from_records(papers);
    const int k = rng.range_int(1, 2);
    const auto pairs = enumerate_candidate_pairs(corpus, k);

    std::vector<LabeledPair> want;
    for (AuthorIdx a = 0; a < corpus.author_count(); ++a) {
      const std::string mentee = corpus.author(a).author_id;
      for (const std::string& cand :
           testutil::candidate_oracle(papers, mentee, k)) {
        want.push_back({cand, mentee, -1});
      }
    }
    std::sort(want.begin(), want.end(), [](const auto& x, const auto& y) {
      return std::tie(x.mentee_id, x.mentor_candidate_id) <
             std::tie(y.mentee_id, y.mentor_candidate_id);
    });
    CHECK(pairs == want);
  }
}

TEST_CASE("two-stage scoring preserves input order and score ranges") {
  // Tiny but realistic: train both stages on the hand corpus topology.
  Rng rng(85);
  auto [matrixA, labelsA] = testutil::random_dataset(rng, 60, 42, 0.1, 42);
  FeatureMatrix base = matrixA;
  base.schema = pair_feature_schema();

  TrainConfig cfg;
  cfg.num_leaves = 4;
  cfg.n_rounds = 5;
  cfg.min_child_samples = 1;
  cfg.min_child_weight = 0.0;
  const GbdtModel stage1 = train_gbdt(base, labelsA, cfg);

  std::vector<LabeledPair> pairs;
  for (std::size_t r = 0; r < base.n_rows(); ++r) {
    pairs.push_back({"m" + std::to_string(r % 5), "s" + std::to_string(r), -1});
  }
  const auto stage1_scores = stage1.predict(base);
  std::vector<ScoredEdge> edges;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    edges.push_back(
        {pairs[r].mentor_candidate_id, pairs[r].mentee_id, stage1_scores[r]});
  }
  const MentorshipGraph graph = MentorshipGraph::build(edges);
  const FeatureMatrix full = concat_graph_features(base, graph, pairs);
  CHECK(full.n_cols() == 62);
  CHECK(full.n_rows() == base.n_rows());
  // The stage-1 block passes through untouched.
  for (std::size_t r = 0; r < base.n_rows(); ++r) {
    for (std::size_t c = 0; c < base.n_cols(); ++c) {
      const double a = base.row(r)[c];
      const double b = full.row(r)[c];
      if (is_missing(a)) {
        CHECK(is_missing(b));
      } else {
        CHECK(a == b);
      }
    }
  }
  const GbdtModel stage2 = train_gbdt(full, labelsA, cfg);

  const auto records = score_two_stage(pairs, base, stage1, stage2);
  REQUIRE(records.size() == pairs.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    CHECK(records[r].mentor_id == pairs[r].mentor_candidate_id);
    CHECK(records[r].mentee_id == pairs[r].mentee_id);
    CHECK(records[r].stage1_score == stage1_scores[r]);
    CHECK(records[r].stage2_score > 0.0);
    CHECK(records[r].stage2_score < 1.0);
  }

  // Row/pair count mismatches are an internal contract violation.
  std::vector<LabeledPair> short_pairs(pairs.begin(), pairs.end() - 1);
  CHECK_THROWS_AS(score_two_stage(short_pairs, base, stage1, stage2), Error);
}

}  // TEST_SUITE
