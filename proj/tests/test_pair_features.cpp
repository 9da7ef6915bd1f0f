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

#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/missing.hpp"
#include "mentorlens/pair_features.hpp"
#include "mentorlens/rng.hpp"
#include "testutil.hpp"

using namespace mentorlens;
using mentorlens::testutil::TempDir;
using mentorlens::testutil::golden_corpus;

#ifndef MENTORLENS_TEST_DATA_DIR
#error "MENTORLENS_TEST_DATA_DIR must point at the frozen test fixtures"
#endif

TEST_SUITE("pairfeat") {

TEST_CASE("schema has 42 uniquely named features") {
  const auto& schema = pair_feature_schema();
  CHECK(schema.size() == kPairFeatureCount);
  for (std::size_t i = 0; i < schema.size(); ++i) {
    CHECK(pair_feature_index(schema[i]) == i);
  }
  // A name outside the schema is a programming error, not bad user input.
  CHECK_THROWS_AS(pair_feature_index("not_a_feature"), Error);
}

TEST_CASE("values match the hand-computed golden fixture") {
  const Corpus corpus = golden_corpus();
  const auto& schema = pair_feature_schema();

  CsvReader reader(std::string(MENTORLENS_TEST_DATA_DIR) +
                   "/pairfeat_golden.csv");
  std::vector<std::string> fields;
  REQUIRE(reader.next(fields));
  REQUIRE(fields.size() == 3 + kPairFeatureCount);
  for (std::size_t i = 0; i < kPairFeatureCount; ++i) {
    // The fixture header locks the canonical feature order.
    CHECK(fields[3 + i] == schema[i]);
  }

  int rows = 0;
  while (reader.next(fields)) {
    ++rows;
    REQUIRE(fields.size() == 3 + kPairFeatureCount);
    const std::string& mentor = fields[0];
    const std::string& mentee = fields[1];
    const double percent = parse_double(fields[2], "golden percent");
    const auto got = extract_pair_features(corpus, mentor, mentee, percent);
    REQUIRE(got.size() == kPairFeatureCount);
    for (std::size_t i = 0; i < kPairFeatureCount; ++i) {
      INFO("pair (", mentor, ", ", mentee, ") P=", percent, " feature ",
           schema[i]);
      if (fields[3 + i] == "MISSING") {
        CHECK(is_missing(got[i]));
      } else {
        // Derived independently of the implementation; must agree exactly.
        CHECK(got[i] == parse_double(fields[3 + i], "golden value"));
      }
    }
  }
  CHECK(rows == 3);
}

TEST_CASE("matrix extraction aligns rows with input pairs") {
  const Corpus corpus = golden_corpus();
  const std::vector<LabeledPair> pairs = {
      {"M", "E", 1}, {"C", "E", 0}, {"M", "E", 1}};
  const FeatureMatrix m = extract_matrix(corpus, pairs, 80.0);
  CHECK(m.schema == pair_feature_schema());
  REQUIRE(m.n_rows() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto want = extract_pair_features(
        corpus, pairs[r].mentor_candidate_id, pairs[r].mentee_id, 80.0);
    const auto row = m.row(r);
    for (std::size_t i = 0; i < kPairFeatureCount; ++i) {
      if (is_missing(want[i])) {
        CHECK(is_missing(row[i]));
      } else {
        CHECK(row[i] == want[i]);
      }
    }
  }
}

TEST_CASE("thread count never changes extracted values") {
  Rng rng(41);
  const auto papers = testutil::random_paper_records(rng);
  const Corpus corpus = Corpus::from_records(papers);
  std::vector<LabeledPair> pairs;
  for (AuthorIdx a = 0; a < corpus.author_count(); ++a) {
    for (AuthorIdx b = 0; b < corpus.author_count(); ++b) {
      if (a == b) continue;
      if (corpus.copublication_idxs(a, b).empty()) continue;
      pairs.push_back(
          {corpus.author(a).author_id, corpus.author(b).author_id, -1});
    }
  }
  if (pairs.empty()) return;  // rare: no co-authorships drawn
  const FeatureMatrix seq = extract_matrix(corpus, pairs, 80.0, 1);
  const FeatureMatrix par = extract_matrix(corpus, pairs, 80.0, 4);
  REQUIRE(seq.values.size() == par.values.size());
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    if (is_missing(seq.values[i])) {
      CHECK(is_missing(par.values[i]));
    } else {
      CHECK(seq.values[i] == par.values[i]);
    }
  }
}

TEST_CASE("extraction requires at least one co-publication") {
  const Corpus corpus = golden_corpus();
  CHECK_THROWS_AS(extract_pair_features(corpus, "A", "E", 80.0), DataError);
  CHECK_THROWS_AS(extract_pair_features(corpus, "nobody", "E", 80.0),
                  DataError);
}

TEST_CASE("feature values respect their ranges on random corpora") {
  Rng rng(42);
  const auto prcnt_idx = [](const char* name) {
    return pair_feature_index(name);
  };
  const std::size_t dense_count = prcnt_idx("dense_copub_count");
  const std::size_t copub_count = prcnt_idx("copub_count");
  for (int iter = 0; iter < 60; ++iter) {
    const auto papers = testutil::random_paper_records(rng);
    const Corpus corpus = Corpus::from_records(papers);
    for (AuthorIdx a = 0; a < corpus.author_count(); ++a) {
      for (AuthorIdx b = 0; b < corpus.author_count(); ++b) {
        if (a == b || corpus.copublication_idxs(a, b).empty()) continue;
        const auto f = extract_pair_features(corpus,
                                             corpus.author(a).author_id,
                                             corpus.author(b).author_id, 61.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (is_missing(f[i])) continue;
          const std::string& name = pair_feature_schema()[i];
          CHECK(std::isfinite(f[i]));
          if (name.find("prcnt") != std::string::npos) {
            CHECK(f[i] >= 0.0);
            CHECK(f[i] <= 1.0 + 1e-12);
          } else if (name.find("position") != std::string::npos) {
            CHECK(f[i] >= 1.0);
          } else {
            CHECK(f[i] >= 0.0);
          }
        }
        CHECK(f[dense_count] <= f[copub_count]);
        const auto mn = f[prcnt_idx("mentee_min_position")];
        const auto av = f[prcnt_idx("mentee_avg_position")];
        const auto mx = f[prcnt_idx("mentee_max_position")];
        CHECK(mn <= av);
        CHECK(av <= mx);
      }
    }
  }
}

TEST_CASE("features csv round-trips ids, labels, and missing cells") {
  TempDir dir("pairfeat");
  const Corpus corpus = golden_corpus();
  const std::vector<LabeledPair> pairs = {{"M", "E", 1}, {"C", "E", 0}};
  const FeatureMatrix m = extract_matrix(corpus, pairs, 80.0);
  const std::vector<int> labels = {1, 0};

  const std::string lpath = dir.file("labeled.csv");
  write_features_csv(lpath, pairs, m, &labels);
  const FeaturesFile lf = read_features_csv(lpath);
  CHECK(lf.has_labels);
  CHECK(lf.labels == labels);
  CHECK(lf.pairs == pairs);
  CHECK(lf.matrix.schema == m.schema);
  REQUIRE(lf.matrix.values.size() == m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (is_missing(m.values[i])) {
      CHECK(is_missing(lf.matrix.values[i]));  // empty cell -> MISSING
    } else {
      CHECK(lf.matrix.values[i] == m.values[i]);  // bit-exact round trip
    }
  }

  const std::string upath = dir.file("unlabeled.csv");
  write_features_csv(upath, pairs, m, nullptr);
  const FeaturesFile uf = read_features_csv(upath);
  CHECK_FALSE(uf.has_labels);
  CHECK(uf.labels.empty());
}

}  // TEST_SUITE
