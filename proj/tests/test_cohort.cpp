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
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mentorlens/cohort.hpp"
#include "mentorlens/corpus.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/linker.hpp"
#include "mentorlens/rng.hpp"
#include "testutil.hpp"

using namespace mentorlens;
using mentorlens::testutil::TempDir;
using mentorlens::testutil::golden_corpus;

TEST_SUITE("cohort") {

TEST_CASE("copub period spans first to last shared year") {
  const CopubPeriod p = copub_period_from_years(std::vector<int>{1999, 1995, 1996});
  CHECK(p.start_year == 1995);
  CHECK(p.end_year == 1999);
  CHECK(p.copub_count == 3);

  const CopubPeriod single = copub_period_from_years(std::vector<int>{2001});
  CHECK(single.start_year == 2001);
  CHECK(single.end_year == 2001);
  CHECK(single.copub_count == 1);

  CHECK_THROWS_AS(copub_period_from_years(std::vector<int>{}), DataError);
}

TEST_CASE("dense period hand cases") {
  const std::vector<int> years = {1995, 1996, 1999};

  // 61% of 3 papers needs 2; [1995, 1996] is the unique 1-year window.
  const DensePeriod d61 = dense_period_from_years(years, 61.0);
  CHECK(d61.start_year == 1995);
  CHECK(d61.end_year == 1996);
  CHECK(d61.dense_copub_count == 2);
  CHECK(d61.fraction_covered == doctest::Approx(2.0 / 3.0));

  // 80% of 3 needs all 3: the full period.
  const DensePeriod d80 = dense_period_from_years(years, 80.0);
  CHECK(d80.start_year == 1995);
  CHECK(d80.end_year == 1999);
  CHECK(d80.dense_copub_count == 3);

  // Repeated years collapse the window to a point.
  const DensePeriod pt =
      dense_period_from_years(std::vector<int>{1996, 1996, 1996, 2005}, 61.0);
  CHECK(pt.start_year == 1996);
  CHECK(pt.end_year == 1996);
  CHECK(pt.dense_copub_count == 3);

  // 61% of 4 needs 3. Both [1990, 1994] and [1991, 1995] span five years and
  // hold three co-publications; the earlier start wins.
  const DensePeriod tie =
      dense_period_from_years(std::vector<int>{1990, 1991, 1994, 1995}, 61.0);
  CHECK(tie.start_year == 1990);
  CHECK(tie.end_year == 1994);
  CHECK(tie.dense_copub_count == 3);

  CHECK_THROWS_AS(dense_period_from_years(years, 60.0), UsageError);
  CHECK_THROWS_AS(dense_period_from_years(years, 100.5), UsageError);
}

TEST_CASE("dense period equals the brute-force oracle") {
  Rng rng(31);
  for (int iter = 0; iter < 400; ++iter) {
    const int n = rng.range_int(1, 60);
    std::vector<int> years;
    for (int i = 0; i < n; ++i) {
      years.push_back(1970 + rng.range_int(0, 39));
    }
    for (const long percent : {61L, 80L, 100L}) {
      const DensePeriod got =
          dense_period_from_years(years, static_cast<double>(percent));
      const long required = testutil::dense_required_oracle(n, percent);
      const auto want = testutil::dense_oracle(years, required);
      CHECK(got.start_year == want.start_year);
      CHECK(got.end_year == want.end_year);
      CHECK(got.dense_copub_count == want.count);
      CHECK(got.dense_copub_count >= required);
      // Window endpoints are observed years.
      CHECK(std::count(years.begin(), years.end(), got.start_year) > 0);
      CHECK(std::count(years.begin(), years.end(), got.end_year) > 0);
      if (percent == 100) {
        const CopubPeriod full = copub_period_from_years(years);
        CHECK(got.start_year == full.start_year);
        CHECK(got.end_year == full.end_year);
        CHECK(got.dense_copub_count == n);
      }
    }
  }
}

TEST_CASE("candidate criteria on the hand corpus") {
  const Corpus c = golden_corpus();
  // M: earlier first pub (1990 < 1995), 2 pubs before the 1995 first copub
  // vs 0 for E, and 3 copubs.
  const CandidateSet k2 = candidate_mentors(c, "E", 2);
  CHECK(k2.candidates == std::vector<std::string>{"M"});
  CHECK(k2.k == 2);
  // C first published in 1996, after E's 1995: criterion (b) rejects C even
  // at k=1. B co-published once and also started later.
  const CandidateSet k1 = candidate_mentors(c, "E", 1);
  CHECK(k1.candidates == std::vector<std::string>{"M"});
  // Nobody passes for the senior author.
  CHECK(candidate_mentors(c, "M", 1).candidates.empty());
  CHECK_THROWS_AS(candidate_mentors(c, "E", 0), UsageError);
}

TEST_CASE("candidates match the brute-force filter on random corpora") {
  Rng rng(32);
  for (int iter = 0; iter < 150; ++iter) {
    const auto papers = testutil::random_paper_records(rng);
    const Corpus corpus = Corpus::from_records(papers);
    const int k = rng.range_int(1, 3);
    for (AuthorIdx a = 0; a < corpus.author_count(); ++a) {
      const std::string mentee = corpus.author(a).author_id;
      const auto got = candidate_mentors(corpus, mentee, k);
      const auto want = testutil::candidate_oracle(papers, mentee, k);
      CHECK(std::set<std::string>(got.candidates.begin(),
                                  got.candidates.end()) == want);
      CHECK(std::is_sorted(got.candidates.begin(), got.candidates.end()));
    }
  }
}

TEST_CASE("training pairs: positives, negatives, ordering, and drops") {
  // Mentees s1, s2 with planted mentor m1; m2 is a hard negative for s1 and
  // a below-threshold mentor for s2.
  std::vector<PaperRecord> papers = {
      {"q01", 1980, {"m1"}},       {"q02", 1981, {"m1"}},
      {"q03", 1980, {"m2"}},       {"q04", 1982, {"m2"}},
      {"q05", 1990, {"s1", "m1"}}, {"q06", 1991, {"s1", "m1"}},
      {"q07", 1991, {"s1", "m2"}}, {"q08", 1992, {"s1", "m2"}},
      {"q09", 1993, {"s2", "m1"}}, {"q10", 1994, {"s2", "m1"}},
      {"q11", 1995, {"s2", "m2"}},
  };
  const Corpus corpus = Corpus::from_records(papers);
  const std::vector<LinkedPair> gold = {
      {"m1", "s1", 2, 1, "g"},
      {"m1", "s2", 2, 1, "g"},
      {"m2", "s2", 1, 1, "g"},  // only one copub: dropped at k=2
  };
  const auto [pairs, report] = build_training_pairs(corpus, gold, 2);
  CHECK(report.positives == 2);
  CHECK(report.negatives == 1);  // m2 for s1
  CHECK(report.dropped_positives == 1);
  REQUIRE(pairs.size() == 3);
  // Ordered by (mentee, positive-first, mentor).
  CHECK(pairs[0] == LabeledPair{"m1", "s1", 1});
  CHECK(pairs[1] == LabeledPair{"m2", "s1", 0});
  CHECK(pairs[2] == LabeledPair{"m1", "s2", 1});
}

TEST_CASE("negative caps sample deterministically") {
  // One mentee with three credible negatives.
  std::vector<PaperRecord> papers = {{"q1", 1980, {"m1"}}, {"q2", 1981, {"m1"}}};
  for (const std::string neg : {"n1", "n2", "n3"}) {
    papers.push_back({"q" + neg + "a", 1979, {neg}});
    papers.push_back({"q" + neg + "b", 1981, {neg}});
  }
  papers.push_back({"c1", 1990, {"s1", "m1", "n1", "n2", "n3"}});
  papers.push_back({"c2", 1991, {"s1", "m1", "n1", "n2", "n3"}});
  const Corpus corpus = Corpus::from_records(papers);
  const std::vector<LinkedPair> gold = {{"m1", "s1", 2, 1, "g"}};

  const auto [uncapped, rep0] = build_training_pairs(corpus, gold, 2, 0, 9);
  CHECK(rep0.negatives == 3);
  CHECK(uncapped.size() == 4);

  const auto [capped, rep1] = build_training_pairs(corpus, gold, 2, 2, 9);
  CHECK(rep1.negatives == 2);
  CHECK(capped.size() == 3);
  const auto [capped_again, rep2] = build_training_pairs(corpus, gold, 2, 2, 9);
  CHECK(capped == capped_again);
  // Capped output is a subset of the uncapped pairs.
  for (const auto& p : capped) {
    CHECK(std::find(uncapped.begin(), uncapped.end(), p) != uncapped.end());
  }
}

TEST_CASE("group split keeps each mentee on one side") {
  std::vector<LabeledPair> pairs;
  for (int m = 0; m < 10; ++m) {
    const std::string mentee = "s" + std::to_string(m);
    pairs.push_back({"m1", mentee, 1});
    pairs.push_back({"m2", mentee, 0});
    pairs.push_back({"m3", mentee, 0});
  }
  const auto [train, val] = group_split(pairs, 0.2, 5);
  CHECK(train.size() + val.size() == pairs.size());
  CHECK_FALSE(train.empty());
  CHECK_FALSE(val.empty());
  std::set<std::string> train_mentees, val_mentees;
  for (const auto& p : train) train_mentees.insert(p.mentee_id);
  for (const auto& p : val) val_mentees.insert(p.mentee_id);
  CHECK(val_mentees.size() == 2);  // round(0.2 * 10)
  for (const auto& m : val_mentees) {
    CHECK(train_mentees.count(m) == 0);
  }
  // Deterministic under the same seed.
  const auto [train2, val2] = group_split(pairs, 0.2, 5);
  CHECK(train2 == train);
  CHECK(val2 == val);
  // Index variant agrees with the pair variant and preserves input order.
  const auto [ti, vi] = group_split_indices(pairs, 0.2, 5);
  REQUIRE(ti.size() == train.size());
  REQUIRE(vi.size() == val.size());
  for (std::size_t i = 0; i < ti.size(); ++i) CHECK(pairs[ti[i]] == train[i]);
  for (std::size_t i = 0; i < vi.size(); ++i) CHECK(pairs[vi[i]] == val[i]);
  CHECK(std::is_sorted(ti.begin(), ti.end()));
  CHECK(std::is_sorted(vi.begin(), vi.end()));

  // Both sides stay non-empty even at extreme fractions.
  const auto [t_lo, v_lo] = group_split(pairs, 0.011, 5);
  CHECK_FALSE(v_lo.empty());
  const auto [t_hi, v_hi] = group_split(pairs, 0.99, 5);
  CHECK_FALSE(t_hi.empty());
  CHECK_THROWS_AS(group_split(pairs, 0.0, 5), UsageError);
  CHECK_THROWS_AS(group_split(pairs, 1.0, 5), UsageError);
}

TEST_CASE("pairs csv round-trips with and without labels") {
  TempDir dir("cohort");
  const std::vector<LabeledPair> labeled = {
      {"m1", "s1", 1}, {"m2", "s1", 0}, {"m1", "s2", 1}};
  const std::string lpath = dir.file("labeled.csv");
  write_pairs_csv(lpath, labeled, true);
  const PairsFile lf = read_pairs_csv(lpath);
  CHECK(lf.has_labels);
  CHECK(lf.pairs == labeled);

  const std::vector<LabeledPair> unlabeled = {{"m1", "s1", -1}, {"m2", "s3", -1}};
  const std::string upath = dir.file("unlabeled.csv");
  write_pairs_csv(upath, unlabeled, false);
  const PairsFile uf = read_pairs_csv(upath);
  CHECK_FALSE(uf.has_labels);
  CHECK(uf.pairs == unlabeled);
}

}  // TEST_SUITE
