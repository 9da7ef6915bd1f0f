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
#include <map>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mentorlens/cohort.hpp"
#include "mentorlens/corpus.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/synth.hpp"
#include "testutil.hpp"

using namespace mentorlens;
using mentorlens::testutil::TempDir;

namespace {

SynthConfig small_config(std::uint64_t seed) {
  SynthConfig config;
  config.n_mentors = 12;
  config.mentees_per_mentor = 3;
  config.noise_authors = 120;
  config.mega_mentor = false;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("generation is deterministic byte for byte") {
  SynthConfig config = small_config(7);
  TempDir a("synth_a"), b("synth_b");
  const char* files[] = {"papers.jsonl", "authors.jsonl", "gold.csv",
                         "truth.csv"};
  generate(config, a.file(files[0]), a.file(files[1]), a.file(files[2]),
           a.file(files[3]));
  generate(config, b.file(files[0]), b.file(files[1]), b.file(files[2]),
           b.file(files[3]));
  for (const char* name : files) {
    CAPTURE(name);
    CHECK(read_file(a.file(name)) == read_file(b.file(name)));
  }
  // A different seed must actually change the corpus.
  config.seed = 8;
  TempDir c("synth_c");
  generate(config, c.file(files[0]), c.file(files[1]), c.file(files[2]),
           c.file(files[3]));
  CHECK(read_file(a.file("papers.jsonl")) != read_file(c.file("papers.jsonl")));
}

TEST_CASE("records index cleanly and reference real authors") {
  const SynthConfig config = small_config(3);
  SynthOutput out = generate_records(config);

  const int expected_authors =
      config.n_mentors + config.n_mentors * config.mentees_per_mentor +
      config.noise_authors;
  CHECK(out.authors.size() == static_cast<std::size_t>(expected_authors));
  CHECK(out.gold.size() == static_cast<std::size_t>(config.n_mentors *
                                                    config.mentees_per_mentor));
  REQUIRE(out.truth.size() == out.gold.size());

  // from_records runs full validation; a throw here is a generator bug.
  const Corpus corpus = Corpus::from_records(out.papers, out.authors);
  CHECK(corpus.author_count() == out.authors.size());
  for (std::size_t i = 0; i < out.gold.size(); ++i) {
    const GoldPair& g = out.gold[i];
    CHECK(g.source == "synthetic");
    CHECK(corpus.find_author(g.mentor).has_value());
    CHECK(corpus.find_author(g.mentee).has_value());
    CHECK(out.truth[i].first == g.mentor);
    CHECK(out.truth[i].second == g.mentee);
  }
}

TEST_CASE("planted mentorships always satisfy the candidate criteria") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CAPTURE(seed);
    const SynthConfig config = small_config(seed);
    const SynthOutput out = generate_records(config);
    const Corpus corpus = Corpus::from_records(out.papers, out.authors);

    std::set<std::string> mentees;
    for (const auto& [mentor, mentee] : out.truth) {
      CAPTURE(mentor);
      CAPTURE(mentee);
      const CandidateSet set = candidate_mentors(corpus, mentee, 2);
      CHECK(std::binary_search(set.candidates.begin(), set.candidates.end(),
                               mentor));
      mentees.insert(mentee);
    }
    // The enumerator must agree with a brute-force reading of the criteria.
    for (const std::string& mentee : mentees) {
      CAPTURE(mentee);
      const CandidateSet set = candidate_mentors(corpus, mentee, 2);
      const std::set<std::string> expect =
          testutil::candidate_oracle(out.papers, mentee, 2);
      CHECK(std::set<std::string>(set.candidates.begin(),
                                  set.candidates.end()) == expect);
    }
  }
}

TEST_CASE("mega mentor multiplies the first mentor's out-degree") {
  SynthConfig config = small_config(11);
  config.mega_mentor = true;
  const SynthOutput mega = generate_records(config);
  config.mega_mentor = false;
  const SynthOutput flat = generate_records(config);

  const auto out_degree = [](const SynthOutput& out, const std::string& id) {
    long n = 0;
    for (const auto& [mentor, mentee] : out.truth) n += mentor == id ? 1 : 0;
    return n;
  };
  CHECK(out_degree(mega, "m000001") == 10L * config.mentees_per_mentor);
  CHECK(out_degree(flat, "m000001") == config.mentees_per_mentor);
  // Only the first mentor is special.
  CHECK(out_degree(mega, "m000002") == config.mentees_per_mentor);
  CHECK(out_degree(mega, "m000012") == config.mentees_per_mentor);
}

TEST_CASE("default scale hits the documented regime") {
  const SynthConfig config;  // stock defaults, seed 0
  const SynthOutput out = generate_records(config);
  // 200 mentors; the mega mentor takes 50 mentees, the rest 5 each; all 1500
  // noise authors publish at least one solo paper.
  CHECK(out.gold.size() == 1045);
  CHECK(out.authors.size() == 2745);
  CHECK(out.papers.size() >= 25000);
  CHECK(out.papers.size() <= 35000);
  for (const PaperRecord& p : out.papers) {
    CHECK(p.year >= 1960);
    CHECK(p.year <= 2025);
  }
}

TEST_CASE("author metadata honors the corpus invariants") {
  const SynthConfig config = small_config(19);
  const SynthOutput out = generate_records(config);
  const std::set<std::string> labels(config.fos_labels.begin(),
                                     config.fos_labels.end());

  std::map<std::string, long> counts;
  for (const PaperRecord& p : out.papers) {
    for (const std::string& a : p.authors) ++counts[a];
  }
  CHECK(std::is_sorted(out.authors.begin(), out.authors.end(),
                       [](const AuthorRecord& x, const AuthorRecord& y) {
                         return x.author_id < y.author_id;
                       }));
  for (const AuthorRecord& a : out.authors) {
    CAPTURE(a.author_id);
    REQUIRE(a.paper_count.has_value());
    REQUIRE(a.citation_count.has_value());
    REQUIRE(a.h_index.has_value());
    CHECK(*a.paper_count == counts.at(a.author_id));
    CHECK(*a.citation_count >= 0);
    CHECK(*a.h_index >= 1);
    CHECK(*a.h_index <= *a.paper_count);
    CHECK(labels.count(a.field_of_study) == 1);
    CHECK_FALSE(a.name.empty());
  }
}

TEST_CASE("infeasible configurations are rejected up front") {
  const auto rejects = [](auto&& mutate) {
    SynthConfig config;
    mutate(config);
    CHECK_THROWS_AS(config.validate(), UsageError);
    CHECK_THROWS_AS(generate_records(config), UsageError);
  };
  rejects([](SynthConfig& c) { c.n_mentors = 0; });
  rejects([](SynthConfig& c) { c.mentees_per_mentor = 0; });
  rejects([](SynthConfig& c) { c.noise_authors = -1; });
  rejects([](SynthConfig& c) { c.career_span_years = {10, 5}; });
  rejects([](SynthConfig& c) { c.copubs_per_mentorship = {1, 5}; });
  rejects([](SynthConfig& c) {
    // Overlap windows no longer fit after the five onboarding years.
    c.career_span_years = {8, 10};
    c.mentee_overlap_years = {4, 6};
  });
  rejects([](SynthConfig& c) { c.fos_labels.clear(); });
  CHECK_NOTHROW(SynthConfig{}.validate());
}

TEST_CASE("truth csv round trips") {
  const std::vector<std::pair<std::string, std::string>> truth = {
      {"m000001", "s000001"},
      {"m000001", "s000002"},
      {"m000002", "s000003"},
  };
  TempDir dir("truth");
  const std::string path = dir.file("truth.csv");
  write_truth_csv(path, truth);
  CHECK(read_truth_csv(path) == truth);

  // A wrong header is rejected rather than silently reinterpreted.
  const std::string bad = dir.file("bad.csv");
  {
    AtomicFile file(bad);
    file.stream() << "a,b\nm,s\n";
    file.commit();
  }
  CHECK_THROWS_AS(read_truth_csv(bad), DataError);
}

}  // TEST_SUITE
