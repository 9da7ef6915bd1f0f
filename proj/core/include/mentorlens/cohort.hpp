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

#ifndef MENTORLENS_COHORT_HPP
#define MENTORLENS_COHORT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mentorlens/corpus.hpp"
#include "mentorlens/linker.hpp"

namespace mentorlens {

// Span of years between a pair's first and last co-publication.
struct CopubPeriod {
  int start_year = 0;
  int end_year = 0;
  long copub_count = 0;
};

// Shortest year window holding at least P% of the pair's co-publications.
struct DensePeriod {
  int start_year = 0;
  int end_year = 0;
  long dense_copub_count = 0;   // co-publications inside the window
  double fraction_covered = 0;  // dense_copub_count / copub_count
};

struct CandidateSet {
  std::string mentee_id;
  std::vector<std::string> candidates;  // sorted author IDs
  int k = 0;
};

// label: 1 = positive, 0 = negative, -1 = unlabeled (inference pools).
struct LabeledPair {
  std::string mentor_candidate_id;
  std::string mentee_id;
  int label = -1;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

struct TrainingPairsReport {
  long positives = 0;
  long negatives = 0;
  long dropped_positives = 0;  // gold pairs with fewer than k co-publications
};

CopubPeriod copub_period(std::span<const PaperRecord> copubs);
CopubPeriod copub_period_from_years(std::span<const int> years);

// percent must satisfy 60 < P <= 100. Minimal window, ties broken by the
// earliest start year; both endpoints always fall on co-publication years.
DensePeriod dense_copub_period(std::span<const PaperRecord> copubs,
                               double percent);
DensePeriod dense_period_from_years(std::span<const int> years, double percent);

// Co-authors of the mentee that (a) had strictly more publications than the
// mentee before their first co-publication year, (b) published strictly
// earlier than the mentee, and (c) co-published at least k papers with them.
std::vector<AuthorIdx> candidate_mentor_idxs(const Corpus& corpus,
                                             AuthorIdx mentee, int k);
CandidateSet candidate_mentors(const Corpus& corpus, std::string_view mentee_id,
                               int k);

// Positives: linked gold pairs with >= k co-publications. Negatives: each gold
// mentee's candidate mentors minus all of that mentee's gold mentors.
// max_negatives_per_mentee == 0 keeps every negative; a positive cap samples
// that many per mentee, seeded deterministically. Output is ordered by
// (mentee_id, positive-before-negative, mentor_id).
std::pair<std::vector<LabeledPair>, TrainingPairsReport> build_training_pairs(
    const Corpus& corpus, std::span<const LinkedPair> gold, int k,
    long max_negatives_per_mentee = 0, std::uint64_t seed = 0,
    int threads = 1);

// Splits by mentee: every pair of one mentee lands on exactly one side.
// Validation receives round(val_fraction * n_mentees) mentees, clamped so both
// sides are non-empty. The index variant reports row positions so callers can
// also partition structures aligned with the pairs (e.g. feature rows).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
group_split_indices(std::span<const LabeledPair> pairs, double val_fraction,
                    std::uint64_t seed);
std::pair<std::vector<LabeledPair>, std::vector<LabeledPair>> group_split(
    std::span<const LabeledPair> pairs, double val_fraction,
    std::uint64_t seed);

struct PairsFile {
  std::vector<LabeledPair> pairs;
  bool has_labels = false;
};

void write_pairs_csv(const std::string& path, std::span<const LabeledPair>,
                     bool with_labels);
PairsFile read_pairs_csv(const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_COHORT_HPP
