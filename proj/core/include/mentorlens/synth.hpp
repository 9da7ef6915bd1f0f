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

#ifndef MENTORLENS_SYNTH_HPP
#define MENTORLENS_SYNTH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mentorlens/corpus.hpp"

namespace mentorlens {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

// Knobs for the planted-truth corpus generator. The defaults produce the
// desk-scale regime: senior mentors with long careers, mentees joining years
// later, and noise authors that are either credible hard negatives or fail
// exactly one candidate criterion.
struct SynthConfig {
  int n_mentors = 200;
  int mentees_per_mentor = 5;
  int noise_authors = 1500;
  IntRange career_span_years{25, 40};     // mentor career length
  IntRange mentee_overlap_years{2, 6};    // mentorship co-publication window
  IntRange copubs_per_mentorship{2, 8};   // minimum must stay >= 2
  bool mega_mentor = true;  // first mentor gets 10x the usual mentees
  std::uint64_t seed = 0;
  std::vector<std::string> fos_labels = {"biology", "computer science",
                                         "chemistry", "physics", "medicine",
                                         "economics"};

  void validate() const;  // throws UsageError when infeasible
};

struct SynthOutput {
  std::vector<PaperRecord> papers;
  std::vector<AuthorRecord> authors;
  std::vector<GoldPair> gold;  // mentor/mentee carry author IDs
  std::vector<std::pair<std::string, std::string>> truth;  // (mentor, mentee)
};

// Deterministic for a given config; single-threaded by design.
SynthOutput generate_records(const SynthConfig& config);

// Renders generate_records to the pipeline's on-disk formats.
void generate(const SynthConfig& config, const std::string& papers_path,
              const std::string& authors_path, const std::string& gold_path,
              const std::string& truth_path);

void write_truth_csv(const std::string& path,
                     std::span<const std::pair<std::string, std::string>> truth);
std::vector<std::pair<std::string, std::string>> read_truth_csv(
    const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_SYNTH_HPP
