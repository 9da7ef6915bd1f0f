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

#ifndef MENTORLENS_LINKER_HPP
#define MENTORLENS_LINKER_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mentorlens/corpus.hpp"
#include "mentorlens/errors.hpp"

namespace mentorlens {

// Canonical form used for all name comparisons: lowercase, Latin diacritics
// folded to ASCII, punctuation stripped, whitespace collapsed. Idempotent.
std::string normalize_name(std::string_view raw);

// True when the normalized surnames (last tokens) are equal and every query
// given-name token matches the candidate token at the same position, either
// exactly or as a single-letter initial. A query with more given-name tokens
// than the candidate never matches.
bool names_match(std::string_view query, std::string_view candidate);

enum class LinkOutcome { kLinked, kNoMenteeMatch, kNoMentorMatch };

// A gold pair resolved to corpus author IDs.
struct LinkResult {
  std::string mentor_id;
  std::string mentee_id;
  long copub_count_at_link = 0;  // >= 1 for any successful link
  long ambiguity_degree = 0;     // number of competing matched id pairs
};

// One gold pair's outcome; `result` is set iff outcome == kLinked.
struct LinkAttempt {
  LinkOutcome outcome = LinkOutcome::kNoMenteeMatch;
  std::optional<LinkResult> result;
  std::string source;
};

// Flat record for the linked-pairs CSV.
struct LinkedPair {
  std::string mentor_id;
  std::string mentee_id;
  long copub_count_at_link = 0;
  long ambiguity_degree = 0;
  std::string source;
};

struct LinkReport {
  long total = 0;
  long linked = 0;
  long no_mentee_match = 0;
  long no_mentor_match = 0;
  // ambiguity_degree -> number of linked pairs with that degree
  std::map<long, long> ambiguity_histogram;

  std::string to_text() const;
  std::string to_json() const;
};

class NoMenteeMatch : public DataError {
 public:
  using DataError::DataError;
};

class NoMentorMatch : public DataError {
 public:
  using DataError::DataError;
};

// Resolves mentee names via a surname index, then searches each mentee
// candidate's co-authors for a mentor name match; among all matched id pairs
// the one with the most co-publications wins, ties broken by smallest
// (mentee_id, mentor_id). Gold fields that are both existing author IDs skip
// name matching entirely.
class Linker {
 public:
  explicit Linker(const Corpus& corpus);

  // Throws NoMenteeMatch / NoMentorMatch on the corresponding failure.
  LinkResult link_pair(const GoldPair& gold) const;

  // Match failures become outcomes instead of exceptions.
  LinkAttempt try_link_pair(const GoldPair& gold) const;

  // Applies try_link_pair to every pair (optionally across threads); output
  // order is input order regardless of thread count.
  std::pair<std::vector<LinkAttempt>, LinkReport> link_all(
      std::span<const GoldPair> gold, int threads = 1) const;

 private:
  const Corpus* corpus_;
  std::vector<std::string> normalized_names_;  // by AuthorIdx
  std::unordered_map<std::string, std::vector<AuthorIdx>> surname_index_;
};

// Keeps only successful attempts, pairing each result with its gold source.
std::vector<LinkedPair> linked_only(std::span<const LinkAttempt> attempts);

void write_linked_pairs_csv(const std::string& path,
                            std::span<const LinkedPair> pairs);
std::vector<LinkedPair> read_linked_pairs_csv(const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_LINKER_HPP
