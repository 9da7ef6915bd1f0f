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

#ifndef MENTORLENS_CORPUS_HPP
#define MENTORLENS_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mentorlens {

using AuthorIdx = std::uint32_t;
using PaperIdx = std::uint32_t;

// One bibliographic record. `authors` preserves authorship-list order;
// position 1 is the first author.
struct PaperRecord {
  std::string paper_id;
  int year = 0;
  std::vector<std::string> authors;
};

struct AuthorRecord {
  std::string author_id;
  std::string name;
  std::optional<long> paper_count;
  std::optional<long> citation_count;
  std::optional<long> h_index;
  std::string field_of_study = "unknown";
};

// A ground-truth mentorship assertion. Mentor/mentee may be display names to
// be resolved by the linker, or corpus author ids taken verbatim.
struct GoldPair {
  std::string mentor;
  std::string mentee;
  std::string source;
};

// Immutable indexed store of papers and author metadata. All queries are
// read-only and safe to call concurrently once the corpus is built.
//
// Iteration order is deterministic: papers sorted by paper id, authors by
// author id, and every per-author publication list sorted by (year, paper id).
class Corpus {
 public:
  static Corpus load(const std::string& papers_path,
                     const std::string& authors_path = "");
  static Corpus from_records(std::vector<PaperRecord> papers,
                             std::vector<AuthorRecord> authors = {});

  std::size_t paper_count() const { return papers_.size(); }
  std::size_t author_count() const { return authors_.size(); }

  const PaperRecord& paper(PaperIdx p) const { return papers_[p]; }
  const AuthorRecord& author(AuthorIdx a) const { return authors_[a]; }
  int paper_year(PaperIdx p) const { return papers_[p].year; }
  std::span<const AuthorIdx> paper_author_idxs(PaperIdx p) const;

  std::optional<AuthorIdx> find_author(std::string_view author_id) const;
  // Throws DataError for unknown ids.
  AuthorIdx require_author(std::string_view author_id) const;
  std::optional<PaperIdx> find_paper(std::string_view paper_id) const;

  // Paper indices of one author, sorted by (year, paper id).
  std::span<const PaperIdx> papers_of(AuthorIdx a) const;
  // Prefix of papers_of(a) with year <= until_year.
  std::span<const PaperIdx> papers_until(AuthorIdx a, int until_year) const;

  long pub_count_before(AuthorIdx a, int year) const;  // strictly earlier
  long pub_count_until(AuthorIdx a, int year) const;   // inclusive
  long pub_count_in(AuthorIdx a, int year_lo, int year_hi) const;
  // Year of the author's earliest paper; nullopt for authors with none.
  std::optional<int> first_pub_year(AuthorIdx a) const;

  std::vector<PaperRecord> pub_history(std::string_view author_id,
                                       std::optional<int> until_year = {}) const;

  // Papers listing both authors, sorted by (year, paper id). a != b.
  std::vector<PaperIdx> copublication_idxs(AuthorIdx a, AuthorIdx b) const;
  std::vector<PaperRecord> copublications(std::string_view a,
                                          std::string_view b) const;
  std::vector<int> copublication_years(AuthorIdx a, AuthorIdx b) const;

  // Distinct co-authors on the author's papers with year in [lo, hi],
  // excluding the author. Sorted by index.
  std::vector<AuthorIdx> coauthor_idxs_in_window(AuthorIdx a, int year_lo,
                                                 int year_hi) const;
  std::set<std::string> coauthors_in_window(std::string_view author_id,
                                            int year_lo, int year_hi) const;
  // All-time distinct co-authors.
  std::vector<AuthorIdx> coauthor_idxs(AuthorIdx a) const;

 private:
  Corpus() = default;
  void build_indices();  // also validates and synthesizes missing authors

  std::vector<PaperRecord> papers_;
  std::vector<AuthorRecord> authors_;
  std::vector<std::vector<AuthorIdx>> paper_authors_;   // per paper
  std::vector<std::vector<PaperIdx>> author_papers_;    // per author, sorted
  std::vector<std::vector<int>> author_paper_years_;    // aligned, sorted
  std::vector<std::pair<std::string, AuthorIdx>> author_lookup_;  // sorted
  std::vector<std::pair<std::string, PaperIdx>> paper_lookup_;    // sorted
};

// JSONL / CSV readers and writers for the on-disk corpus formats.
std::vector<PaperRecord> read_papers_jsonl(const std::string& path);
std::vector<AuthorRecord> read_authors_jsonl(const std::string& path);
std::vector<GoldPair> read_gold_pairs_csv(const std::string& path);
void write_papers_jsonl(const std::string& path,
                        std::span<const PaperRecord> papers);
void write_authors_jsonl(const std::string& path,
                         std::span<const AuthorRecord> authors);
void write_gold_pairs_csv(const std::string& path,
                          std::span<const GoldPair> pairs);

}  // namespace mentorlens

#endif  // MENTORLENS_CORPUS_HPP
