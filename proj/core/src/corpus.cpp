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

#include "mentorlens/corpus.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"

namespace mentorlens {
namespace {

using json = nlohmann::ordered_json;

constexpr int kMinYear = 1500;

int current_utc_year() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  return tm.tm_year + 1900;
}

void validate_paper(const PaperRecord& p, int max_year) {
  if (p.paper_id.empty()) throw DataError("paper with empty paper_id");
  if (p.year < kMinYear || p.year > max_year) {
    throw DataError("paper '" + p.paper_id + "': year " +
                    std::to_string(p.year) + " outside [" +
                    std::to_string(kMinYear) + ", " + std::to_string(max_year) +
                    "]");
  }
  if (p.authors.empty()) {
    throw DataError("paper '" + p.paper_id + "': empty author list");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& a : p.authors) {
    if (a.empty()) throw DataError("paper '" + p.paper_id + "': empty author id");
    if (!seen.insert(a).second) {
      throw DataError("paper '" + p.paper_id + "': duplicate author '" + a + "'");
    }
  }
}

void validate_author(const AuthorRecord& a) {
  if (a.author_id.empty()) throw DataError("author with empty author_id");
  auto check_nonneg = [&](const std::optional<long>& v, const char* field) {
    if (v && *v < 0) {
      throw DataError("author '" + a.author_id + "': negative " + field);
    }
  };
  check_nonneg(a.paper_count, "paper_count");
  check_nonneg(a.citation_count, "citation_count");
  check_nonneg(a.h_index, "h_index");
  if (a.h_index && a.paper_count && *a.h_index > *a.paper_count) {
    throw DataError("author '" + a.author_id + "': h_index " +
                    std::to_string(*a.h_index) + " exceeds paper_count " +
                    std::to_string(*a.paper_count));
  }
}

template <typename T>
std::optional<std::uint32_t> lookup(
    const std::vector<std::pair<std::string, T>>& table, std::string_view key) {
  auto it = std::lower_bound(
      table.begin(), table.end(), key,
      [](const auto& entry, std::string_view k) { return entry.first < k; });
  if (it == table.end() || it->first != key) return std::nullopt;
  return it->second;
}

}  // namespace

Corpus Corpus::load(const std::string& papers_path,
                    const std::string& authors_path) {
  std::vector<PaperRecord> papers = read_papers_jsonl(papers_path);
  std::vector<AuthorRecord> authors;
  if (!authors_path.empty()) authors = read_authors_jsonl(authors_path);
  return from_records(std::move(papers), std::move(authors));
}

Corpus Corpus::from_records(std::vector<PaperRecord> papers,
                            std::vector<AuthorRecord> authors) {
  Corpus c;
  c.papers_ = std::move(papers);
  c.authors_ = std::move(authors);
  c.build_indices();
  return c;
}

void Corpus::build_indices() {
  if (papers_.empty()) throw DataError("empty corpus");

  const int max_year = current_utc_year() + 1;
  for (const auto& p : papers_) validate_paper(p, max_year);
  for (const auto& a : authors_) validate_author(a);

  std::sort(papers_.begin(), papers_.end(),
            [](const PaperRecord& a, const PaperRecord& b) {
              return a.paper_id < b.paper_id;
            });
  for (std::size_t i = 1; i < papers_.size(); ++i) {
    if (papers_[i].paper_id == papers_[i - 1].paper_id) {
      throw DataError("duplicate paper_id '" + papers_[i].paper_id + "'");
    }
  }

  std::sort(authors_.begin(), authors_.end(),
            [](const AuthorRecord& a, const AuthorRecord& b) {
              return a.author_id < b.author_id;
            });
  for (std::size_t i = 1; i < authors_.size(); ++i) {
    if (authors_[i].author_id == authors_[i - 1].author_id) {
      throw DataError("duplicate author_id '" + authors_[i].author_id + "'");
    }
  }

  // Authors mentioned only in papers get synthesized records so the pipeline
  // runs on papers-only corpora.
  std::unordered_set<std::string_view> known;
  known.reserve(authors_.size());
  for (const auto& a : authors_) known.insert(a.author_id);
  std::vector<std::string> extra;
  std::unordered_set<std::string_view> extra_seen;
  for (const auto& p : papers_) {
    for (const auto& id : p.authors) {
      if (!known.contains(id) && extra_seen.insert(id).second) {
        extra.push_back(id);
      }
    }
  }
  for (auto& id : extra) {
    AuthorRecord rec;
    rec.author_id = id;
    rec.name = id;
    authors_.push_back(std::move(rec));
  }
  std::sort(authors_.begin(), authors_.end(),
            [](const AuthorRecord& a, const AuthorRecord& b) {
              return a.author_id < b.author_id;
            });

  author_lookup_.reserve(authors_.size());
  for (AuthorIdx i = 0; i < authors_.size(); ++i) {
    author_lookup_.emplace_back(authors_[i].author_id, i);
  }
  paper_lookup_.reserve(papers_.size());
  for (PaperIdx i = 0; i < papers_.size(); ++i) {
    paper_lookup_.emplace_back(papers_[i].paper_id, i);
  }
  // Already sorted by construction (records were sorted above).

  paper_authors_.resize(papers_.size());
  author_papers_.assign(authors_.size(), {});
  for (PaperIdx p = 0; p < papers_.size(); ++p) {
    auto& idxs = paper_authors_[p];
    idxs.reserve(papers_[p].authors.size());
    for (const auto& id : papers_[p].authors) {
      const AuthorIdx a = *lookup(author_lookup_, id);
      idxs.push_back(a);
      author_papers_[a].push_back(p);
    }
  }

  // Papers are id-sorted, so sorting each author's list by year with a stable
  // sort yields (year, paper_id) order.
  author_paper_years_.resize(authors_.size());
  for (AuthorIdx a = 0; a < authors_.size(); ++a) {
    auto& ps = author_papers_[a];
    std::stable_sort(ps.begin(), ps.end(), [&](PaperIdx x, PaperIdx y) {
      return papers_[x].year < papers_[y].year;
    });
    auto& years = author_paper_years_[a];
    years.reserve(ps.size());
    for (PaperIdx p : ps) years.push_back(papers_[p].year);
  }
}

std::span<const AuthorIdx> Corpus::paper_author_idxs(PaperIdx p) const {
  return paper_authors_[p];
}

std::optional<AuthorIdx> Corpus::find_author(std::string_view author_id) const {
  return lookup(author_lookup_, author_id);
}

AuthorIdx Corpus::require_author(std::string_view author_id) const {
  auto idx = find_author(author_id);
  if (!idx) throw DataError("unknown author '" + std::string(author_id) + "'");
  return *idx;
}

std::optional<PaperIdx> Corpus::find_paper(std::string_view paper_id) const {
  return lookup(paper_lookup_, paper_id);
}

std::span<const PaperIdx> Corpus::papers_of(AuthorIdx a) const {
  return author_papers_[a];
}

std::span<const PaperIdx> Corpus::papers_until(AuthorIdx a,
                                               int until_year) const {
  const auto& years = author_paper_years_[a];
  const auto end =
      std::upper_bound(years.begin(), years.end(), until_year) - years.begin();
  return std::span<const PaperIdx>(author_papers_[a]).first(
      static_cast<std::size_t>(end));
}

long Corpus::pub_count_before(AuthorIdx a, int year) const {
  const auto& years = author_paper_years_[a];
  return std::lower_bound(years.begin(), years.end(), year) - years.begin();
}

long Corpus::pub_count_until(AuthorIdx a, int year) const {
  const auto& years = author_paper_years_[a];
  return std::upper_bound(years.begin(), years.end(), year) - years.begin();
}

long Corpus::pub_count_in(AuthorIdx a, int year_lo, int year_hi) const {
  return pub_count_until(a, year_hi) - pub_count_before(a, year_lo);
}

std::optional<int> Corpus::first_pub_year(AuthorIdx a) const {
  const auto& years = author_paper_years_[a];
  if (years.empty()) return std::nullopt;
  return years.front();
}

std::vector<PaperRecord> Corpus::pub_history(
    std::string_view author_id, std::optional<int> until_year) const {
  const AuthorIdx a = require_author(author_id);
  const auto span = until_year ? papers_until(a, *until_year) : papers_of(a);
  std::vector<PaperRecord> out;
  out.reserve(span.size());
  for (PaperIdx p : span) out.push_back(papers_[p]);
  return out;
}

std::vector<PaperIdx> Corpus::copublication_idxs(AuthorIdx a,
                                                 AuthorIdx b) const {
  if (a == b) throw DataError("copublications of an author with themselves");
  // Filter the larger list through a sorted set of the smaller one; the
  // result inherits the larger list's (year, paper_id) order.
  const auto* small = &author_papers_[a];
  const auto* large = &author_papers_[b];
  if (small->size() > large->size()) std::swap(small, large);
  std::vector<PaperIdx> member(*small);
  std::sort(member.begin(), member.end());
  std::vector<PaperIdx> out;
  for (PaperIdx p : *large) {
    if (std::binary_search(member.begin(), member.end(), p)) out.push_back(p);
  }
  return out;
}

std::vector<PaperRecord> Corpus::copublications(std::string_view a,
                                                std::string_view b) const {
  const auto idxs = copublication_idxs(require_author(a), require_author(b));
  std::vector<PaperRecord> out;
  out.reserve(idxs.size());
  for (PaperIdx p : idxs) out.push_back(papers_[p]);
  return out;
}

std::vector<int> Corpus::copublication_years(AuthorIdx a, AuthorIdx b) const {
  const auto idxs = copublication_idxs(a, b);
  std::vector<int> years;
  years.reserve(idxs.size());
  for (PaperIdx p : idxs) years.push_back(papers_[p].year);
  return years;
}

std::vector<AuthorIdx> Corpus::coauthor_idxs_in_window(AuthorIdx a, int year_lo,
                                                       int year_hi) const {
  if (year_lo > year_hi) {
    throw DataError("inverted co-author window [" + std::to_string(year_lo) +
                    ", " + std::to_string(year_hi) + "]");
  }
  const auto& years = author_paper_years_[a];
  const auto lo =
      std::lower_bound(years.begin(), years.end(), year_lo) - years.begin();
  const auto hi =
      std::upper_bound(years.begin(), years.end(), year_hi) - years.begin();
  std::vector<AuthorIdx> out;
  for (auto i = lo; i < hi; ++i) {
    for (AuthorIdx other : paper_authors_[author_papers_[a][i]]) {
      if (other != a) out.push_back(other);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<std::string> Corpus::coauthors_in_window(std::string_view author_id,
                                                  int year_lo,
                                                  int year_hi) const {
  const AuthorIdx a = require_author(author_id);
  std::set<std::string> out;
  for (AuthorIdx idx : coauthor_idxs_in_window(a, year_lo, year_hi)) {
    out.insert(authors_[idx].author_id);
  }
  return out;
}

std::vector<AuthorIdx> Corpus::coauthor_idxs(AuthorIdx a) const {
  std::vector<AuthorIdx> out;
  for (PaperIdx p : author_papers_[a]) {
    for (AuthorIdx other : paper_authors_[p]) {
      if (other != a) out.push_back(other);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// On-disk formats
// ---------------------------------------------------------------------------

namespace {

json parse_jsonl_line(const std::string& line, const std::string& path,
                      std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError(path + ":" + std::to_string(line_no) + ": malformed record");
  }
  return j;
}

template <typename T>
T field_or_throw(const json& j, const char* key, const std::string& path,
                 std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw DataError(path + ":" + std::to_string(line_no) + ": missing '" +
                    key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(path + ":" + std::to_string(line_no) + ": bad type for '" +
                    key + "'");
  }
}

}  // namespace

std::vector<PaperRecord> read_papers_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<PaperRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_jsonl_line(line, path, line_no);
    PaperRecord p;
    p.paper_id = field_or_throw<std::string>(j, "paper_id", path, line_no);
    p.year = field_or_throw<int>(j, "year", path, line_no);
    p.authors =
        field_or_throw<std::vector<std::string>>(j, "authors", path, line_no);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AuthorRecord> read_authors_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<AuthorRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_jsonl_line(line, path, line_no);
    AuthorRecord a;
    a.author_id = field_or_throw<std::string>(j, "author_id", path, line_no);
    a.name = field_or_throw<std::string>(j, "name", path, line_no);
    auto opt_long = [&](const char* key) -> std::optional<long> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return field_or_throw<long>(j, key, path, line_no);
    };
    a.paper_count = opt_long("paper_count");
    a.citation_count = opt_long("citation_count");
    a.h_index = opt_long("h_index");
    if (j.contains("field_of_study") && !j.at("field_of_study").is_null()) {
      a.field_of_study =
          field_or_throw<std::string>(j, "field_of_study", path, line_no);
      if (a.field_of_study.empty()) a.field_of_study = "unknown";
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<GoldPair> read_gold_pairs_csv(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() < 2 || fields[0] != "mentor" ||
      fields[1] != "mentee") {
    throw DataError(path + ": expected header 'mentor,mentee,source'");
  }
  std::vector<GoldPair> out;
  while (reader.next(fields)) {
    if (fields.size() < 2 || fields.size() > 3) {
      throw DataError(path + ":" + std::to_string(reader.line_number()) +
                      ": expected 2 or 3 fields");
    }
    GoldPair g;
    g.mentor = fields[0];
    g.mentee = fields[1];
    g.source = fields.size() == 3 ? fields[2] : "";
    if (g.mentor.empty() || g.mentee.empty()) {
      throw DataError(path + ":" + std::to_string(reader.line_number()) +
                      ": empty mentor or mentee");
    }
    if (g.mentor == g.mentee) {
      throw DataError(path + ":" + std::to_string(reader.line_number()) +
                      ": mentor equals mentee ('" + g.mentor + "')");
    }
    out.push_back(std::move(g));
  }
  return out;
}

void write_papers_jsonl(const std::string& path,
                        std::span<const PaperRecord> papers) {
  AtomicFile file(path);
  for (const auto& p : papers) {
    json j;
    j["paper_id"] = p.paper_id;
    j["year"] = p.year;
    j["authors"] = p.authors;
    file.stream() << j.dump() << '\n';
  }
  file.commit();
}

void write_authors_jsonl(const std::string& path,
                         std::span<const AuthorRecord> authors) {
  AtomicFile file(path);
  for (const auto& a : authors) {
    json j;
    j["author_id"] = a.author_id;
    j["name"] = a.name;
    if (a.paper_count) j["paper_count"] = *a.paper_count;
    if (a.citation_count) j["citation_count"] = *a.citation_count;
    if (a.h_index) j["h_index"] = *a.h_index;
    j["field_of_study"] = a.field_of_study;
    file.stream() << j.dump() << '\n';
  }
  file.commit();
}

void write_gold_pairs_csv(const std::string& path,
                          std::span<const GoldPair> pairs) {
  AtomicFile file(path);
  file.stream() << "mentor,mentee,source\n";
  for (const auto& g : pairs) {
    file.stream() << csv_escape(g.mentor) << ',' << csv_escape(g.mentee) << ','
                  << csv_escape(g.source) << '\n';
  }
  file.commit();
}

}  // namespace mentorlens
