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

#include "mentorlens/linker.hpp"

#include <algorithm>
#include <cstdint>

#include <json.hpp>

#include "mentorlens/csv.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/parallel.hpp"

namespace mentorlens {
namespace {

// Decodes the UTF-8 sequence starting at s[i], advancing i past it. Invalid
// bytes decode to U+FFFD so normalization never throws.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[k]));
  };
  const std::uint32_t b0 = byte(i);
  auto continuation = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xC0u) == 0x80u;
  };
  if (b0 < 0x80u) {
    i += 1;
    return b0;
  }
  if ((b0 & 0xE0u) == 0xC0u && continuation(i + 1)) {
    const std::uint32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0u) == 0xE0u && continuation(i + 1) && continuation(i + 2)) {
    const std::uint32_t cp = ((b0 & 0x0Fu) << 12) |
                             ((byte(i + 1) & 0x3Fu) << 6) |
                             (byte(i + 2) & 0x3Fu);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8u) == 0xF0u && continuation(i + 1) && continuation(i + 2) &&
      continuation(i + 3)) {
    const std::uint32_t cp = ((b0 & 0x07u) << 18) |
                             ((byte(i + 1) & 0x3Fu) << 12) |
                             ((byte(i + 2) & 0x3Fu) << 6) |
                             (byte(i + 3) & 0x3Fu);
    i += 4;
    return cp;
  }
  i += 1;
  return 0xFFFDu;
}

// Folds one Latin code point to its lowercase ASCII base letters, or returns
// nullptr when the code point is not a letter we recognize.
const char* fold_latin(std::uint32_t cp) {
  // Latin-1 Supplement letters.
  switch (cp) {
    case 0xC6: case 0xE6: return "ae";                    // Æ æ
    case 0xD0: case 0xF0: return "d";                     // Ð ð
    case 0xD8: case 0xF8: return "o";                     // Ø ø
    case 0xDE: case 0xFE: return "th";                    // Þ þ
    case 0xDF: return "ss";                               // ß
    default: break;
  }
  if ((cp >= 0xC0 && cp <= 0xDD) || (cp >= 0xE0 && cp <= 0xFD) || cp == 0xFF) {
    const std::uint32_t base = cp >= 0xE0 ? cp - 0x20 : cp;  // fold case
    if (base >= 0xC0 && base <= 0xC5) return "a";
    if (base == 0xC7) return "c";
    if (base >= 0xC8 && base <= 0xCB) return "e";
    if (base >= 0xCC && base <= 0xCF) return "i";
    if (base == 0xD1) return "n";
    if (base >= 0xD2 && base <= 0xD6) return "o";
    if (base >= 0xD9 && base <= 0xDC) return "u";
    if (base == 0xDD) return "y";
    if (cp == 0xFF) return "y";                           // ÿ
  }
  // Latin Extended-A: contiguous runs per base letter.
  struct Run {
    std::uint32_t lo, hi;
    const char* out;
  };
  static constexpr Run kRuns[] = {
      {0x100, 0x105, "a"}, {0x106, 0x10D, "c"}, {0x10E, 0x111, "d"},
      {0x112, 0x11B, "e"}, {0x11C, 0x123, "g"}, {0x124, 0x127, "h"},
      {0x128, 0x131, "i"}, {0x132, 0x133, "ij"}, {0x134, 0x135, "j"},
      {0x136, 0x138, "k"}, {0x139, 0x142, "l"}, {0x143, 0x14B, "n"},
      {0x14C, 0x151, "o"}, {0x152, 0x153, "oe"}, {0x154, 0x159, "r"},
      {0x15A, 0x161, "s"}, {0x162, 0x167, "t"}, {0x168, 0x173, "u"},
      {0x174, 0x175, "w"}, {0x176, 0x178, "y"}, {0x179, 0x17E, "z"},
      {0x17F, 0x17F, "s"},
  };
  for (const Run& r : kRuns) {
    if (cp >= r.lo && cp <= r.hi) return r.out;
  }
  return nullptr;
}

std::vector<std::string_view> split_tokens(std::string_view normalized) {
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (start < normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) tokens.push_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

bool match_given_tokens(std::span<const std::string_view> query,
                        std::span<const std::string_view> candidate) {
  if (query.size() > candidate.size()) return false;
  for (std::size_t i = 0; i < query.size(); ++i) {
    if (query[i] == candidate[i]) continue;
    if (query[i].size() == 1 && query[i][0] == candidate[i][0]) continue;
    return false;
  }
  return true;
}

// Query name normalized and tokenized once, matched against many candidates.
// Not movable: tokens_ point into norm_.
class NameQuery {
 public:
  explicit NameQuery(std::string_view raw)
      : norm_(normalize_name(raw)), tokens_(split_tokens(norm_)) {}
  NameQuery(const NameQuery&) = delete;
  NameQuery& operator=(const NameQuery&) = delete;

  bool empty() const { return tokens_.empty(); }
  std::string_view surname() const { return tokens_.back(); }

  bool matches_normalized(std::string_view candidate_norm) const {
    const auto c_tokens = split_tokens(candidate_norm);
    if (tokens_.empty() || c_tokens.empty()) return false;
    if (tokens_.back() != c_tokens.back()) return false;
    return match_given_tokens({tokens_.data(), tokens_.size() - 1},
                              {c_tokens.data(), c_tokens.size() - 1});
  }

 private:
  std::string norm_;
  std::vector<std::string_view> tokens_;
};

}  // namespace

std::string normalize_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto push = [&](char c) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::uint32_t cp = decode_utf8(raw, i);
    if (cp < 0x80u) {
      const char c = static_cast<char>(cp);
      if (c >= 'a' && c <= 'z') {
        push(c);
      } else if (c >= 'A' && c <= 'Z') {
        push(static_cast<char>(c - 'A' + 'a'));
      } else if (c >= '0' && c <= '9') {
        push(c);
      } else {
        pending_space = true;  // punctuation and whitespace both separate
      }
      continue;
    }
    if (const char* folded = fold_latin(cp)) {
      for (const char* p = folded; *p; ++p) push(*p);
    } else {
      pending_space = true;
    }
  }
  return out;
}

bool names_match(std::string_view query, std::string_view candidate) {
  const std::string q = normalize_name(query);
  const std::string c = normalize_name(candidate);
  const auto q_tokens = split_tokens(q);
  const auto c_tokens = split_tokens(c);
  if (q_tokens.empty() || c_tokens.empty()) return false;
  if (q_tokens.back() != c_tokens.back()) return false;
  return match_given_tokens({q_tokens.data(), q_tokens.size() - 1},
                            {c_tokens.data(), c_tokens.size() - 1});
}

Linker::Linker(const Corpus& corpus) : corpus_(&corpus) {
  normalized_names_.reserve(corpus.author_count());
  for (AuthorIdx a = 0; a < corpus.author_count(); ++a) {
    normalized_names_.push_back(normalize_name(corpus.author(a).name));
    const auto tokens = split_tokens(normalized_names_.back());
    if (!tokens.empty()) {
      surname_index_[std::string(tokens.back())].push_back(a);
    }
  }
}

LinkAttempt Linker::try_link_pair(const GoldPair& gold) const {
  LinkAttempt attempt;
  attempt.source = gold.source;

  // Pre-linked gold: both fields are existing author IDs.
  const auto mentor_by_id = corpus_->find_author(gold.mentor);
  const auto mentee_by_id = corpus_->find_author(gold.mentee);
  if (mentor_by_id && mentee_by_id) {
    const long copubs = static_cast<long>(
        corpus_->copublication_idxs(*mentor_by_id, *mentee_by_id).size());
    if (copubs == 0) {
      attempt.outcome = LinkOutcome::kNoMentorMatch;
      return attempt;
    }
    attempt.outcome = LinkOutcome::kLinked;
    attempt.result = LinkResult{gold.mentor, gold.mentee, copubs, 1};
    return attempt;
  }

  const NameQuery mentee_query(gold.mentee);
  const NameQuery mentor_query(gold.mentor);
  if (mentee_query.empty()) {
    attempt.outcome = LinkOutcome::kNoMenteeMatch;
    return attempt;
  }
  const auto bucket = surname_index_.find(std::string(mentee_query.surname()));
  bool any_mentee = false;
  const LinkResult* best = nullptr;
  std::vector<LinkResult> matched;
  if (bucket != surname_index_.end()) {
    for (AuthorIdx mentee : bucket->second) {
      if (!mentee_query.matches_normalized(normalized_names_[mentee])) continue;
      any_mentee = true;
      for (AuthorIdx coauthor : corpus_->coauthor_idxs(mentee)) {
        if (!mentor_query.matches_normalized(normalized_names_[coauthor])) {
          continue;
        }
        const long copubs = static_cast<long>(
            corpus_->copublication_idxs(coauthor, mentee).size());
        matched.push_back(LinkResult{corpus_->author(coauthor).author_id,
                                     corpus_->author(mentee).author_id, copubs,
                                     0});
      }
    }
  }
  if (!any_mentee) {
    attempt.outcome = LinkOutcome::kNoMenteeMatch;
    return attempt;
  }
  if (matched.empty()) {
    attempt.outcome = LinkOutcome::kNoMentorMatch;
    return attempt;
  }
  for (const LinkResult& r : matched) {
    if (best == nullptr || r.copub_count_at_link > best->copub_count_at_link ||
        (r.copub_count_at_link == best->copub_count_at_link &&
         std::tie(r.mentee_id, r.mentor_id) <
             std::tie(best->mentee_id, best->mentor_id))) {
      best = &r;
    }
  }
  attempt.outcome = LinkOutcome::kLinked;
  attempt.result = *best;
  attempt.result->ambiguity_degree = static_cast<long>(matched.size());
  return attempt;
}

LinkResult Linker::link_pair(const GoldPair& gold) const {
  LinkAttempt attempt = try_link_pair(gold);
  switch (attempt.outcome) {
    case LinkOutcome::kLinked:
      return *attempt.result;
    case LinkOutcome::kNoMenteeMatch:
      throw NoMenteeMatch("no corpus author matches mentee '" + gold.mentee +
                          "'");
    case LinkOutcome::kNoMentorMatch:
      throw NoMentorMatch("no co-author of mentee '" + gold.mentee +
                          "' matches mentor '" + gold.mentor + "'");
  }
  throw Error("unreachable link outcome");
}

std::pair<std::vector<LinkAttempt>, LinkReport> Linker::link_all(
    std::span<const GoldPair> gold, int threads) const {
  std::vector<LinkAttempt> attempts(gold.size());
  parallel_for(gold.size(), threads,
               [&](std::size_t i) { attempts[i] = try_link_pair(gold[i]); });
  LinkReport report;
  report.total = static_cast<long>(attempts.size());
  for (const LinkAttempt& a : attempts) {
    switch (a.outcome) {
      case LinkOutcome::kLinked:
        ++report.linked;
        ++report.ambiguity_histogram[a.result->ambiguity_degree];
        break;
      case LinkOutcome::kNoMenteeMatch:
        ++report.no_mentee_match;
        break;
      case LinkOutcome::kNoMentorMatch:
        ++report.no_mentor_match;
        break;
    }
  }
  return {std::move(attempts), report};
}

std::string LinkReport::to_text() const {
  std::string out;
  out += "link report\n";
  out += "  total pairs:      " + std::to_string(total) + "\n";
  out += "  linked:           " + std::to_string(linked) + "\n";
  out += "  no mentee match:  " + std::to_string(no_mentee_match) + "\n";
  out += "  no mentor match:  " + std::to_string(no_mentor_match) + "\n";
  out += "  ambiguity histogram (degree: count):\n";
  for (const auto& [degree, count] : ambiguity_histogram) {
    out += "    " + std::to_string(degree) + ": " + std::to_string(count) +
           "\n";
  }
  return out;
}

std::string LinkReport::to_json() const {
  nlohmann::ordered_json j;
  j["total"] = total;
  j["linked"] = linked;
  j["no_mentee_match"] = no_mentee_match;
  j["no_mentor_match"] = no_mentor_match;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [degree, count] : ambiguity_histogram) {
    hist[std::to_string(degree)] = count;
  }
  j["ambiguity_histogram"] = std::move(hist);
  return j.dump(2);
}

std::vector<LinkedPair> linked_only(std::span<const LinkAttempt> attempts) {
  std::vector<LinkedPair> out;
  for (const LinkAttempt& a : attempts) {
    if (a.outcome != LinkOutcome::kLinked) continue;
    out.push_back(LinkedPair{a.result->mentor_id, a.result->mentee_id,
                             a.result->copub_count_at_link,
                             a.result->ambiguity_degree, a.source});
  }
  return out;
}

void write_linked_pairs_csv(const std::string& path,
                            std::span<const LinkedPair> pairs) {
  AtomicFile file(path);
  file.stream()
      << "mentor_id,mentee_id,copub_count_at_link,ambiguity_degree,source\n";
  for (const LinkedPair& p : pairs) {
    file.stream() << csv_escape(p.mentor_id) << ',' << csv_escape(p.mentee_id)
                  << ',' << p.copub_count_at_link << ',' << p.ambiguity_degree
                  << ',' << csv_escape(p.source) << '\n';
  }
  file.commit();
}

std::vector<LinkedPair> read_linked_pairs_csv(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 5 ||
      fields[0] != "mentor_id" || fields[1] != "mentee_id") {
    throw DataError(path + ": expected linked-pairs header");
  }
  std::vector<LinkedPair> out;
  while (reader.next(fields)) {
    if (fields.size() != 5) {
      throw DataError(path + ":" + std::to_string(reader.line_number()) +
                      ": expected 5 fields");
    }
    LinkedPair p;
    p.mentor_id = fields[0];
    p.mentee_id = fields[1];
    const std::string where = path + ":" + std::to_string(reader.line_number());
    p.copub_count_at_link = parse_long(fields[2], where + " copub_count");
    p.ambiguity_degree = parse_long(fields[3], where + " ambiguity_degree");
    p.source = fields[4];
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mentorlens
