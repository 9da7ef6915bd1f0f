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

#include "mentorlens/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/parallel.hpp"
#include "mentorlens/rng.hpp"

namespace mentorlens {
namespace {

std::vector<int> years_of(std::span<const PaperRecord> copubs) {
  std::vector<int> years;
  years.reserve(copubs.size());
  for (const auto& p : copubs) years.push_back(p.year);
  return years;
}

}  // namespace

CopubPeriod copub_period_from_years(std::span<const int> years) {
  if (years.empty()) throw DataError("co-publication period of an empty list");
  const auto [lo, hi] = std::minmax_element(years.begin(), years.end());
  return CopubPeriod{*lo, *hi, static_cast<long>(years.size())};
}

CopubPeriod copub_period(std::span<const PaperRecord> copubs) {
  return copub_period_from_years(years_of(copubs));
}

DensePeriod dense_period_from_years(std::span<const int> years,
                                    double percent) {
  if (years.empty()) throw DataError("dense period of an empty list");
  if (!(percent > 60.0 && percent <= 100.0)) {
    throw UsageError("dense-period percent must satisfy 60 < P <= 100, got " +
                     format_double(percent));
  }
  const long total = static_cast<long>(years.size());
  // The epsilon keeps exact percentages (e.g. 80% of 5) from rounding up when
  // the product lands a hair above an integer in floating point.
  const long required = std::max<long>(
      1, static_cast<long>(std::ceil(percent / 100.0 * total - 1e-9)));

  std::vector<int> sorted(years.begin(), years.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> distinct;
  std::vector<long> count;
  for (int y : sorted) {
    if (distinct.empty() || distinct.back() != y) {
      distinct.push_back(y);
      count.push_back(0);
    }
    ++count.back();
  }

  // Two pointers over distinct years: for each left edge, the smallest right
  // edge reaching the coverage bound only moves forward.
  long best_span = -1;
  std::size_t best_lo = 0, best_hi = 0;
  long best_inside = 0;
  std::size_t hi = 0;
  long inside = 0;
  for (std::size_t lo = 0; lo < distinct.size(); ++lo) {
    if (hi < lo) {
      hi = lo;
      inside = 0;
    }
    if (hi == lo && inside == 0) inside = count[lo];
    while (inside < required && hi + 1 < distinct.size()) {
      ++hi;
      inside += count[hi];
    }
    if (inside < required) break;  // no window starting here or later works
    const long span = distinct[hi] - distinct[lo];
    if (best_span < 0 || span < best_span) {
      best_span = span;
      best_lo = lo;
      best_hi = hi;
      best_inside = inside;
    }
    inside -= count[lo];
  }
  if (best_span < 0) throw Error("dense period search found no window");
  return DensePeriod{distinct[best_lo], distinct[best_hi], best_inside,
                     static_cast<double>(best_inside) /
                         static_cast<double>(total)};
}

DensePeriod dense_copub_period(std::span<const PaperRecord> copubs,
                               double percent) {
  return dense_period_from_years(years_of(copubs), percent);
}

std::vector<AuthorIdx> candidate_mentor_idxs(const Corpus& corpus,
                                             AuthorIdx mentee, int k) {
  if (k < 1) throw UsageError("co-publication threshold k must be >= 1");
  const auto mentee_first = corpus.first_pub_year(mentee);
  if (!mentee_first) {
    throw DataError("mentee '" + corpus.author(mentee).author_id +
                    "' has no publications");
  }
  std::vector<AuthorIdx> out;
  for (AuthorIdx coauthor : corpus.coauthor_idxs(mentee)) {
    const auto copub_years = corpus.copublication_years(mentee, coauthor);
    if (static_cast<long>(copub_years.size()) < k) continue;
    const int first_copub =
        *std::min_element(copub_years.begin(), copub_years.end());
    if (corpus.pub_count_before(coauthor, first_copub) <=
        corpus.pub_count_before(mentee, first_copub)) {
      continue;
    }
    const auto coauthor_first = corpus.first_pub_year(coauthor);
    if (!coauthor_first || *coauthor_first >= *mentee_first) continue;
    out.push_back(coauthor);
  }
  return out;  // coauthor_idxs is sorted, so this is author-ID order
}

CandidateSet candidate_mentors(const Corpus& corpus, std::string_view mentee_id,
                               int k) {
  const AuthorIdx mentee = corpus.require_author(mentee_id);
  CandidateSet set;
  set.mentee_id = std::string(mentee_id);
  set.k = k;
  for (AuthorIdx idx : candidate_mentor_idxs(corpus, mentee, k)) {
    set.candidates.push_back(corpus.author(idx).author_id);
  }
  return set;
}

std::pair<std::vector<LabeledPair>, TrainingPairsReport> build_training_pairs(
    const Corpus& corpus, std::span<const LinkedPair> gold, int k,
    long max_negatives_per_mentee, std::uint64_t seed, int threads) {
  if (max_negatives_per_mentee < 0) {
    throw UsageError("negative cap must be >= 0");
  }
  TrainingPairsReport report;

  // Gold mentors per mentee, deduplicated; all of them are excluded from the
  // negative pool even when the positive itself is dropped below.
  std::map<std::string, std::set<std::string>> gold_mentors;
  for (const LinkedPair& g : gold) {
    corpus.require_author(g.mentor_id);
    corpus.require_author(g.mentee_id);
    gold_mentors[g.mentee_id].insert(g.mentor_id);
  }

  std::set<std::pair<std::string, std::string>> positives;  // (mentee, mentor)
  for (const auto& [mentee_id, mentors] : gold_mentors) {
    const AuthorIdx mentee = corpus.require_author(mentee_id);
    for (const std::string& mentor_id : mentors) {
      const AuthorIdx mentor = corpus.require_author(mentor_id);
      const long copubs =
          static_cast<long>(corpus.copublication_idxs(mentor, mentee).size());
      if (copubs < k) {
        ++report.dropped_positives;
      } else {
        positives.emplace(mentee_id, mentor_id);
      }
    }
  }

  std::vector<const std::string*> mentees;
  mentees.reserve(gold_mentors.size());
  for (const auto& [mentee_id, _] : gold_mentors) {
    mentees.push_back(&mentee_id);
  }
  std::vector<std::vector<std::string>> negatives_by_mentee(mentees.size());
  parallel_for(mentees.size(), threads, [&](std::size_t i) {
    const std::string& mentee_id = *mentees[i];
    const AuthorIdx mentee = corpus.require_author(mentee_id);
    const auto& excluded = gold_mentors.at(mentee_id);
    std::vector<std::string> negs;
    for (AuthorIdx cand : candidate_mentor_idxs(corpus, mentee, k)) {
      const std::string& cand_id = corpus.author(cand).author_id;
      if (!excluded.contains(cand_id)) negs.push_back(cand_id);
    }
    if (max_negatives_per_mentee > 0 &&
        static_cast<long>(negs.size()) > max_negatives_per_mentee) {
      Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(i)));
      rng.shuffle(negs);
      negs.resize(static_cast<std::size_t>(max_negatives_per_mentee));
      std::sort(negs.begin(), negs.end());
    }
    negatives_by_mentee[i] = std::move(negs);
  });

  std::vector<LabeledPair> out;
  for (std::size_t i = 0; i < mentees.size(); ++i) {
    const std::string& mentee_id = *mentees[i];
    for (const std::string& mentor_id : gold_mentors.at(mentee_id)) {
      if (positives.contains({mentee_id, mentor_id})) {
        out.push_back(LabeledPair{mentor_id, mentee_id, 1});
      }
    }
    for (const std::string& mentor_id : negatives_by_mentee[i]) {
      out.push_back(LabeledPair{mentor_id, mentee_id, 0});
    }
  }
  report.positives = static_cast<long>(positives.size());
  report.negatives = 0;
  for (const auto& negs : negatives_by_mentee) {
    report.negatives += static_cast<long>(negs.size());
  }
  return {std::move(out), report};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
group_split_indices(std::span<const LabeledPair> pairs, double val_fraction,
                    std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw UsageError("validation fraction must lie in (0, 1), got " +
                     format_double(val_fraction));
  }
  std::set<std::string> mentee_set;
  for (const LabeledPair& p : pairs) mentee_set.insert(p.mentee_id);
  if (mentee_set.size() < 2) {
    throw DataError("group split needs at least 2 distinct mentees, got " +
                    std::to_string(mentee_set.size()));
  }
  std::vector<std::string> mentees(mentee_set.begin(), mentee_set.end());
  Rng rng(seed);
  rng.shuffle(mentees);
  const long n = static_cast<long>(mentees.size());
  const long n_val = std::clamp<long>(
      std::lround(val_fraction * static_cast<double>(n)), 1, n - 1);
  std::set<std::string> val_mentees(mentees.begin(), mentees.begin() + n_val);

  std::vector<std::size_t> train, val;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    (val_mentees.contains(pairs[i].mentee_id) ? val : train).push_back(i);
  }
  return {std::move(train), std::move(val)};
}

std::pair<std::vector<LabeledPair>, std::vector<LabeledPair>> group_split(
    std::span<const LabeledPair> pairs, double val_fraction,
    std::uint64_t seed) {
  const auto [train_idx, val_idx] = group_split_indices(pairs, val_fraction, seed);
  std::vector<LabeledPair> train, val;
  train.reserve(train_idx.size());
  val.reserve(val_idx.size());
  for (std::size_t i : train_idx) train.push_back(pairs[i]);
  for (std::size_t i : val_idx) val.push_back(pairs[i]);
  return {std::move(train), std::move(val)};
}

void write_pairs_csv(const std::string& path, std::span<const LabeledPair> pairs,
                     bool with_labels) {
  AtomicFile file(path);
  file.stream() << (with_labels ? "mentor_candidate_id,mentee_id,label\n"
                                : "mentor_candidate_id,mentee_id\n");
  for (const LabeledPair& p : pairs) {
    file.stream() << csv_escape(p.mentor_candidate_id) << ','
                  << csv_escape(p.mentee_id);
    if (with_labels) {
      if (p.label != 0 && p.label != 1) {
        throw Error("refusing to write unlabeled pair with labels");
      }
      file.stream() << ',' << p.label;
    }
    file.stream() << '\n';
  }
  file.commit();
}

PairsFile read_pairs_csv(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() < 2 ||
      fields[0] != "mentor_candidate_id" || fields[1] != "mentee_id") {
    throw DataError(path + ": expected pairs header");
  }
  PairsFile out;
  out.has_labels = fields.size() == 3 && fields[2] == "label";
  if (fields.size() > 2 && !out.has_labels) {
    throw DataError(path + ": unexpected third header column '" + fields[2] +
                    "'");
  }
  const std::size_t want = out.has_labels ? 3 : 2;
  while (reader.next(fields)) {
    if (fields.size() != want) {
      throw DataError(path + ":" + std::to_string(reader.line_number()) +
                      ": expected " + std::to_string(want) + " fields");
    }
    LabeledPair p;
    p.mentor_candidate_id = fields[0];
    p.mentee_id = fields[1];
    if (out.has_labels) {
      const long label = parse_long(
          fields[2], path + ":" + std::to_string(reader.line_number()));
      if (label != 0 && label != 1) {
        throw DataError(path + ":" + std::to_string(reader.line_number()) +
                        ": label must be 0 or 1");
      }
      p.label = static_cast<int>(label);
    }
    out.pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace mentorlens
