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

#include "mentorlens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/rng.hpp"

namespace mentorlens {
namespace {

// Mentor careers start in [kEraStart, kEraStart + 24]; every generated year is
// clamped to kYearCap so the corpus validator's upper bound never trips.
constexpr int kEraStart = 1960;
constexpr int kYearCap = 2025;

const std::vector<std::string> kGivenNames = {
    "james",  "mary",    "wei",     "ana",    "david",  "elena",  "kenji",
    "priya",  "omar",    "lucia",   "ivan",   "sofia",  "pedro",  "amara",
    "chen",   "fatima",  "marco",   "ingrid", "tariq",  "yuki",   "nadia",
    "piotr",  "rosa",    "samuel",  "leila",  "henrik", "aisha",  "carlos",
    "mei",    "stefan",  "laura",   "ravi",   "tomas",  "zara",   "felix",
    "hana"};

const std::vector<std::string> kSurnames = {
    "smith",    "garcia",   "wang",    "mueller",  "tanaka",   "silva",
    "kumar",    "johnson",  "rossi",   "novak",    "kim",      "petrov",
    "andersen", "okafor",   "haddad",  "lindgren", "moreau",   "fischer",
    "santos",   "nakamura", "oconnor", "weber",    "ferraro",  "hansen",
    "gupta",    "kowalski", "vargas",  "yamada",   "ibrahim",  "nilsson",
    "martin",   "castro",   "dubois",  "larsen",   "rahman",   "fontana",
    "becker",   "moretti",  "alves",   "schmidt",  "tran",     "popescu",
    "keller",   "barbosa",  "holm",    "ricci",    "duarte",   "lang"};

struct NoiseSpec {
  std::string id;
  int start = 0;
  int end = 0;
  bool senior = false;
  int n_solo = 0;
};

std::string seq_id(const char* prefix, std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, n);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_mentors < 1) throw UsageError("synth: n_mentors must be >= 1");
  if (mentees_per_mentor < 1) {
    throw UsageError("synth: mentees_per_mentor must be >= 1");
  }
  if (noise_authors < 0) throw UsageError("synth: noise_authors must be >= 0");
  auto check_range = [](const IntRange& r, const char* what, int min_lo) {
    if (r.lo < min_lo || r.hi < r.lo) {
      throw UsageError(std::string("synth: invalid range for ") + what);
    }
  };
  check_range(career_span_years, "career_span_years", 1);
  check_range(mentee_overlap_years, "mentee_overlap_years", 1);
  check_range(copubs_per_mentorship, "copubs_per_mentorship", 2);
  // Mentees onboard five years into the mentor's career and their overlap
  // window must still fit before the career ends.
  if (career_span_years.lo < mentee_overlap_years.hi + 5) {
    throw UsageError(
        "synth: career_span_years.lo must be at least "
        "mentee_overlap_years.hi + 5 to fit onboarding plus the overlap "
        "window");
  }
  if (fos_labels.empty()) throw UsageError("synth: fos_labels must not be empty");
}

SynthOutput generate_records(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthOutput out;

  auto add_paper = [&](int year, std::vector<std::string> authors) {
    out.papers.push_back(PaperRecord{seq_id("p", out.papers.size() + 1),
                                     std::min(year, kYearCap),
                                     std::move(authors)});
  };
  auto pick_name = [&] {
    return rng.pick(kGivenNames) + " " + rng.pick(kSurnames);
  };

  std::map<std::string, std::string> fos_of;  // author id -> field label
  std::map<std::string, std::string> name_of;

  // --- Noise authors -----------------------------------------------------
  // Seniors start early with sizeable output: when one of them repeatedly
  // co-publishes with a mentee later on, all candidate criteria hold and the
  // pair becomes a hard negative. Peers start late with thin records, so such
  // pairs typically fail the seniority or first-publication test.
  std::vector<NoiseSpec> noise(static_cast<std::size_t>(config.noise_authors));
  std::vector<std::vector<int>> active_by_year(
      static_cast<std::size_t>(kYearCap - kEraStart + 1));
  for (std::size_t i = 0; i < noise.size(); ++i) {
    NoiseSpec& n = noise[i];
    n.id = seq_id("n", i + 1);
    n.senior = rng.unit() < 0.4;
    if (n.senior) {
      n.start = kEraStart + rng.range_int(0, 20);
      n.end = n.start + rng.range_int(15, 35) - 1;
      n.n_solo = rng.range_int(6, 14);
    } else {
      n.start = 1990 + rng.range_int(0, 20);
      n.end = n.start + rng.range_int(4, 12) - 1;
      n.n_solo = rng.range_int(1, 4);
    }
    n.end = std::min(n.end, kYearCap);
    fos_of[n.id] = rng.pick(config.fos_labels);
    name_of[n.id] = pick_name();
    for (int y = n.start; y <= n.end; ++y) {
      active_by_year[static_cast<std::size_t>(y - kEraStart)].push_back(
          static_cast<int>(i));
    }
  }
  // Returns a noise author active in `year` and not already on the paper, or
  // "" when none qualifies.
  auto pick_active_noise = [&](int year,
                               const std::vector<std::string>& on_paper) {
    year = std::min(year, kYearCap);
    const auto& bucket = active_by_year[static_cast<std::size_t>(year - kEraStart)];
    if (bucket.empty()) return std::string();
    for (int attempt = 0; attempt < 3; ++attempt) {
      const std::string& id = noise[static_cast<std::size_t>(
                                        bucket[rng.below(bucket.size())])]
                                  .id;
      if (std::find(on_paper.begin(), on_paper.end(), id) == on_paper.end()) {
        return id;
      }
    }
    return std::string();
  };
  // A senior noise author active in `year`, used as a recurring collaborator
  // on one mentee's papers. Such shadows satisfy every candidate criterion:
  // they are the hard negatives the classifier has to learn to reject.
  auto pick_senior_noise = [&](int year) {
    year = std::min(year, kYearCap);
    const auto& bucket = active_by_year[static_cast<std::size_t>(year - kEraStart)];
    if (bucket.empty()) return std::string();
    for (int attempt = 0; attempt < 6; ++attempt) {
      const NoiseSpec& n =
          noise[static_cast<std::size_t>(bucket[rng.below(bucket.size())])];
      if (n.senior) return n.id;
    }
    return std::string();
  };

  // --- Mentors and their base output -------------------------------------
  struct MentorSpec {
    std::string id;
    int start = 0;
    int span = 0;
  };
  std::vector<MentorSpec> mentors(static_cast<std::size_t>(config.n_mentors));
  for (std::size_t m = 0; m < mentors.size(); ++m) {
    MentorSpec& spec = mentors[m];
    spec.id = seq_id("m", m + 1);
    spec.start = kEraStart + rng.range_int(0, 24);
    spec.span = rng.range_int(config.career_span_years.lo,
                              config.career_span_years.hi);
    fos_of[spec.id] = rng.pick(config.fos_labels);
    name_of[spec.id] = pick_name();

    const int n_base = rng.range_int(50, 90);
    for (int k = 0; k < n_base; ++k) {
      // The first five career years get one paper each, guaranteeing the
      // mentor out-publishes every mentee before any overlap window opens.
      const int year = k < 5 ? spec.start + k
                             : spec.start + rng.range_int(0, spec.span - 1);
      std::vector<std::string> authors{spec.id};
      const double coauth = rng.unit();
      if (coauth < 0.45) {
        std::string extra = pick_active_noise(year, authors);
        if (!extra.empty()) authors.push_back(std::move(extra));
        if (coauth < 0.10) {
          extra = pick_active_noise(year, authors);
          if (!extra.empty()) authors.push_back(std::move(extra));
        }
      }
      if (authors.size() > 1) rng.shuffle(authors);
      add_paper(year, std::move(authors));
    }
  }

  // --- Mentees -----------------------------------------------------------
  std::size_t mentee_seq = 0;
  for (std::size_t m = 0; m < mentors.size(); ++m) {
    const MentorSpec& mentor = mentors[m];
    const int n_mentees =
        config.mentees_per_mentor *
        (config.mega_mentor && m == 0 && config.n_mentors > 1 ? 10 : 1);
    // Earlier mentees of the same mentor, with their first overlap year; a
    // lab-mate only joins papers dated at or after their own window starts,
    // so the join never adds publications before that mentee's first
    // co-publication with the mentor.
    std::vector<std::pair<std::string, int>> lab;
    auto pick_labmate = [&](int year) {
      std::vector<std::string> eligible;
      for (const auto& [id, window_start] : lab) {
        if (window_start <= year) eligible.push_back(id);
      }
      if (eligible.empty()) return std::string();
      return eligible[rng.below(eligible.size())];
    };

    for (int j = 0; j < n_mentees; ++j) {
      const std::string id = seq_id("s", ++mentee_seq);
      fos_of[id] = rng.unit() < 0.8 ? fos_of.at(mentor.id)
                                    : rng.pick(config.fos_labels);
      name_of[id] = pick_name();

      const int window = rng.range_int(config.mentee_overlap_years.lo,
                                       config.mentee_overlap_years.hi);
      const int first_copub =
          rng.range_int(mentor.start + 5, mentor.start + mentor.span - window);
      const int n_copubs = rng.range_int(config.copubs_per_mentorship.lo,
                                         config.copubs_per_mentorship.hi);

      // At most one pre-overlap paper, so the mentor's five guaranteed early
      // papers always dominate the mentee's output before the first co-pub.
      if (rng.unit() < 0.35) {
        const int year = first_copub - rng.range_int(1, 2);
        std::vector<std::string> authors{id};
        if (rng.unit() < 0.4) {
          std::string extra = pick_active_noise(year, authors);
          if (!extra.empty()) authors.push_back(std::move(extra));
        }
        add_paper(year, std::move(authors));
      }

      // Roughly a third of mentees acquire a recurring senior collaborator.
      const std::string shadow =
          rng.unit() < 0.35 ? pick_senior_noise(first_copub) : std::string();

      for (int c = 0; c < n_copubs; ++c) {
        const int year =
            c == 0 ? first_copub : first_copub + rng.range_int(0, window - 1);
        std::vector<std::string> authors{id};
        if (!shadow.empty() && rng.unit() < 0.6) authors.push_back(shadow);
        if (rng.unit() < 0.3) {
          std::string mate = pick_labmate(year);
          if (!mate.empty()) authors.push_back(std::move(mate));
        }
        if (rng.unit() < 0.25) {
          std::string extra = pick_active_noise(year, authors);
          if (!extra.empty()) authors.push_back(std::move(extra));
        }
        if (rng.unit() < 0.8) {
          authors.push_back(mentor.id);  // mentor in the last author slot
        } else {
          authors.insert(
              authors.begin() +
                  static_cast<std::ptrdiff_t>(rng.below(authors.size() + 1)),
              mentor.id);
        }
        add_paper(year, std::move(authors));
      }

      const int n_post = rng.range_int(1, 3);
      for (int k = 0; k < n_post; ++k) {
        const int year = first_copub + window - 1 + rng.range_int(1, 4);
        std::vector<std::string> authors{id};
        if (!shadow.empty() && rng.unit() < 0.4) authors.push_back(shadow);
        const double style = rng.unit();
        if (style < 0.25) {
          std::string mate = pick_labmate(year);
          if (!mate.empty()) authors.push_back(std::move(mate));
        } else if (style < 0.65) {
          std::string extra = pick_active_noise(year, authors);
          if (!extra.empty()) authors.push_back(std::move(extra));
        }
        add_paper(year, std::move(authors));
      }

      out.gold.push_back(GoldPair{mentor.id, id, "synthetic"});
      out.truth.emplace_back(mentor.id, id);
      lab.emplace_back(id, first_copub);
    }
  }

  // --- Noise solo output --------------------------------------------------
  for (const NoiseSpec& n : noise) {
    for (int k = 0; k < n.n_solo; ++k) {
      const int year = n.start + rng.range_int(0, n.end - n.start);
      std::vector<std::string> authors{n.id};
      if (rng.unit() < 0.2) {
        std::string extra = pick_active_noise(year, authors);
        if (!extra.empty()) authors.push_back(std::move(extra));
      }
      add_paper(year, std::move(authors));
    }
  }

  // --- Author metadata -----------------------------------------------------
  // Citation count scales with output; the h-index is capped by the paper
  // count so corpus validation always accepts the records.
  std::map<std::string, long> pub_counts;
  for (const PaperRecord& p : out.papers) {
    for (const std::string& a : p.authors) ++pub_counts[a];
  }
  for (const auto& [id, count] : pub_counts) {
    AuthorRecord rec;
    rec.author_id = id;
    rec.name = name_of.at(id);
    rec.field_of_study = fos_of.at(id);
    const long citations =
        count * (3 + static_cast<long>(rng.below(18))) +
        static_cast<long>(rng.below(40));
    rec.paper_count = count;
    rec.citation_count = citations;
    rec.h_index = std::min<long>(
        count, 1 + static_cast<long>(std::sqrt(static_cast<double>(citations)) *
                                     (0.4 + 0.5 * rng.unit())));
    out.authors.push_back(std::move(rec));
  }
  return out;
}

void generate(const SynthConfig& config, const std::string& papers_path,
              const std::string& authors_path, const std::string& gold_path,
              const std::string& truth_path) {
  const SynthOutput out = generate_records(config);
  write_papers_jsonl(papers_path, out.papers);
  write_authors_jsonl(authors_path, out.authors);
  write_gold_pairs_csv(gold_path, out.gold);
  write_truth_csv(truth_path, out.truth);
}

void write_truth_csv(
    const std::string& path,
    std::span<const std::pair<std::string, std::string>> truth) {
  AtomicFile file(path);
  file.stream() << "mentor_id,mentee_id\n";
  for (const auto& [mentor, mentee] : truth) {
    file.stream() << csv_escape(mentor) << "," << csv_escape(mentee) << "\n";
  }
  file.commit();
}

std::vector<std::pair<std::string, std::string>> read_truth_csv(
    const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() != 2 || fields[0] != "mentor_id" ||
      fields[1] != "mentee_id") {
    throw DataError(path + ": expected header mentor_id,mentee_id");
  }
  std::vector<std::pair<std::string, std::string>> truth;
  while (reader.next(fields)) {
    if (fields.size() != 2) {
      throw DataError(path + ":" + std::to_string(reader.line_number()) +
                      ": expected 2 fields");
    }
    truth.emplace_back(fields[0], fields[1]);
  }
  return truth;
}

}  // namespace mentorlens
