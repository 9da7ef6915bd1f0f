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

#include "mentorlens/pair_features.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/missing.hpp"
#include "mentorlens/parallel.hpp"

namespace mentorlens {
namespace {

// Slot indices; must stay aligned with kSchema below.
enum FeatureSlot : std::size_t {
  kCopubCount = 0,
  kTotalMtePubs,
  kTotalCoaPubs,
  kMteCopubTotal,
  kCoaCopubTotal,
  kMteCopubPrcnt,
  kCoaCopubPrcnt,
  kRatioMteCoa,
  kCopubYears,
  kMteYears,
  kCoaYears,
  kMteCopubYearsPrcnt,
  kCoaCopubYearsPrcnt,
  kDenseMteCopubTotal,
  kDenseCoaCopubTotal,
  kDenseTotalCoaPubs,
  kDenseTotalMtePubs,
  kDenseCopubCount,
  kDenseMteCopubPrcnt,
  kDenseCoaCopubPrcnt,
  kDenseRatioMteCoa,
  kDenseMteYears,
  kDenseCoaYears,
  kDenseMteCopubYearsPrcnt,
  kDenseCoaCopubYearsPrcnt,
  kCoaPubsBeforeCopub,
  kMtePubsBeforeCopub,
  kMenteeCoauthorsBeforeCopub,
  kMentorCoauthorsBeforeCopub,
  kMenteeCoauthorsAfterCopub,
  kMentorCoauthorsAfterCopub,
  kMenteeCoauthorsCopub,
  kMentorCoauthorsCopub,
  kRatioMenteeMentorCoauthors,
  kRatioMenteeMentorCoauthorsBefore,
  kRatioMenteeMentorCoauthorsAfter,
  kMenteeMinPosition,
  kMentorMinPosition,
  kMenteeMaxPosition,
  kMentorMaxPosition,
  kMenteeAvgPosition,
  kMentorAvgPosition,
  kSlotCount,
};
static_assert(kSlotCount == kPairFeatureCount);

constexpr std::array<const char*, kPairFeatureCount> kSchema = {
    "copub_count",
    "total_mte_pubs",
    "total_coa_pubs",
    "mte_copub_total",
    "coa_copub_total",
    "mte_copub_prcnt",
    "coa_copub_prcnt",
    "ratio_mte_coa",
    "copub_years",
    "mte_years",
    "coa_years",
    "mte_copub_years_prcnt",
    "coa_copub_years_prcnt",
    "dense_mte_copub_total",
    "dense_coa_copub_total",
    "dense_total_coa_pubs",
    "dense_total_mte_pubs",
    "dense_copub_count",
    "dense_mte_copub_prcnt",
    "dense_coa_copub_prcnt",
    "dense_ratio_mte_coa",
    "dense_mte_years",
    "dense_coa_years",
    "dense_mte_copub_years_prcnt",
    "dense_coa_copub_years_prcnt",
    "coa_pubs_before_copub",
    "mte_pubs_before_copub",
    "mentee_coauthors_before_copub",
    "mentor_coauthors_before_copub",
    "mentee_coauthors_after_copub",
    "mentor_coauthors_after_copub",
    "mentee_coauthors_copub",
    "mentor_coauthors_copub",
    "ratio_mentee_mentor_coauthors",
    "ratio_mentee_mentor_coauthors_before",
    "ratio_mentee_mentor_coauthors_after",
    "mentee_min_position",
    "mentor_min_position",
    "mentee_max_position",
    "mentor_max_position",
    "mentee_avg_position",
    "mentor_avg_position",
};

// Lower bound for "history so far" windows; corpus years are >= 1500.
constexpr int kYearFloor = 0;

long distinct_coauthors(const Corpus& corpus, AuthorIdx a, int lo, int hi) {
  return static_cast<long>(corpus.coauthor_idxs_in_window(a, lo, hi).size());
}

std::vector<double> extract_by_idx(const Corpus& corpus, AuthorIdx coa,
                                   AuthorIdx mte, double percent) {
  const std::vector<int> copub_years = corpus.copublication_years(coa, mte);
  if (copub_years.empty()) {
    throw DataError("pair (" + corpus.author(coa).author_id + ", " +
                    corpus.author(mte).author_id + ") has no co-publications");
  }
  const CopubPeriod cp = copub_period_from_years(copub_years);
  const DensePeriod dp = dense_period_from_years(copub_years, percent);

  const int mte_first = *corpus.first_pub_year(mte);
  const int coa_first = *corpus.first_pub_year(coa);

  std::vector<double> f(kPairFeatureCount, 0.0);

  // Publication counts over the full co-publication period.
  f[kCopubCount] = static_cast<double>(cp.copub_count);
  f[kTotalMtePubs] = static_cast<double>(corpus.pub_count_until(mte, cp.end_year));
  f[kTotalCoaPubs] = static_cast<double>(corpus.pub_count_until(coa, cp.end_year));
  f[kMteCopubTotal] =
      static_cast<double>(corpus.pub_count_in(mte, cp.start_year, cp.end_year));
  f[kCoaCopubTotal] =
      static_cast<double>(corpus.pub_count_in(coa, cp.start_year, cp.end_year));
  f[kMteCopubPrcnt] = ratio_or_missing(f[kCopubCount], f[kMteCopubTotal]);
  f[kCoaCopubPrcnt] = ratio_or_missing(f[kCopubCount], f[kCoaCopubTotal]);
  f[kRatioMteCoa] = ratio_or_missing(f[kTotalMtePubs], f[kTotalCoaPubs]);

  // Activity spans, truncated at the period end. Both ends are publication
  // years of the respective author, so every span is >= 1.
  f[kCopubYears] = static_cast<double>(cp.end_year - cp.start_year + 1);
  f[kMteYears] = static_cast<double>(cp.end_year - mte_first + 1);
  f[kCoaYears] = static_cast<double>(cp.end_year - coa_first + 1);
  f[kMteCopubYearsPrcnt] = ratio_or_missing(f[kCopubYears], f[kMteYears]);
  f[kCoaCopubYearsPrcnt] = ratio_or_missing(f[kCopubYears], f[kCoaYears]);

  // Dense-period variants; percent ratios keep full-period denominators.
  f[kDenseMteCopubTotal] =
      static_cast<double>(corpus.pub_count_in(mte, dp.start_year, dp.end_year));
  f[kDenseCoaCopubTotal] =
      static_cast<double>(corpus.pub_count_in(coa, dp.start_year, dp.end_year));
  f[kDenseTotalCoaPubs] =
      static_cast<double>(corpus.pub_count_until(coa, dp.end_year));
  f[kDenseTotalMtePubs] =
      static_cast<double>(corpus.pub_count_until(mte, dp.end_year));
  f[kDenseCopubCount] = static_cast<double>(dp.dense_copub_count);
  f[kDenseMteCopubPrcnt] = ratio_or_missing(f[kDenseCopubCount], f[kMteCopubTotal]);
  f[kDenseCoaCopubPrcnt] = ratio_or_missing(f[kDenseCopubCount], f[kCoaCopubTotal]);
  f[kDenseRatioMteCoa] =
      ratio_or_missing(f[kDenseTotalMtePubs], f[kDenseTotalCoaPubs]);
  f[kDenseMteYears] = static_cast<double>(dp.end_year - mte_first + 1);
  f[kDenseCoaYears] = static_cast<double>(dp.end_year - coa_first + 1);
  const double dense_copub_years =
      static_cast<double>(dp.end_year - dp.start_year + 1);
  f[kDenseMteCopubYearsPrcnt] = ratio_or_missing(dense_copub_years, f[kMteYears]);
  f[kDenseCoaCopubYearsPrcnt] = ratio_or_missing(dense_copub_years, f[kCoaYears]);

  f[kCoaPubsBeforeCopub] =
      static_cast<double>(corpus.pub_count_before(coa, cp.start_year));
  f[kMtePubsBeforeCopub] =
      static_cast<double>(corpus.pub_count_before(mte, cp.start_year));

  // Distinct co-author counts: before the period, cumulative through its end,
  // and within it.
  f[kMenteeCoauthorsBeforeCopub] = static_cast<double>(
      distinct_coauthors(corpus, mte, kYearFloor, cp.start_year - 1));
  f[kMentorCoauthorsBeforeCopub] = static_cast<double>(
      distinct_coauthors(corpus, coa, kYearFloor, cp.start_year - 1));
  f[kMenteeCoauthorsAfterCopub] = static_cast<double>(
      distinct_coauthors(corpus, mte, kYearFloor, cp.end_year));
  f[kMentorCoauthorsAfterCopub] = static_cast<double>(
      distinct_coauthors(corpus, coa, kYearFloor, cp.end_year));
  f[kMenteeCoauthorsCopub] = static_cast<double>(
      distinct_coauthors(corpus, mte, cp.start_year, cp.end_year));
  f[kMentorCoauthorsCopub] = static_cast<double>(
      distinct_coauthors(corpus, coa, cp.start_year, cp.end_year));
  f[kRatioMenteeMentorCoauthors] =
      ratio_or_missing(f[kMenteeCoauthorsCopub], f[kMentorCoauthorsCopub]);
  f[kRatioMenteeMentorCoauthorsBefore] = ratio_or_missing(
      f[kMenteeCoauthorsBeforeCopub], f[kMentorCoauthorsBeforeCopub]);
  f[kRatioMenteeMentorCoauthorsAfter] = ratio_or_missing(
      f[kMenteeCoauthorsAfterCopub], f[kMentorCoauthorsAfterCopub]);

  // 1-based authorship positions over the pair's co-publications.
  long mte_min = std::numeric_limits<long>::max(), mte_max = 0, mte_sum = 0;
  long coa_min = std::numeric_limits<long>::max(), coa_max = 0, coa_sum = 0;
  const auto copubs = corpus.copublication_idxs(coa, mte);
  for (PaperIdx p : copubs) {
    const auto authors = corpus.paper_author_idxs(p);
    long mte_pos = 0, coa_pos = 0;
    for (std::size_t i = 0; i < authors.size(); ++i) {
      if (authors[i] == mte) mte_pos = static_cast<long>(i) + 1;
      if (authors[i] == coa) coa_pos = static_cast<long>(i) + 1;
    }
    mte_min = std::min(mte_min, mte_pos);
    mte_max = std::max(mte_max, mte_pos);
    mte_sum += mte_pos;
    coa_min = std::min(coa_min, coa_pos);
    coa_max = std::max(coa_max, coa_pos);
    coa_sum += coa_pos;
  }
  const double n_copubs = static_cast<double>(copubs.size());
  f[kMenteeMinPosition] = static_cast<double>(mte_min);
  f[kMentorMinPosition] = static_cast<double>(coa_min);
  f[kMenteeMaxPosition] = static_cast<double>(mte_max);
  f[kMentorMaxPosition] = static_cast<double>(coa_max);
  f[kMenteeAvgPosition] = static_cast<double>(mte_sum) / n_copubs;
  f[kMentorAvgPosition] = static_cast<double>(coa_sum) / n_copubs;

  return f;
}

}  // namespace

const std::vector<std::string>& pair_feature_schema() {
  static const std::vector<std::string> schema(kSchema.begin(), kSchema.end());
  return schema;
}

std::size_t pair_feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kSchema.size(); ++i) {
    if (name == kSchema[i]) return i;
  }
  throw Error("unknown pair feature '" + std::string(name) + "'");
}

std::vector<double> extract_pair_features(const Corpus& corpus,
                                          std::string_view mentor_candidate_id,
                                          std::string_view mentee_id,
                                          double percent) {
  return extract_by_idx(corpus, corpus.require_author(mentor_candidate_id),
                        corpus.require_author(mentee_id), percent);
}

FeatureMatrix extract_matrix(const Corpus& corpus,
                             std::span<const LabeledPair> pairs, double percent,
                             int threads) {
  FeatureMatrix m;
  m.schema = pair_feature_schema();
  m.values.assign(pairs.size() * kPairFeatureCount, 0.0);
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto row = extract_pair_features(
        corpus, pairs[i].mentor_candidate_id, pairs[i].mentee_id, percent);
    std::copy(row.begin(), row.end(),
              m.values.begin() + static_cast<std::ptrdiff_t>(
                                     i * kPairFeatureCount));
  });
  return m;
}

void write_features_csv(const std::string& path,
                        std::span<const LabeledPair> pairs,
                        const FeatureMatrix& matrix,
                        const std::vector<int>* labels) {
  if (pairs.size() != matrix.n_rows()) {
    throw Error("pair count does not match feature rows");
  }
  if (labels != nullptr && labels->size() != matrix.n_rows()) {
    throw Error("label count does not match feature rows");
  }
  AtomicFile file(path);
  auto& out = file.stream();
  out << "mentor_candidate_id,mentee_id";
  for (const std::string& name : matrix.schema) out << ',' << name;
  if (labels != nullptr) out << ",label";
  out << '\n';
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    out << csv_escape(pairs[r].mentor_candidate_id) << ','
        << csv_escape(pairs[r].mentee_id);
    for (const double v : matrix.row(r)) {
      out << ',';
      if (!is_missing(v)) out << format_double(v);
    }
    if (labels != nullptr) out << ',' << (*labels)[r];
    out << '\n';
  }
  file.commit();
}

FeaturesFile read_features_csv(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.size() < 3 ||
      fields[0] != "mentor_candidate_id" || fields[1] != "mentee_id") {
    throw DataError(path +
                    ": expected header starting mentor_candidate_id,mentee_id");
  }
  FeaturesFile out;
  out.has_labels = fields.back() == "label";
  const std::size_t n_cols = fields.size() - 2 - (out.has_labels ? 1 : 0);
  out.matrix.schema.assign(
      fields.begin() + 2,
      fields.begin() + 2 + static_cast<std::ptrdiff_t>(n_cols));
  while (reader.next(fields)) {
    const std::string where = path + ":" + std::to_string(reader.line_number());
    if (fields.size() != n_cols + 2 + (out.has_labels ? 1 : 0)) {
      throw DataError(where + ": wrong field count");
    }
    LabeledPair pair;
    pair.mentor_candidate_id = fields[0];
    pair.mentee_id = fields[1];
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (fields[c + 2].empty()) {
        out.matrix.values.push_back(missing_value());
      } else {
        out.matrix.values.push_back(parse_double(fields[c + 2], where));
      }
    }
    if (out.has_labels) {
      const long label = parse_long(fields[n_cols + 2], where);
      if (label != 0 && label != 1) {
        throw DataError(where + ": label must be 0 or 1");
      }
      out.labels.push_back(static_cast<int>(label));
      pair.label = static_cast<int>(label);
    }
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

}  // namespace mentorlens
