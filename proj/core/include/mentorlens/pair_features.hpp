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

#ifndef MENTORLENS_PAIR_FEATURES_HPP
#define MENTORLENS_PAIR_FEATURES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mentorlens/cohort.hpp"
#include "mentorlens/corpus.hpp"

namespace mentorlens {

// Number of pairwise features: 27 publication + 9 co-author + 6 position.
inline constexpr std::size_t kPairFeatureCount = 42;

// Canonical feature order; all feature files and models use it.
const std::vector<std::string>& pair_feature_schema();

// Index of a feature name in the canonical schema; throws on unknown names.
std::size_t pair_feature_index(std::string_view name);

// Feature values aligned to pair_feature_schema(). Zero-denominator ratios
// carry the MISSING marker (see missing.hpp); everything else is finite.
std::vector<double> extract_pair_features(const Corpus& corpus,
                                          std::string_view mentor_candidate_id,
                                          std::string_view mentee_id,
                                          double percent);

// Row-major matrix with a named column schema.
struct FeatureMatrix {
  std::vector<std::string> schema;
  std::vector<double> values;  // n_rows x schema.size()

  std::size_t n_cols() const { return schema.size(); }
  std::size_t n_rows() const {
    return schema.empty() ? 0 : values.size() / schema.size();
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * schema.size(),
                                                   schema.size());
  }
};

// One row per pair, in input order; parallel extraction writes disjoint row
// slots so thread count never changes the result.
FeatureMatrix extract_matrix(const Corpus& corpus,
                             std::span<const LabeledPair> pairs, double percent,
                             int threads = 1);

struct FeaturesFile {
  std::vector<LabeledPair> pairs;  // aligned with matrix rows
  FeatureMatrix matrix;
  std::vector<int> labels;  // empty unless has_labels
  bool has_labels = false;
};

// Rows open with mentor_candidate_id,mentee_id so downstream stages can split
// by mentee and assemble the score graph. MISSING values serialize as empty
// cells; labels, when given, append a trailing 0/1 column.
void write_features_csv(const std::string& path,
                        std::span<const LabeledPair> pairs,
                        const FeatureMatrix& matrix,
                        const std::vector<int>* labels);
FeaturesFile read_features_csv(const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_PAIR_FEATURES_HPP
