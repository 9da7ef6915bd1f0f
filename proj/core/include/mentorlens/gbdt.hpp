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

#ifndef MENTORLENS_GBDT_HPP
#define MENTORLENS_GBDT_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mentorlens/pair_features.hpp"
#include "mentorlens/rng.hpp"

namespace mentorlens {

inline constexpr int kUnlimitedDepth = -1;

struct TrainConfig {
  double learning_rate = 0.1;
  int num_leaves = 31;
  double colsample_bytree = 1.0;
  double subsample = 1.0;
  int min_child_samples = 20;
  double min_child_weight = 1e-3;
  double reg_alpha = 0.0;
  double reg_lambda = 0.0;
  int max_depth = kUnlimitedDepth;
  int n_rounds = 500;
  std::uint64_t seed = 0;

  // Throws UsageError on any out-of-bounds field.
  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  bool default_left = true;  // where MISSING goes
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output
  double gain = 0.0;   // realized split gain (internal nodes only)

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // root at index 0

  double predict_row(std::span<const double> row) const;
};

struct GbdtModel {
  std::vector<std::string> schema;
  double base_score = 0.0;
  double learning_rate = 0.0;
  std::vector<RegressionTree> trees;

  // base_score + learning_rate * sum of tree outputs (log-odds scale).
  double raw_score(std::span<const double> row) const;
  // sigmoid(raw_score), strictly inside (0,1).
  double predict_row(std::span<const double> row) const;
  // Batch prediction; the matrix schema must equal the model schema.
  std::vector<double> predict(const FeatureMatrix& matrix) const;
};

// Second-order boosting on logistic loss with leaf-wise tree growth and
// exact greedy splits; deterministic given (matrix, labels, config).
GbdtModel train_gbdt(const FeatureMatrix& matrix, std::span<const int> labels,
                     const TrainConfig& config);

// Mann-Whitney AUC with tie handling, O(n log n). Needs both classes.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Mean negative log-likelihood with probabilities clamped to
// [1e-15, 1 - 1e-15]. Errors on empty input.
double logloss(std::span<const double> scores, std::span<const int> labels);

// Hyperparameter vocabulary: discrete grids, with reg terms and max_depth
// drawn as a coin flip between "off" and a log grid.
struct SearchSpace {
  std::vector<double> learning_rates;
  std::vector<int> num_leaves;
  std::vector<double> colsample_bytree;
  std::vector<double> subsample;
  std::vector<int> min_child_samples;
  std::vector<double> min_child_weights;
  std::vector<double> reg_grid;       // used for both reg_alpha and reg_lambda
  std::vector<int> max_depths;        // finite choices; coin picks UNLIMITED
  int n_iterations = 50;
  int n_rounds = 500;

  static SearchSpace defaults();

  // One uniform draw per field, in declaration order; also seeds the config
  // from the stream so repeated draws yield distinct trainings.
  TrainConfig sample(Rng& rng) const;

  void validate() const;
};

struct TrialResult {
  int trial = 0;
  TrainConfig config;
  double val_auc = 0.0;
  bool ok = false;
  std::string status;  // "ok" or failure message
};

struct SearchResult {
  TrainConfig best_config;
  GbdtModel best_model;
  double best_val_auc = 0.0;
  int best_trial = -1;
  std::vector<TrialResult> trials;  // ordered by trial index
};

// Trains every sampled config, keeps the one with the highest validation AUC
// (ties -> earlier trial). Failed trials are logged and skipped; if all fail,
// throws. Trials may run in parallel; results are slot-ordered.
SearchResult random_search(const SearchSpace& space,
                           const FeatureMatrix& train_matrix,
                           std::span<const int> train_labels,
                           const FeatureMatrix& val_matrix,
                           std::span<const int> val_labels, std::uint64_t seed,
                           int threads = 1);

// Total realized split gain per schema feature; never-split features map to 0.
std::map<std::string, double> feature_importance(const GbdtModel& model);

void save_model(const std::string& path, const GbdtModel& model);
GbdtModel load_model(const std::string& path);

void write_trial_log_csv(const std::string& path,
                         std::span<const TrialResult> trials);

}  // namespace mentorlens

#endif  // MENTORLENS_GBDT_HPP
