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

#include "mentorlens/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"
#include "mentorlens/missing.hpp"
#include "mentorlens/parallel.hpp"

namespace mentorlens {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// L1 soft-thresholding of the gradient sum.
double thresholded(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

double leaf_objective(double g, double h, double alpha, double lambda) {
  const double denom = h + lambda;
  if (denom <= 0.0) return 0.0;
  const double t = thresholded(g, alpha);
  return t * t / denom;
}

double leaf_output(double g, double h, double alpha, double lambda) {
  const double denom = h + lambda;
  if (denom <= 0.0) return 0.0;
  return -thresholded(g, alpha) / denom;
}

struct SplitCand {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;  // original column index
  double threshold = 0.0;
  bool default_left = true;
  double left_g = 0.0, left_h = 0.0;
  double right_g = 0.0, right_h = 0.0;
  std::uint32_t left_count = 0, right_count = 0;
};

// A grown-but-unsplit node: its rows, per active feature, pre-sorted by value.
struct LeafState {
  int node_id = 0;
  int depth = 0;
  double g_sum = 0.0, h_sum = 0.0;
  std::uint32_t count = 0;
  std::vector<std::vector<std::uint32_t>> sorted_rows;   // per active feature
  std::vector<std::vector<std::uint32_t>> missing_rows;  // per active feature
  SplitCand best;
};

// Shared state for growing the trees of one training run.
struct TrainerContext {
  const FeatureMatrix* matrix = nullptr;
  const TrainConfig* config = nullptr;
  std::size_t n_rows = 0, n_cols = 0;
  std::vector<double> columns;  // column-major copy for cache-friendly scans
  // Global pre-sort, by (value, row); one list of present rows plus the
  // missing rows per feature. Built once per training run.
  std::vector<std::vector<std::uint32_t>> global_sorted;
  std::vector<std::vector<std::uint32_t>> global_missing;
  std::vector<double> gradients, hessians;
  std::vector<std::uint8_t> scratch_flag;  // per-row marks, reused

  double value(std::uint32_t row, int feature) const {
    return columns[static_cast<std::size_t>(feature) * n_rows + row];
  }
};

// Evaluates one candidate partition against the current best. Candidates
// arrive in feature-ascending, threshold-ascending, missing-left-first order,
// so a strict > keeps the canonical winner on exact gain ties.
void consider(const TrainerContext& ctx, const LeafState& leaf, int feature,
              double threshold, bool default_left, double left_g,
              double left_h, std::uint32_t left_count, SplitCand* best) {
  const double right_g = leaf.g_sum - left_g;
  const double right_h = leaf.h_sum - left_h;
  const std::uint32_t right_count = leaf.count - left_count;
  const TrainConfig& cfg = *ctx.config;
  if (left_count < static_cast<std::uint32_t>(cfg.min_child_samples) ||
      right_count < static_cast<std::uint32_t>(cfg.min_child_samples)) {
    return;
  }
  if (left_h < cfg.min_child_weight || right_h < cfg.min_child_weight) return;
  const double gain =
      leaf_objective(left_g, left_h, cfg.reg_alpha, cfg.reg_lambda) +
      leaf_objective(right_g, right_h, cfg.reg_alpha, cfg.reg_lambda) -
      leaf_objective(leaf.g_sum, leaf.h_sum, cfg.reg_alpha, cfg.reg_lambda);
  if (gain <= 0.0) return;
  if (best->valid && gain <= best->gain) return;
  *best = SplitCand{true,    gain,    feature,     threshold,
                    default_left, left_g, left_h, leaf.g_sum - left_g,
                    leaf.h_sum - left_h, left_count, right_count};
}

void find_best_split(const TrainerContext& ctx,
                     const std::vector<int>& active_features,
                     LeafState* leaf) {
  leaf->best = SplitCand{};
  for (std::size_t af = 0; af < active_features.size(); ++af) {
    const int f = active_features[af];
    const auto& present = leaf->sorted_rows[af];
    const auto& missing = leaf->missing_rows[af];
    if (present.size() < 2) continue;  // no boundary to split at

    double miss_g = 0.0, miss_h = 0.0;
    for (std::uint32_t row : missing) {
      miss_g += ctx.gradients[row];
      miss_h += ctx.hessians[row];
    }
    const auto miss_count = static_cast<std::uint32_t>(missing.size());

    double run_g = 0.0, run_h = 0.0;
    std::uint32_t run_count = 0;
    for (std::size_t i = 0; i + 1 < present.size(); ++i) {
      const std::uint32_t row = present[i];
      run_g += ctx.gradients[row];
      run_h += ctx.hessians[row];
      ++run_count;
      const double lo = ctx.value(row, f);
      const double hi = ctx.value(present[i + 1], f);
      if (!(lo < hi)) continue;
      // Midpoint, nudged down to `lo` if rounding lands on `hi`, so that the
      // (value <= threshold) routing reproduces the training partition.
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      consider(ctx, *leaf, f, threshold, /*default_left=*/true,
               run_g + miss_g, run_h + miss_h, run_count + miss_count,
               &leaf->best);
      if (miss_count > 0) {
        consider(ctx, *leaf, f, threshold, /*default_left=*/false, run_g,
                 run_h, run_count, &leaf->best);
      }
    }
  }
}

// Splits `leaf` along leaf->best, producing two child states with their row
// lists partitioned in place (stably, preserving the per-feature sort).
std::pair<LeafState, LeafState> apply_split(
    TrainerContext& ctx, const std::vector<int>& active_features,
    LeafState&& leaf, int left_id, int right_id) {
  const SplitCand& s = leaf.best;
  // Mark each of the node's rows with its side. Every per-feature list holds
  // the same row set, so marking via the split feature's lists covers all.
  const auto split_af = static_cast<std::size_t>(
      std::find(active_features.begin(), active_features.end(), s.feature) -
      active_features.begin());
  for (std::uint32_t row : leaf.sorted_rows[split_af]) {
    ctx.scratch_flag[row] =
        ctx.value(row, s.feature) <= s.threshold ? 1 : 0;
  }
  for (std::uint32_t row : leaf.missing_rows[split_af]) {
    ctx.scratch_flag[row] = s.default_left ? 1 : 0;
  }

  LeafState left, right;
  left.node_id = left_id;
  right.node_id = right_id;
  left.depth = right.depth = leaf.depth + 1;
  left.g_sum = s.left_g;
  left.h_sum = s.left_h;
  left.count = s.left_count;
  right.g_sum = s.right_g;
  right.h_sum = s.right_h;
  right.count = s.right_count;
  left.sorted_rows.resize(active_features.size());
  left.missing_rows.resize(active_features.size());
  right.sorted_rows.resize(active_features.size());
  right.missing_rows.resize(active_features.size());
  for (std::size_t af = 0; af < active_features.size(); ++af) {
    for (std::uint32_t row : leaf.sorted_rows[af]) {
      (ctx.scratch_flag[row] ? left : right).sorted_rows[af].push_back(row);
    }
    for (std::uint32_t row : leaf.missing_rows[af]) {
      (ctx.scratch_flag[row] ? left : right).missing_rows[af].push_back(row);
    }
    leaf.sorted_rows[af].clear();
    leaf.sorted_rows[af].shrink_to_fit();
    leaf.missing_rows[af].clear();
    leaf.missing_rows[af].shrink_to_fit();
  }
  return {std::move(left), std::move(right)};
}

RegressionTree build_tree(TrainerContext& ctx,
                          const std::vector<int>& active_features,
                          const std::vector<std::uint8_t>& in_sample,
                          double sample_g, double sample_h,
                          std::uint32_t sample_count) {
  const TrainConfig& cfg = *ctx.config;
  RegressionTree tree;
  tree.nodes.emplace_back();

  LeafState root;
  root.node_id = 0;
  root.depth = 0;
  root.g_sum = sample_g;
  root.h_sum = sample_h;
  root.count = sample_count;
  root.sorted_rows.resize(active_features.size());
  root.missing_rows.resize(active_features.size());
  for (std::size_t af = 0; af < active_features.size(); ++af) {
    const int f = active_features[af];
    auto& sorted = root.sorted_rows[af];
    for (std::uint32_t row : ctx.global_sorted[static_cast<std::size_t>(f)]) {
      if (in_sample[row]) sorted.push_back(row);
    }
    auto& missing = root.missing_rows[af];
    for (std::uint32_t row : ctx.global_missing[static_cast<std::size_t>(f)]) {
      if (in_sample[row]) missing.push_back(row);
    }
  }

  auto may_split = [&](const LeafState& leaf) {
    return cfg.max_depth == kUnlimitedDepth || leaf.depth < cfg.max_depth;
  };

  std::vector<LeafState> pending;
  if (may_split(root)) find_best_split(ctx, active_features, &root);
  pending.push_back(std::move(root));

  int leaf_count = 1;
  while (leaf_count < cfg.num_leaves) {
    // Best pending split: maximum gain, ties to the earliest-created node.
    std::size_t pick = pending.size();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!pending[i].best.valid) continue;
      if (pick == pending.size() ||
          pending[i].best.gain > pending[pick].best.gain ||
          (pending[i].best.gain == pending[pick].best.gain &&
           pending[i].node_id < pending[pick].node_id)) {
        pick = i;
      }
    }
    if (pick == pending.size()) break;

    LeafState leaf = std::move(pending[pick]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(leaf.node_id)];
    node.feature = leaf.best.feature;
    node.threshold = leaf.best.threshold;
    node.default_left = leaf.best.default_left;
    node.left = left_id;
    node.right = right_id;
    node.gain = leaf.best.gain;

    auto [left, right] =
        apply_split(ctx, active_features, std::move(leaf), left_id, right_id);
    if (may_split(left)) find_best_split(ctx, active_features, &left);
    if (may_split(right)) find_best_split(ctx, active_features, &right);
    pending.push_back(std::move(left));
    pending.push_back(std::move(right));
    ++leaf_count;
  }

  for (const LeafState& leaf : pending) {
    tree.nodes[static_cast<std::size_t>(leaf.node_id)].value =
        leaf_output(leaf.g_sum, leaf.h_sum, cfg.reg_alpha, cfg.reg_lambda);
  }
  return tree;
}

}  // namespace

void TrainConfig::validate() const {
  // The zero values of learning_rate and n_rounds are degenerate but legal:
  // both reduce the model to its base score.
  if (learning_rate < 0.0) throw UsageError("learning_rate must be >= 0");
  if (num_leaves < 2) throw UsageError("num_leaves must be >= 2");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    throw UsageError("colsample_bytree must lie in (0, 1]");
  }
  if (!(subsample > 0.0 && subsample <= 1.0)) {
    throw UsageError("subsample must lie in (0, 1]");
  }
  if (min_child_samples < 1) throw UsageError("min_child_samples must be >= 1");
  if (min_child_weight < 0.0) throw UsageError("min_child_weight must be >= 0");
  if (reg_alpha < 0.0) throw UsageError("reg_alpha must be >= 0");
  if (reg_lambda < 0.0) throw UsageError("reg_lambda must be >= 0");
  if (max_depth != kUnlimitedDepth && max_depth < 1) {
    throw UsageError("max_depth must be >= 1 or unlimited (-1)");
  }
  if (n_rounds < 0) throw UsageError("n_rounds must be >= 0");
}

double RegressionTree::predict_row(std::span<const double> row) const {
  int idx = 0;
  while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    const double v = row[static_cast<std::size_t>(node.feature)];
    if (is_missing(v)) {
      idx = node.default_left ? node.left : node.right;
    } else {
      idx = v <= node.threshold ? node.left : node.right;
    }
  }
  return nodes[static_cast<std::size_t>(idx)].value;
}

double GbdtModel::raw_score(std::span<const double> row) const {
  double sum = 0.0;
  for (const RegressionTree& tree : trees) sum += tree.predict_row(row);
  return base_score + learning_rate * sum;
}

double GbdtModel::predict_row(std::span<const double> row) const {
  return sigmoid(raw_score(row));
}

std::vector<double> GbdtModel::predict(const FeatureMatrix& matrix) const {
  if (matrix.schema != schema) {
    throw DataError("feature schema does not match model schema");
  }
  std::vector<double> out(matrix.n_rows());
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    out[r] = predict_row(matrix.row(r));
  }
  return out;
}

GbdtModel train_gbdt(const FeatureMatrix& matrix, std::span<const int> labels,
                     const TrainConfig& config) {
  config.validate();
  const std::size_t n = matrix.n_rows();
  const std::size_t c = matrix.n_cols();
  if (n < 2) throw DataError("training needs at least 2 rows");
  if (labels.size() != n) throw DataError("label count != row count");
  long positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    positives += y;
  }
  if (positives == 0 || positives == static_cast<long>(n)) {
    throw DataError("training labels contain a single class");
  }

  TrainerContext ctx;
  ctx.matrix = &matrix;
  ctx.config = &config;
  ctx.n_rows = n;
  ctx.n_cols = c;
  ctx.columns.resize(n * c);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t f = 0; f < c; ++f) {
      ctx.columns[f * n + r] = matrix.values[r * c + f];
    }
  }
  ctx.global_sorted.resize(c);
  ctx.global_missing.resize(c);
  for (std::size_t f = 0; f < c; ++f) {
    auto& sorted = ctx.global_sorted[f];
    for (std::uint32_t row = 0; row < n; ++row) {
      if (is_missing(ctx.columns[f * n + row])) {
        ctx.global_missing[f].push_back(row);
      } else {
        sorted.push_back(row);
      }
    }
    std::sort(sorted.begin(), sorted.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                const double va = ctx.columns[f * n + a];
                const double vb = ctx.columns[f * n + b];
                return va < vb || (va == vb && a < b);
              });
  }
  ctx.gradients.resize(n);
  ctx.hessians.resize(n);
  ctx.scratch_flag.assign(n, 0);

  GbdtModel model;
  model.schema = matrix.schema;
  model.learning_rate = config.learning_rate;
  model.base_score = std::log(static_cast<double>(positives) /
                              static_cast<double>(static_cast<long>(n) -
                                                  positives));

  std::vector<double> raw(n, model.base_score);
  std::vector<int> feature_pool(static_cast<std::size_t>(c));
  std::iota(feature_pool.begin(), feature_pool.end(), 0);
  std::vector<std::uint32_t> row_pool(n);
  std::iota(row_pool.begin(), row_pool.end(), 0u);
  std::vector<std::uint8_t> in_sample(n, 1);

  for (int round = 0; round < config.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(raw[i]);
      ctx.gradients[i] = p - static_cast<double>(labels[i]);
      ctx.hessians[i] = p * (1.0 - p);
    }

    Rng rng(Rng::mix(config.seed, static_cast<std::uint64_t>(round)));
    // Features first, rows second: the draw order is part of the format.
    std::vector<int> active = feature_pool;
    const auto n_feats = static_cast<std::size_t>(std::clamp<long>(
        std::lround(config.colsample_bytree * static_cast<double>(c)), 1,
        static_cast<long>(c)));
    if (n_feats < c) {
      rng.shuffle(active);
      active.resize(n_feats);
      std::sort(active.begin(), active.end());
    }
    const auto n_sampled = static_cast<std::size_t>(std::clamp<long>(
        std::lround(config.subsample * static_cast<double>(n)), 1,
        static_cast<long>(n)));
    double sample_g = 0.0, sample_h = 0.0;
    if (n_sampled < n) {
      std::vector<std::uint32_t> rows = row_pool;
      rng.shuffle(rows);
      std::fill(in_sample.begin(), in_sample.end(), 0);
      for (std::size_t i = 0; i < n_sampled; ++i) in_sample[rows[i]] = 1;
    } else {
      std::fill(in_sample.begin(), in_sample.end(), 1);
    }
    std::uint32_t sample_count = 0;
    for (std::uint32_t row = 0; row < n; ++row) {
      if (!in_sample[row]) continue;
      sample_g += ctx.gradients[row];
      sample_h += ctx.hessians[row];
      ++sample_count;
    }

    RegressionTree tree =
        build_tree(ctx, active, in_sample, sample_g, sample_h, sample_count);
    for (std::size_t r = 0; r < n; ++r) {
      raw[r] += config.learning_rate * tree.predict_row(matrix.row(r));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("score count != label count");
  }
  long n_pos = 0, n_neg = 0;
  for (int y : labels) {
    if (y == 1) {
      ++n_pos;
    } else if (y == 0) {
      ++n_neg;
    } else {
      throw DataError("labels must be 0 or 1");
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DataError("ROC AUC needs both classes");
  }
  std::vector<std::uint32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] < scores[b];
  });
  // Average ranks across tie groups (1-based), then the Mann-Whitney sum.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           scores[order[j + 1]] == scores[order[i]]) {
      ++j;
    }
    const double avg_rank = static_cast<double>(i + 1 + j + 1) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) /
         (np * static_cast<double>(n_neg));
}

double logloss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw DataError("logloss of empty input");
  if (scores.size() != labels.size()) {
    throw DataError("score count != label count");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(scores[i], 1e-15, 1.0 - 1e-15);
    sum += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  return sum / static_cast<double>(scores.size());
}

SearchSpace SearchSpace::defaults() {
  SearchSpace s;
  s.learning_rates = {0.1, 0.05, 0.01, 0.005, 0.001};
  s.num_leaves = {4, 8, 16, 32, 64, 128};
  s.colsample_bytree = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  s.subsample = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  s.min_child_samples = {1, 2, 4, 8, 16, 32, 64, 128};
  s.min_child_weights = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  s.reg_grid = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  s.max_depths = {2, 4, 8, 16};
  s.n_iterations = 50;
  s.n_rounds = 500;
  return s;
}

void SearchSpace::validate() const {
  if (learning_rates.empty() || num_leaves.empty() ||
      colsample_bytree.empty() || subsample.empty() ||
      min_child_samples.empty() || min_child_weights.empty() ||
      reg_grid.empty() || max_depths.empty()) {
    throw UsageError("search space has an empty dimension");
  }
  if (n_iterations < 1) throw UsageError("search needs >= 1 iteration");
  if (n_rounds < 0) throw UsageError("n_rounds must be >= 0");
}

TrainConfig SearchSpace::sample(Rng& rng) const {
  TrainConfig c;
  c.learning_rate = rng.pick(learning_rates);
  c.num_leaves = rng.pick(num_leaves);
  c.colsample_bytree = rng.pick(colsample_bytree);
  c.subsample = rng.pick(subsample);
  c.min_child_samples = rng.pick(min_child_samples);
  c.min_child_weight = rng.pick(min_child_weights);
  c.reg_alpha = rng.coin() ? 0.0 : rng.pick(reg_grid);
  c.reg_lambda = rng.coin() ? 0.0 : rng.pick(reg_grid);
  c.max_depth = rng.coin() ? kUnlimitedDepth : rng.pick(max_depths);
  c.n_rounds = n_rounds;
  c.seed = rng.next_u64();
  return c;
}

SearchResult random_search(const SearchSpace& space,
                           const FeatureMatrix& train_matrix,
                           std::span<const int> train_labels,
                           const FeatureMatrix& val_matrix,
                           std::span<const int> val_labels, std::uint64_t seed,
                           int threads) {
  space.validate();
  SearchResult result;
  result.trials.resize(static_cast<std::size_t>(space.n_iterations));
  parallel_for(result.trials.size(), threads, [&](std::size_t t) {
    TrialResult& trial = result.trials[t];
    trial.trial = static_cast<int>(t);
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(t)));
    trial.config = space.sample(rng);
    try {
      const GbdtModel model =
          train_gbdt(train_matrix, train_labels, trial.config);
      trial.val_auc = roc_auc(model.predict(val_matrix), val_labels);
      trial.ok = true;
      trial.status = "ok";
    } catch (const std::exception& e) {
      trial.ok = false;
      trial.status = std::string("failed: ") + e.what();
    }
  });

  for (const TrialResult& trial : result.trials) {
    if (!trial.ok) continue;
    if (result.best_trial < 0 || trial.val_auc > result.best_val_auc) {
      result.best_trial = trial.trial;
      result.best_val_auc = trial.val_auc;
      result.best_config = trial.config;
    }
  }
  if (result.best_trial < 0) {
    std::string first = result.trials.empty() ? "no trials" :
                                                result.trials.front().status;
    throw DataError("all search trials failed; first: " + first);
  }
  // Training is deterministic, so refitting the winning config reproduces the
  // trial's model without having to keep 50 models alive during the search.
  result.best_model =
      train_gbdt(train_matrix, train_labels, result.best_config);
  return result;
}

std::map<std::string, double> feature_importance(const GbdtModel& model) {
  std::map<std::string, double> gains;
  for (const std::string& name : model.schema) gains[name] = 0.0;
  for (const RegressionTree& tree : model.trees) {
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) continue;
      gains[model.schema[static_cast<std::size_t>(node.feature)]] += node.gain;
    }
  }
  return gains;
}

namespace {
constexpr const char* kModelFormat = "mentorlens-gbdt";
constexpr int kModelVersion = 1;
}  // namespace

void save_model(const std::string& path, const GbdtModel& model) {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["schema"] = model.schema;
  j["base_score"] = model.base_score;
  j["learning_rate"] = model.learning_rate;
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const RegressionTree& tree : model.trees) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const TreeNode& node : tree.nodes) {
      nlohmann::ordered_json n;
      if (node.is_leaf()) {
        n["value"] = node.value;
      } else {
        n["feature"] = node.feature;
        n["threshold"] = node.threshold;
        n["default_left"] = node.default_left;
        n["left"] = node.left;
        n["right"] = node.right;
        n["gain"] = node.gain;
      }
      nodes.push_back(std::move(n));
    }
    nlohmann::ordered_json t;
    t["nodes"] = std::move(nodes);
    trees.push_back(std::move(t));
  }
  j["trees"] = std::move(trees);
  AtomicFile file(path);
  file.stream() << j.dump(1) << '\n';
  file.commit();
}

GbdtModel load_model(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError(path + ": not a model file");
  }
  if (!j.contains("format") || j["format"] != kModelFormat) {
    throw DataError(path + ": unrecognized model format");
  }
  if (!j.contains("version") || j["version"] != kModelVersion) {
    throw DataError(path + ": unsupported model version");
  }
  try {
    GbdtModel model;
    model.schema = j.at("schema").get<std::vector<std::string>>();
    model.base_score = j.at("base_score").get<double>();
    model.learning_rate = j.at("learning_rate").get<double>();
    for (const auto& t : j.at("trees")) {
      RegressionTree tree;
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        if (n.contains("feature")) {
          node.feature = n.at("feature").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.default_left = n.at("default_left").get<bool>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
          node.gain = n.at("gain").get<double>();
          if (node.feature < 0 ||
              node.feature >= static_cast<int>(model.schema.size())) {
            throw DataError(path + ": node feature out of range");
          }
        } else {
          node.value = n.at("value").get<double>();
        }
        tree.nodes.push_back(node);
      }
      const int n_nodes = static_cast<int>(tree.nodes.size());
      for (const TreeNode& node : tree.nodes) {
        if (!node.is_leaf() &&
            (node.left < 0 || node.left >= n_nodes || node.right < 0 ||
             node.right >= n_nodes)) {
          throw DataError(path + ": node child out of range");
        }
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": malformed model file: " + e.what());
  }
}

void write_trial_log_csv(const std::string& path,
                         std::span<const TrialResult> trials) {
  AtomicFile file(path);
  file.stream() << "trial,learning_rate,num_leaves,colsample_bytree,subsample,"
                   "min_child_samples,min_child_weight,reg_alpha,reg_lambda,"
                   "max_depth,n_rounds,val_auc,status\n";
  for (const TrialResult& t : trials) {
    const TrainConfig& c = t.config;
    file.stream() << t.trial << ',' << format_double(c.learning_rate) << ','
                  << c.num_leaves << ',' << format_double(c.colsample_bytree)
                  << ',' << format_double(c.subsample) << ','
                  << c.min_child_samples << ','
                  << format_double(c.min_child_weight) << ','
                  << format_double(c.reg_alpha) << ','
                  << format_double(c.reg_lambda) << ',' << c.max_depth << ','
                  << c.n_rounds << ','
                  << (t.ok ? format_double(t.val_auc) : std::string()) << ','
                  << csv_escape(t.status) << '\n';
  }
  file.commit();
}

}  // namespace mentorlens
