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

#ifndef MENTORLENS_NEGBIN_GLM_HPP
#define MENTORLENS_NEGBIN_GLM_HPP

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mentorlens {

// One author's covariates for the h-index regression.
struct GlmRow {
  std::string author_id;
  std::optional<long> h_index;  // response
  std::optional<long> paper_count;
  std::optional<long> citation_count;
  std::string field_of_study = "unknown";
  double menteeship_sum = 0.0;
  double menteeship_mean = 0.0;
  double mentorship_sum = 0.0;
  double mentorship_mean = 0.0;
};

struct OutlierReport {
  long rows_in = 0;
  long rows_dropped = 0;
  std::map<std::string, long> exceeded;  // covariate -> rows above its p99
};

// Drops rows strictly above the 99th percentile of paper count, citation
// count, menteeship sum, or mentorship sum (the mean covariates are never
// filtered). Errors if nothing survives.
std::pair<std::vector<GlmRow>, OutlierReport> remove_outliers(
    std::span<const GlmRow> rows);

// Linear-interpolation percentile of q in [0, 100]; sorts a copy.
double percentile_linear(std::vector<double> values, double q);

struct QuintileBinner {
  std::array<double, 4> cuts{};  // 20/40/60/80th percentiles

  // Smallest bin b in 1..4 with v <= cuts[b-1], else 5.
  int bin(double v) const {
    for (int b = 0; b < 4; ++b) {
      if (v <= cuts[static_cast<std::size_t>(b)]) return b + 1;
    }
    return 5;
  }
};

std::pair<QuintileBinner, std::vector<int>> quintile_bin(
    std::span<const double> values);

struct GlmDesign {
  std::vector<std::string> column_names;  // "intercept" first
  std::vector<double> values;             // row-major
  std::vector<long> response;
  long skipped_missing_response = 0;
  long skipped_missing_covariates = 0;
  // All-zero indicators and exact duplicates of earlier columns, removed to
  // keep the design full rank.
  std::vector<std::string> dropped_columns;

  std::size_t n_cols() const { return column_names.size(); }
  std::size_t n_rows() const {
    return column_names.empty() ? 0 : values.size() / column_names.size();
  }
};

// Intercept, one-hot field of study ("unknown" is the reference; when absent
// the alphabetically first label serves instead), then quintile-2..5
// indicators for paper count, citation count, menteeship sum, menteeship
// mean, mentorship sum, mentorship mean. Quintiles are computed on the rows
// actually fitted; all-zero and duplicated indicator columns are dropped and
// reported.
GlmDesign build_design(std::span<const GlmRow> rows);

struct GlmTerm {
  std::string name;
  double coef = 0.0;
  double std_err = 0.0;
  double z = 0.0;
  double p = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct GlmResult {
  std::vector<GlmTerm> terms;  // aligned to design columns
  double alpha = 1.0;
  bool converged = false;
  int iterations = 0;
};

// NB2 regression with log link, fixed dispersion alpha, fit by iteratively
// reweighted least squares. Errors on rank-deficient designs (naming the
// dependent columns) and invalid responses.
GlmResult fit_negbin_glm(const GlmDesign& design, double alpha);

// NB2 log-likelihood and its coefficient gradient, exposed for validation.
double nb2_loglik(const GlmDesign& design, std::span<const double> beta,
                  double alpha);
std::vector<double> nb2_gradient(const GlmDesign& design,
                                 std::span<const double> beta, double alpha);

// A log-link coefficient maps to a multiplicative effect on the response.
inline double interpret_multiplicative(double coef) { return std::exp(coef); }

void write_glm_results_csv(const std::string& path, const GlmResult& result);

}  // namespace mentorlens

#endif  // MENTORLENS_NEGBIN_GLM_HPP
