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

#include "mentorlens/negbin_glm.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <Eigen/Dense>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"
#include "mentorlens/fileio.hpp"

namespace mentorlens {
namespace {

constexpr double kEtaClamp = 30.0;  // exp(30) ~ 1e13, ample for h-indices
constexpr double kCoefTol = 1e-8;
constexpr double kGradTol = 1e-8;
constexpr int kMaxIterations = 100;

double clamped_mu(double eta) {
  return std::exp(std::clamp(eta, -kEtaClamp, kEtaClamp));
}

}  // namespace

double percentile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("percentile of empty input");
  if (!(q >= 0.0 && q <= 100.0)) {
    throw UsageError("percentile q must lie in [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double idx =
      q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(idx);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = idx - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::pair<std::vector<GlmRow>, OutlierReport> remove_outliers(
    std::span<const GlmRow> rows) {
  if (rows.empty()) throw DataError("outlier removal on empty input");
  OutlierReport report;
  report.rows_in = static_cast<long>(rows.size());

  // 99th percentile per filtered covariate, computed over present values.
  struct Covariate {
    const char* name;
    std::function<std::optional<double>(const GlmRow&)> get;
    double p99 = 0.0;
    bool any = false;
  };
  std::vector<Covariate> covs;
  covs.push_back({"paper_count",
                  [](const GlmRow& r) -> std::optional<double> {
                    if (!r.paper_count) return std::nullopt;
                    return static_cast<double>(*r.paper_count);
                  }});
  covs.push_back({"citation_count",
                  [](const GlmRow& r) -> std::optional<double> {
                    if (!r.citation_count) return std::nullopt;
                    return static_cast<double>(*r.citation_count);
                  }});
  covs.push_back({"menteeship_sum", [](const GlmRow& r) -> std::optional<double> {
                    return r.menteeship_sum;
                  }});
  covs.push_back({"mentorship_sum", [](const GlmRow& r) -> std::optional<double> {
                    return r.mentorship_sum;
                  }});
  for (auto& cov : covs) {
    std::vector<double> present;
    for (const GlmRow& r : rows) {
      if (const auto v = cov.get(r)) present.push_back(*v);
    }
    if (!present.empty()) {
      cov.p99 = percentile_linear(std::move(present), 99.0);
      cov.any = true;
    }
    report.exceeded[cov.name] = 0;
  }

  std::vector<GlmRow> kept;
  for (const GlmRow& r : rows) {
    bool drop = false;
    for (auto& cov : covs) {
      if (!cov.any) continue;
      const auto v = cov.get(r);
      if (v && *v > cov.p99) {  // exclusive: equality survives
        ++report.exceeded[cov.name];
        drop = true;
      }
    }
    if (drop) {
      ++report.rows_dropped;
    } else {
      kept.push_back(r);
    }
  }
  if (kept.empty()) throw DataError("outlier removal dropped every row");
  return {std::move(kept), std::move(report)};
}

std::pair<QuintileBinner, std::vector<int>> quintile_bin(
    std::span<const double> values) {
  if (values.empty()) throw DataError("quintile binning of empty input");
  std::vector<double> copy(values.begin(), values.end());
  QuintileBinner binner;
  binner.cuts[0] = percentile_linear(copy, 20.0);
  binner.cuts[1] = percentile_linear(copy, 40.0);
  binner.cuts[2] = percentile_linear(copy, 60.0);
  binner.cuts[3] = percentile_linear(copy, 80.0);
  std::vector<int> bins;
  bins.reserve(values.size());
  for (double v : values) bins.push_back(binner.bin(v));
  return {binner, std::move(bins)};
}

GlmDesign build_design(std::span<const GlmRow> rows) {
  GlmDesign design;

  std::vector<const GlmRow*> fitted;
  for (const GlmRow& r : rows) {
    if (!r.h_index) {
      ++design.skipped_missing_response;
      continue;
    }
    if (!r.paper_count || !r.citation_count) {
      ++design.skipped_missing_covariates;
      continue;
    }
    fitted.push_back(&r);
  }
  if (fitted.empty()) throw DataError("no usable rows for the design");

  // "unknown" is the reference level; when every fitted row carries a real
  // label the alphabetically first one serves instead, keeping the dummies
  // independent of the intercept.
  std::set<std::string> fos_labels;
  bool any_unknown = false;
  for (const GlmRow* r : fitted) {
    if (r->field_of_study == "unknown") {
      any_unknown = true;
    } else {
      fos_labels.insert(r->field_of_study);
    }
  }
  if (!any_unknown && !fos_labels.empty()) {
    fos_labels.erase(fos_labels.begin());
  }

  // The six binned covariates, in the order they appear in the results table.
  struct Binned {
    const char* name;
    std::function<double(const GlmRow&)> get;
    std::vector<int> bins;
  };
  std::vector<Binned> binned;
  binned.push_back({"paper_count", [](const GlmRow& r) {
                      return static_cast<double>(*r.paper_count);
                    }});
  binned.push_back({"citation_count", [](const GlmRow& r) {
                      return static_cast<double>(*r.citation_count);
                    }});
  binned.push_back(
      {"menteeship_sum", [](const GlmRow& r) { return r.menteeship_sum; }});
  binned.push_back(
      {"menteeship_mean", [](const GlmRow& r) { return r.menteeship_mean; }});
  binned.push_back(
      {"mentorship_sum", [](const GlmRow& r) { return r.mentorship_sum; }});
  binned.push_back(
      {"mentorship_mean", [](const GlmRow& r) { return r.mentorship_mean; }});
  for (auto& b : binned) {
    std::vector<double> vals;
    vals.reserve(fitted.size());
    for (const GlmRow* r : fitted) vals.push_back(b.get(*r));
    b.bins = quintile_bin(vals).second;
  }

  std::vector<std::string> names;
  names.emplace_back("intercept");
  for (const std::string& label : fos_labels) names.push_back("fos_" + label);
  for (const auto& b : binned) {
    for (int q = 2; q <= 5; ++q) {
      names.push_back(std::string(b.name) + "_q" + std::to_string(q));
    }
  }

  const std::size_t n = fitted.size();
  const std::size_t p = names.size();
  std::vector<double> full(n * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const GlmRow& r = *fitted[i];
    double* row = full.data() + i * p;
    std::size_t col = 0;
    row[col++] = 1.0;
    for (const std::string& label : fos_labels) {
      row[col++] = r.field_of_study == label ? 1.0 : 0.0;
    }
    for (const auto& b : binned) {
      const int bin = b.bins[i];
      for (int q = 2; q <= 5; ++q) row[col++] = bin == q ? 1.0 : 0.0;
    }
  }

  // Degenerate quintiles routinely make indicator columns redundant: a column
  // that never fires, or indicator groups of a sum and its mean that both
  // collapse to the same "is non-zero" partition. Walk the columns left to
  // right and keep only those outside the span of the ones already kept, so
  // the returned design always has full column rank.
  std::vector<bool> keep(p, false);
  Eigen::MatrixXd kept(static_cast<Eigen::Index>(n), 0);
  for (std::size_t c = 0; c < p; ++c) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      v[static_cast<Eigen::Index>(i)] = full[i * p + c];
    }
    bool dependent = v.norm() == 0.0;
    if (!dependent && kept.cols() > 0) {
      const Eigen::VectorXd residual =
          v - kept * kept.colPivHouseholderQr().solve(v);
      dependent = residual.norm() <= 1e-8 * std::max(1.0, v.norm());
    }
    if (dependent) {
      design.dropped_columns.push_back(names[c]);
      continue;
    }
    keep[c] = true;
    kept.conservativeResize(Eigen::NoChange, kept.cols() + 1);
    kept.col(kept.cols() - 1) = v;
  }
  for (std::size_t c = 0; c < p; ++c) {
    if (keep[c]) design.column_names.push_back(names[c]);
  }
  design.values.reserve(n * design.column_names.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p; ++c) {
      if (keep[c]) design.values.push_back(full[i * p + c]);
    }
  }
  design.response.reserve(n);
  for (const GlmRow* r : fitted) design.response.push_back(*r->h_index);
  return design;
}

namespace {

Eigen::MatrixXd to_eigen(const GlmDesign& design) {
  const auto n = static_cast<Eigen::Index>(design.n_rows());
  const auto p = static_cast<Eigen::Index>(design.n_cols());
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = design.values[static_cast<std::size_t>(i) *
                                  static_cast<std::size_t>(p) +
                              static_cast<std::size_t>(j)];
    }
  }
  return x;
}

}  // namespace

double nb2_loglik(const GlmDesign& design, std::span<const double> beta,
                  double alpha) {
  const std::size_t n = design.n_rows();
  const std::size_t p = design.n_cols();
  if (beta.size() != p) throw Error("coefficient count != design columns");
  const double inv_alpha = 1.0 / alpha;
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      eta += design.values[i * p + j] * beta[j];
    }
    const double mu = clamped_mu(eta);
    const double y = static_cast<double>(design.response[i]);
    ll += std::lgamma(y + inv_alpha) - std::lgamma(inv_alpha) -
          std::lgamma(y + 1.0) + y * std::log(alpha * mu / (1.0 + alpha * mu)) -
          inv_alpha * std::log1p(alpha * mu);
  }
  return ll;
}

std::vector<double> nb2_gradient(const GlmDesign& design,
                                 std::span<const double> beta, double alpha) {
  const std::size_t n = design.n_rows();
  const std::size_t p = design.n_cols();
  if (beta.size() != p) throw Error("coefficient count != design columns");
  std::vector<double> grad(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      eta += design.values[i * p + j] * beta[j];
    }
    const double mu = clamped_mu(eta);
    const double y = static_cast<double>(design.response[i]);
    const double common = (y - mu) / (1.0 + alpha * mu);
    for (std::size_t j = 0; j < p; ++j) {
      grad[j] += design.values[i * p + j] * common;
    }
  }
  return grad;
}

GlmResult fit_negbin_glm(const GlmDesign& design, double alpha) {
  if (!(alpha > 0.0)) throw UsageError("dispersion alpha must be > 0");
  const std::size_t n = design.n_rows();
  const std::size_t p = design.n_cols();
  if (n == 0 || p == 0) throw DataError("empty design");
  if (n < p) throw DataError("fewer rows than design columns");
  double y_sum = 0.0;
  for (long y : design.response) {
    if (y < 0) throw DataError("response must be nonnegative");
    y_sum += static_cast<double>(y);
  }

  const Eigen::MatrixXd x = to_eigen(design);
  const auto ep = static_cast<Eigen::Index>(p);

  // Rank check up front so collinear encodings fail loudly with names.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < ep) {
    const auto perm = qr.colsPermutation().indices();
    std::string dependent;
    for (Eigen::Index j = qr.rank(); j < ep; ++j) {
      if (!dependent.empty()) dependent += ", ";
      dependent += design.column_names[static_cast<std::size_t>(perm[j])];
    }
    throw DataError("design is rank deficient; dependent columns: " +
                    dependent);
  }

  Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    yv(static_cast<Eigen::Index>(i)) = static_cast<double>(design.response[i]);
  }

  // Start from the intercept-only fit: ln(mean response).
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(ep);
  const double mean_y = y_sum / static_cast<double>(n);
  beta(0) = std::log(std::max(mean_y, 1e-8));

  GlmResult result;
  result.alpha = alpha;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    result.iterations = iter + 1;
    Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      const double mu = clamped_mu(eta(i));
      w(i) = mu / (1.0 + alpha * mu);
      z(i) = eta(i) + (yv(i) - mu) / mu;
    }
    const Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
    const Eigen::VectorXd xtwz = x.transpose() * (w.asDiagonal() * z);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtwx);
    if (ldlt.info() != Eigen::Success) {
      result.converged = false;
      break;
    }
    const Eigen::VectorXd next = ldlt.solve(xtwz);
    const double delta = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    if (delta < kCoefTol) {
      result.converged = true;
      // Polish until the score equations are satisfied tightly, or the
      // iteration budget runs out; the delta criterion already passed.
      std::vector<double> beta_std(beta.data(), beta.data() + ep);
      const auto grad = nb2_gradient(design, beta_std, alpha);
      double grad_inf = 0.0;
      for (double gj : grad) grad_inf = std::max(grad_inf, std::abs(gj));
      if (grad_inf < kGradTol) break;
    }
  }

  // Covariance from the weighted normal equations at the final coefficients.
  Eigen::MatrixXd cov;
  {
    Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      const double mu = clamped_mu(eta(i));
      w(i) = mu / (1.0 + alpha * mu);
    }
    const Eigen::MatrixXd xtwx = x.transpose() * w.asDiagonal() * x;
    cov = xtwx.inverse();
  }

  result.terms.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    GlmTerm& term = result.terms[j];
    const auto ej = static_cast<Eigen::Index>(j);
    term.name = design.column_names[j];
    term.coef = beta(ej);
    term.std_err = std::sqrt(std::max(cov(ej, ej), 0.0));
    term.z = term.std_err > 0.0 ? term.coef / term.std_err : 0.0;
    term.p = std::erfc(std::abs(term.z) / std::sqrt(2.0));
    term.ci_lo = term.coef - 1.96 * term.std_err;
    term.ci_hi = term.coef + 1.96 * term.std_err;
  }
  return result;
}

void write_glm_results_csv(const std::string& path, const GlmResult& result) {
  AtomicFile file(path);
  file.stream() << "covariate,coef,std_err,z,p,ci_lo,ci_hi\n";
  for (const GlmTerm& t : result.terms) {
    file.stream() << csv_escape(t.name) << ',' << format_double(t.coef) << ','
                  << format_double(t.std_err) << ',' << format_double(t.z)
                  << ',' << format_double(t.p) << ',' << format_double(t.ci_lo)
                  << ',' << format_double(t.ci_hi) << '\n';
  }
  file.commit();
}

}  // namespace mentorlens
