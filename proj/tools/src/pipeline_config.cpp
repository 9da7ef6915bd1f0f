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

#include "pipeline_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <thread>

#include "mentorlens/csv.hpp"
#include "mentorlens/errors.hpp"

namespace mentorlens {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(std::string_view s, const std::string& where) {
  const long long v = parse_long(s, where);
  if (v < 0) throw UsageError(where + ": value must be non-negative");
  return static_cast<std::uint64_t>(v);
}

void apply_key(PipelineConfig& cfg, const std::string& key,
               const std::string& value, const std::string& where) {
  if (key == "papers") {
    cfg.papers = value;
  } else if (key == "authors") {
    cfg.authors = value;
  } else if (key == "gold") {
    cfg.gold = value;
  } else if (key == "workdir") {
    cfg.workdir = value;
  } else if (key == "k") {
    cfg.k = static_cast<int>(parse_long(value, where));
  } else if (key == "percent") {
    cfg.percent = parse_double(value, where);
  } else if (key == "search_iterations") {
    cfg.search_iterations = static_cast<int>(parse_long(value, where));
  } else if (key == "n_rounds") {
    cfg.n_rounds = static_cast<int>(parse_long(value, where));
  } else if (key == "val_fraction") {
    cfg.val_fraction = parse_double(value, where);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, where);
  } else if (key == "glm_alpha") {
    cfg.glm_alpha = parse_double(value, where);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_long(value, where));
  } else if (key == "max_negatives_per_mentee") {
    cfg.max_negatives_per_mentee = parse_long(value, where);
  } else {
    throw UsageError(where + ": unknown config key '" + key + "'");
  }
}

}  // namespace

int PipelineConfig::resolved_threads() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void PipelineConfig::validate() const {
  if (k < 1) throw UsageError("k must be >= 1, got " + std::to_string(k));
  if (!(percent > 60.0 && percent <= 100.0)) {
    throw UsageError("percent must lie in (60, 100], got " +
                     format_double(percent));
  }
  if (search_iterations < 1) {
    throw UsageError("search_iterations must be >= 1");
  }
  if (n_rounds < 1) throw UsageError("n_rounds must be >= 1");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw UsageError("val_fraction must lie in (0, 1), got " +
                     format_double(val_fraction));
  }
  if (!(glm_alpha > 0.0)) throw UsageError("glm_alpha must be > 0");
  if (threads < 0) throw UsageError("threads must be >= 0 (0 = all cores)");
  if (max_negatives_per_mentee < 0) {
    throw UsageError("max_negatives_per_mentee must be >= 0 (0 = no cap)");
  }
}

std::string PipelineConfig::workpath(const std::string& name) const {
  if (workdir.empty()) return name;
  return workdir + "/" + name;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  PipelineConfig cfg;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string where = path + ":" + std::to_string(line_number);
    std::string text = line;
    if (const auto hash = text.find('#'); hash != std::string::npos) {
      text.resize(hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw UsageError(where + ": expected `key = value`");
    }
    apply_key(cfg, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), where);
  }
  return cfg;
}

}  // namespace mentorlens
