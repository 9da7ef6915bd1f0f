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

#ifndef MENTORLENS_TOOLS_PIPELINE_CONFIG_HPP
#define MENTORLENS_TOOLS_PIPELINE_CONFIG_HPP

#include <cstdint>
#include <string>

namespace mentorlens {

// Shared settings for every subcommand. Values come from built-in defaults,
// then a flat key=value config file (--config or $MENTORLENS_CONFIG), then
// command-line flags, each layer overriding the previous one.
struct PipelineConfig {
  std::string papers;
  std::string authors;
  std::string gold;
  std::string workdir = "mentorlens_work";

  int k = 2;                  // minimum co-publications for a candidate
  double percent = 80.0;      // dense-period coverage P
  int search_iterations = 50;
  int n_rounds = 200;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
  double glm_alpha = 1.0;
  int threads = 0;            // 0 = all hardware threads
  long max_negatives_per_mentee = 0;  // 0 = keep every negative

  // threads, with 0 resolved to the hardware thread count (at least 1).
  int resolved_threads() const;

  void validate() const;  // throws UsageError

  // Path inside the working directory.
  std::string workpath(const std::string& name) const;
};

// Parses `key = value` lines ('#' comments, blank lines allowed) over the
// defaults. Unknown keys are errors.
PipelineConfig load_pipeline_config(const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_TOOLS_PIPELINE_CONFIG_HPP
