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

#ifndef MENTORLENS_MISSING_HPP
#define MENTORLENS_MISSING_HPP

#include <cmath>
#include <limits>

namespace mentorlens {

// Explicit absent-value marker for feature slots (undefined ratios and the
// like). Trees route missing values through a learned default direction;
// CSV serialization writes an empty cell.
inline double missing_value() {
  return std::numeric_limits<double>::quiet_NaN();
}

inline bool is_missing(double v) { return std::isnan(v); }

// Guarded division: zero denominator yields the missing marker instead of a
// fabricated magnitude.
inline double ratio_or_missing(double num, double den) {
  return den == 0.0 ? missing_value() : num / den;
}

}  // namespace mentorlens

#endif  // MENTORLENS_MISSING_HPP
