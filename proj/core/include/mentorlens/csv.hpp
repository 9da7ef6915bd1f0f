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

#ifndef MENTORLENS_CSV_HPP
#define MENTORLENS_CSV_HPP

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mentorlens {

// Splits one CSV line. Handles double-quoted fields with embedded commas and
// doubled quotes; does not handle embedded newlines (none of our formats
// produce them).
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field only when needed.
std::string csv_escape(std::string_view field);

// Shortest decimal form that round-trips the exact double (std::to_chars).
// Integral values print without a decimal point, e.g. "3".
std::string format_double(double v);

// Fixed-point with the given number of decimals, e.g. format_fixed(0.5, 6)
// == "0.500000".
std::string format_fixed(double v, int decimals);

double parse_double(std::string_view s, std::string_view context);
long parse_long(std::string_view s, std::string_view context);

// Line-oriented CSV reader. Keeps track of line numbers for error messages.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  // Returns false at end of file. Blank lines are skipped.
  bool next(std::vector<std::string>& fields);
  std::size_t line_number() const { return line_number_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_number_ = 0;
};

}  // namespace mentorlens

#endif  // MENTORLENS_CSV_HPP
