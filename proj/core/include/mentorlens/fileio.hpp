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

#ifndef MENTORLENS_FILEIO_HPP
#define MENTORLENS_FILEIO_HPP

#include <fstream>
#include <string>

namespace mentorlens {

// Writes to `<path>.tmp` and renames into place on commit(). If the writer is
// destroyed without commit (e.g. an exception unwinds past it), the partial
// file is removed, so failed runs never leave half-written outputs behind.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path);
  ~AtomicFile();

  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ofstream& stream() { return out_; }
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string read_file(const std::string& path);

}  // namespace mentorlens

#endif  // MENTORLENS_FILEIO_HPP
