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

#ifndef MENTORLENS_PARALLEL_HPP
#define MENTORLENS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mentorlens {

// 0 (auto) resolves to std::thread::hardware_concurrency.
int resolve_threads(int requested);

// Runs fn(i) for every i in [0, n) on up to `threads` workers. The schedule
// guarantees nothing about ordering; work items must be independent and write
// results into their own slot, which keeps outputs identical for any thread
// count. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace mentorlens

#endif  // MENTORLENS_PARALLEL_HPP
