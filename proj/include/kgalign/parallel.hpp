// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGALIGN_PARALLEL_HPP
#define KGALIGN_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace kgalign {

/// Worker count from KGALIGN_THREADS, else hardware concurrency (min 1).
std::size_t thread_count();

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each,
/// one chunk per worker. Chunks write disjoint outputs, so results do not
/// depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace kgalign

#endif  // KGALIGN_PARALLEL_HPP
