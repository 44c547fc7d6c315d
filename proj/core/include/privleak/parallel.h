// Copyright 2026 The privleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVLEAK_PARALLEL_H_
#define PRIVLEAK_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace privleak {

// Runs fn(0), ..., fn(count - 1) on up to `jobs` threads. jobs <= 0 uses the
// hardware concurrency. Each index runs exactly once; callers write results
// into preallocated slots so output order never depends on scheduling.
void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& fn);

}  // namespace privleak

#endif  // PRIVLEAK_PARALLEL_H_
