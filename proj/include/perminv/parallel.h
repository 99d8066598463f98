// Copyright 2026 The perminv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace perminv {

/// Calls fn(i) for i in [0, count) on up to `threads` workers using a static
/// interleaved schedule. Callers write results into per-index slots and
/// reduce them in index order afterwards, so the outcome does not depend on
/// the thread count. The first exception thrown by any worker is rethrown.
template <typename F>
void parallel_for(uint64_t count, int threads, F &&fn) {
    uint64_t workers = std::clamp<uint64_t>(threads < 1 ? 1 : static_cast<uint64_t>(threads), 1, std::max<uint64_t>(count, 1));
    if (workers == 1) {
        for (uint64_t i = 0; i < count; i++) {
            fn(i);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (uint64_t w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                for (uint64_t i = w; i < count; i += workers) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace perminv
