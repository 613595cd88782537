// SPDX-License-Identifier: Apache-2.0
//
// wsrp - equivariant precoder learning and simulation toolkit
// Copyright (C) 2026 the wsrp contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef WSRP_PARALLEL_HPP
#define WSRP_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wsrp {

// Runs fn(i) for i in [begin, end). Work items must write to disjoint slots;
// callers that need determinism reduce the slots in index order afterwards,
// which makes results independent of the job count.
inline void parallel_for(int begin, int end, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || end - begin <= 1) {
        for (int i = begin; i < end; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next(begin);
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= end)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(end);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int num_threads = std::min(jobs, end - begin);
    pool.reserve(static_cast<std::size_t>(num_threads));
    for (int t = 0; t < num_threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace wsrp

#endif // WSRP_PARALLEL_HPP
