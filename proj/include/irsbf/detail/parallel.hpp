// SPDX-License-Identifier: Apache-2.0
//
// irsbf - joint active/passive beamforming for IRS-assisted mmWave links
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

#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace irsbf {

template <typename Fn>
void parallel_trials(int count, int workers, Fn&& fn) {
  const int w = std::clamp(workers, 1, std::max(count, 1));
  if (w == 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int id = 0; id < w; ++id) {
    pool.emplace_back([&, id] {
      try {
        for (int t = id; t < count; t += w) fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace irsbf
