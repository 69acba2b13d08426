// Copyright 2026 The foc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "foc/parallel.h"

#include <atomic>
#include <cstdlib>
#include <string>

namespace foc {
namespace {

int initial_worker_count() {
  if (const char* env = std::getenv("FOC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& worker_slot() {
  static std::atomic<int> slot{initial_worker_count()};
  return slot;
}

}  // namespace

int worker_count() { return worker_slot().load(); }

void set_worker_count(int n) { worker_slot().store(n > 0 ? n : 1); }

}  // namespace foc
