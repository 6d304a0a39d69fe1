// Copyright 2026 The evofg Authors.
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

#include "evofg/io.h"

#include <mutex>
#include <utility>

#include "evofg/error.h"

namespace evofg::io {
namespace {

std::mutex& observer_mutex() {
  static std::mutex m;
  return m;
}

OpenObserver& observer() {
  static OpenObserver o;
  return o;
}

}  // namespace

OpenObserver set_open_observer(OpenObserver next) {
  std::lock_guard lock(observer_mutex());
  return std::exchange(observer(), std::move(next));
}

std::ifstream open_input(const std::filesystem::path& path,
                         std::ios::openmode mode) {
  {
    std::lock_guard lock(observer_mutex());
    if (observer()) observer()(path);
  }
  std::ifstream in(path, mode | std::ios::in);
  if (!in) throw Error("cannot open for reading: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path,
                          std::ios::openmode mode) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, mode | std::ios::out);
  if (!out) throw Error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace evofg::io
