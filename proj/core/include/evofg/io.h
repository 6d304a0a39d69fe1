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

#ifndef EVOFG_IO_H_
#define EVOFG_IO_H_

#include <filesystem>
#include <fstream>
#include <functional>

namespace evofg::io {

using OpenObserver = std::function<void(const std::filesystem::path&)>;

// Installs a process-wide hook called with every path the library opens for
// reading. Returns the previously installed observer. Used by tests to trace
// which files a stage touches.
OpenObserver set_open_observer(OpenObserver observer);

// Opens `path` for reading, notifying the observer. Throws evofg::Error if
// the file cannot be opened.
std::ifstream open_input(const std::filesystem::path& path,
                         std::ios::openmode mode = std::ios::in);

std::ofstream open_output(const std::filesystem::path& path,
                          std::ios::openmode mode = std::ios::out);

}  // namespace evofg::io

#endif  // EVOFG_IO_H_
