// Copyright 2026 The cuedist Authors. All Rights Reserved.
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

#ifndef CUEDIST_FILEIO_H_
#define CUEDIST_FILEIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cuedist {

// Throws Error(kIo) naming the path on failure.
std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
std::string ReadFileText(const std::filesystem::path& path);

// Writes to a temporary sibling, flushes it to disk and renames it over
// `path`, so readers never observe a partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> bytes);
void WriteFileAtomic(const std::filesystem::path& path, std::string_view text);

// Appends one line and fsyncs before returning.
void AppendLineDurable(const std::filesystem::path& path,
                       std::string_view line);

}  // namespace cuedist

#endif  // CUEDIST_FILEIO_H_
