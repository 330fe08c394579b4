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

#include "cuedist/fileio.h"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cuedist/error.h"

namespace cuedist {

namespace {

[[noreturn]] void IoFail(const std::string& what,
                         const std::filesystem::path& path) {
  Fail(ErrorKind::kIo, what + " '" + path.string() + "': " +
                           std::strerror(errno));
}

void WriteAll(int fd, const void* data, size_t size,
              const std::filesystem::path& path) {
  const auto* p = static_cast<const char*>(data);
  while (size > 0) {
    const ssize_t n = ::write(fd, p, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      IoFail("cannot write", path);
    }
    p += n;
    size -= static_cast<size_t>(n);
  }
}

}  // namespace

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) IoFail("cannot open", path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string ReadFileText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) IoFail("cannot open", path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> bytes) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(counter.fetch_add(1));
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) IoFail("cannot create", tmp);
  WriteAll(fd, bytes.data(), bytes.size(), tmp);
  if (::fsync(fd) != 0 || ::close(fd) != 0) IoFail("cannot flush", tmp);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    ::unlink(tmp.c_str());
    IoFail("cannot rename onto", path);
  }
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view text) {
  WriteFileAtomic(path, std::span<const uint8_t>(
                            reinterpret_cast<const uint8_t*>(text.data()),
                            text.size()));
}

void AppendLineDurable(const std::filesystem::path& path,
                       std::string_view line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) IoFail("cannot open", path);
  std::string buffer(line);
  buffer.push_back('\n');
  WriteAll(fd, buffer.data(), buffer.size(), path);
  if (::fsync(fd) != 0 || ::close(fd) != 0) IoFail("cannot flush", path);
}

}  // namespace cuedist
