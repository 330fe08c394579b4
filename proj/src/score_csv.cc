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

#include "cuedist/score_csv.h"

#include <charconv>
#include <vector>

#include "cuedist/error.h"
#include "cuedist/fileio.h"

namespace cuedist {

namespace {

[[noreturn]] void LineFail(size_t line, const std::string& what) {
  Fail(ErrorKind::kData, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> SplitFields(std::string_view line, size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        fields.back() += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) LineFail(line_no, "unterminated quote");
  return fields;
}

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ScoreTable ParseScoreCsv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) Fail(ErrorKind::kData, "line 1: empty CSV, header missing");
  if (lines[0] != kScoreCsvHeader) {
    LineFail(1, "expected header '" + std::string(kScoreCsvHeader) + "'");
  }

  ScoreTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    const size_t line_no = i + 1;
    if (lines[i].empty()) LineFail(line_no, "blank line");
    const auto f = SplitFields(lines[i], line_no);
    if (f.size() != 6) {
      LineFail(line_no, "expected 6 fields, found " + std::to_string(f.size()));
    }
    ScoreRow row;
    row.subject_id = f[0];
    row.item_id = f[1];
    try {
      row.icld_level = ParseLevel(f[2]);
      row.icc_level = ParseLevel(f[3]);
    } catch (const Error& e) {
      LineFail(line_no, e.what());
    }
    row.condition_label = f[4];
    const char* first = f[5].data();
    const char* last = first + f[5].size();
    const auto [ptr, ec] = std::from_chars(first, last, row.score);
    if (ec != std::errc() || ptr != last || f[5].empty()) {
      LineFail(line_no, "score '" + f[5] + "' is not an integer");
    }
    if (row.score < 0 || row.score > 100) {
      LineFail(line_no, "score " + f[5] + " outside [0, 100]");
    }
    table.push_back(std::move(row));
  }
  try {
    ValidateScoreTable(table);
  } catch (const Error& e) {
    // Row numbers are 1-based over data rows; the header is line 1.
    Fail(ErrorKind::kData, std::string("data ") + e.what());
  }
  return table;
}

std::string FormatScoreCsv(const ScoreTable& table) {
  std::string out(kScoreCsvHeader);
  out += '\n';
  for (const ScoreRow& r : table) {
    out += Quote(r.subject_id) + ',' + Quote(r.item_id) + ',' +
           std::string(LevelName(r.icld_level)) + ',' +
           std::string(LevelName(r.icc_level)) + ',' + Quote(r.condition_label) +
           ',' + std::to_string(r.score) + '\n';
  }
  return out;
}

ScoreTable ReadScoreCsv(const std::filesystem::path& path) {
  return ParseScoreCsv(ReadFileText(path));
}

void WriteScoreCsv(const std::filesystem::path& path, const ScoreTable& table) {
  WriteFileAtomic(path, FormatScoreCsv(table));
}

}  // namespace cuedist
