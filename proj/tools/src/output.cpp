// Copyright 2026 The optoforce Authors
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

#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace optoforce::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size()) throw std::logic_error("CSV row width mismatch");
  rows_.push_back(values);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  return os.str();
}

void OutputSet::add(std::filesystem::path path, std::string content) {
  files_.emplace_back(std::move(path), std::move(content));
}

std::vector<std::string> OutputSet::paths() const {
  std::vector<std::string> out;
  for (const auto& f : files_) out.push_back(f.first.string());
  return out;
}

void OutputSet::commit() {
  namespace fs = std::filesystem;
  std::vector<fs::path> staged;
  const auto discard = [&] {
    std::error_code ec;
    for (const auto& t : staged) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files_) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    std::ofstream os(tmp, std::ios::binary);
    os << content;
    os.close();
    if (!os) {
      staged.push_back(tmp);
      discard();
      throw std::runtime_error("cannot write " + path.string());
    }
    staged.push_back(tmp);
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    fs::rename(staged[i], files_[i].first, ec);
    if (ec) {
      discard();
      throw std::runtime_error("cannot publish " + files_[i].first.string() + ": " +
                               ec.message());
    }
  }
}

}  // namespace optoforce::cli
