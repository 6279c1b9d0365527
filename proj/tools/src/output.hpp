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

#ifndef OPTOFORCE_CLI_OUTPUT_HPP_
#define OPTOFORCE_CLI_OUTPUT_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace optoforce::cli {

// "%.17g", with "inf"/"-inf"/"nan" spelled out.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

// Files staged in memory and published together: each goes to a temporary
// sibling first, then all are renamed into place. Nothing is touched until
// commit(), so a failed run leaves no partial output.
class OutputSet {
 public:
  void add(std::filesystem::path path, std::string content);
  void commit();
  std::vector<std::string> paths() const;
  bool empty() const { return files_.empty(); }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace optoforce::cli

#endif  // OPTOFORCE_CLI_OUTPUT_HPP_
