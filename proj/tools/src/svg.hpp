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

#ifndef OPTOFORCE_CLI_SVG_HPP_
#define OPTOFORCE_CLI_SVG_HPP_

#include <string>
#include <vector>

namespace optoforce::cli {

struct Series {
  std::string name;
  std::vector<double> y;
};

// Log-log polylines over a shared x grid. Non-positive or non-finite points
// are skipped.
std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::vector<double>& x, const std::vector<Series>& series);

}  // namespace optoforce::cli

#endif  // OPTOFORCE_CLI_SVG_HPP_
