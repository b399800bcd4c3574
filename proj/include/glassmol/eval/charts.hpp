//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

namespace glassmol::eval {

struct ChartSeries {
  std::string name;
  std::vector<double> mean;
  std::vector<double> error; // drawn as +/- whiskers; may be empty
};

// Static SVG with categorical x positions. Lines join points unless `bars`.
std::string svg_chart(const std::string &title, const std::string &x_label,
                      const std::string &y_label, const std::vector<std::string> &categories,
                      const std::vector<ChartSeries> &series, bool bars = false);

} // namespace glassmol::eval
