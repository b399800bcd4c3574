//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/eval/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace glassmol::eval {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
const char *kColors[] = {"#c0392b", "#2c7fb8", "#41ab5d", "#8856a7", "#f39c12", "#555555"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '&':
      out += "&amp;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

} // namespace

std::string svg_chart(const std::string &title, const std::string &x_label,
                      const std::string &y_label, const std::vector<std::string> &categories,
                      const std::vector<ChartSeries> &series, bool bars) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto &s : series)
    for (std::size_t i = 0; i < s.mean.size(); ++i) {
      const double e = i < s.error.size() ? s.error[i] : 0.0;
      lo = std::min(lo, s.mean[i] - e);
      hi = std::max(hi, s.mean[i] + e);
    }
  if (!std::isfinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (bars)
    lo = std::min(lo, 0.0);
  const double pad = std::max(1e-6, 0.08 * (hi - lo));
  lo -= bars && lo == 0.0 ? 0.0 : pad;
  hi += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const std::size_t n = std::max<std::size_t>(categories.size(), 1);
  auto x_of = [&](std::size_t i) { return kLeft + pw * (i + 0.5) / n; };
  auto y_of = [&](double v) { return kTop + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
                    "\" height=\"" + fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(title) + "</text>\n";
  out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(kLeft + pw) +
         "\" y2=\"" + fmt(kTop + ph) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
         "\" y2=\"" + fmt(kTop + ph) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    out += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(y_of(v) + 4) +
           "\" text-anchor=\"end\">" + fmt(v) + "</text>\n";
  }
  for (std::size_t i = 0; i < categories.size(); ++i)
    out += "<text x=\"" + fmt(x_of(i)) + "\" y=\"" + fmt(kTop + ph + 18) +
           "\" text-anchor=\"middle\">" + escape(categories[i]) + "</text>\n";
  out += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 14) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(kTop + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

  const double slot = pw / n;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const std::string color = kColors[s % 6];
    const auto &sr = series[s];
    std::string points;
    for (std::size_t i = 0; i < sr.mean.size() && i < n; ++i) {
      const double x = bars ? kLeft + slot * i + slot * (s + 0.5) / (series.size() + 0.5)
                            : x_of(i);
      const double y = y_of(sr.mean[i]);
      if (bars) {
        const double w = slot / (series.size() + 0.5) * 0.8;
        out += "<rect x=\"" + fmt(x - w / 2) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
               "\" height=\"" + fmt(y_of(lo) - y) + "\" fill=\"" + color + "\"/>\n";
      } else {
        points += fmt(x) + "," + fmt(y) + " ";
        out += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
      if (i < sr.error.size() && sr.error[i] > 0)
        out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y_of(sr.mean[i] - sr.error[i])) +
               "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(y_of(sr.mean[i] + sr.error[i])) +
               "\" stroke=\"" + color + "\"/>\n";
    }
    if (!bars && !points.empty())
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + points + "\"/>\n";
    const double ly = kTop + 16 * s + 8;
    out += "<rect x=\"" + fmt(kWidth - kRight + 16) + "\" y=\"" + fmt(ly - 8) +
           "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + fmt(kWidth - kRight + 32) + "\" y=\"" + fmt(ly + 1) + "\">" +
           escape(sr.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

} // namespace glassmol::eval
