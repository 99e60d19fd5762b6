#pragma once

// Self-contained SVG log-log chart of bench medians with the fitted line.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "ctf/harness/bench.hpp"

namespace ctf {

inline std::string bench_to_svg(const BenchResult& r) {
  constexpr double kW = 640.0;
  constexpr double kH = 420.0;
  constexpr double kPad = 60.0;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < r.ns.size(); ++i) {
    if (r.medians[i] <= 0.0) continue;
    lx.push_back(std::log10(static_cast<double>(r.ns[i])));
    ly.push_back(std::log10(r.medians[i]));
  }
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + std::string(target_name(r.target)) + ": median cost vs n (log-log)</text>\n";
  if (lx.empty()) return svg + "</svg>\n";
  double x0 = *std::min_element(lx.begin(), lx.end());
  double x1 = *std::max_element(lx.begin(), lx.end());
  double y0 = *std::min_element(ly.begin(), ly.end());
  double y1 = *std::max_element(ly.begin(), ly.end());
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  auto px = [&](double x) { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); };
  auto py = [&](double y) { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); };
  svg += "<line x1=\"" + fmt(kPad) + "\" y1=\"" + fmt(kH - kPad) + "\" x2=\"" + fmt(kW - kPad) +
         "\" y2=\"" + fmt(kH - kPad) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kPad) + "\" y1=\"" + fmt(kPad) + "\" x2=\"" + fmt(kPad) + "\" y2=\"" +
         fmt(kH - kPad) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"320\" y=\"410\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">log10 n</text>\n";
  svg += "<text x=\"16\" y=\"210\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 210)\">log10 cost</text>\n";
  std::string points;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    points += fmt(px(lx[i])) + "," + fmt(py(ly[i])) + " ";
    svg += "<circle cx=\"" + fmt(px(lx[i])) + "\" cy=\"" + fmt(py(ly[i])) +
           "\" r=\"4\" fill=\"steelblue\"/>\n";
  }
  svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"steelblue\"/>\n";
  if (r.fit) {
    const double ln10 = std::log(10.0);
    auto fit_y = [&](double x) { return (r.fit->intercept + r.fit->slope * x * ln10) / ln10; };
    svg += "<line x1=\"" + fmt(px(x0)) + "\" y1=\"" + fmt(py(fit_y(x0))) + "\" x2=\"" +
           fmt(px(x1)) + "\" y2=\"" + fmt(py(fit_y(x1))) +
           "\" stroke=\"crimson\" stroke-dasharray=\"6 4\"/>\n";
    svg += "<text x=\"" + fmt(kPad + 10) + "\" y=\"" + fmt(kPad) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"crimson\">slope " +
           fmt(r.fit->slope) + ", r2 " + fmt(r.fit->r_squared) + "</text>\n";
  }
  return svg + "</svg>\n";
}

}  // namespace ctf
