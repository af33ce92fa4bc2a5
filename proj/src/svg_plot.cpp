#include "dpwaves/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "dpwaves/errors.hpp"

namespace dpwaves {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      const double d = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= d;
      hi += d;
    } else {
      const double d = 0.04 * (hi - lo);
      lo -= d;
      hi += d;
    }
  }
};

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  const double left = 80, right = 20, top = 40, bottom = 55;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;
  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };

  Range rx, ry;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw DomainError("render_svg: x and y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0.0)) continue;
      rx.add(tx(s.x[i]));
      ry.add(s.y[i]);
    }
  }
  if (!std::isfinite(rx.lo)) rx = {0.0, 1.0};
  if (!std::isfinite(ry.lo)) ry = {0.0, 1.0};
  rx.pad();
  ry.pad();
  auto px = [&](double x) { return left + (tx(x) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double y) { return top + (ry.hi - y) / (ry.hi - ry.lo) * ph; };

  std::ostringstream o;
  o << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">)",
                   spec.width, spec.height)
    << '\n';
  o << fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="white"/>)", spec.width, spec.height) << '\n';
  o << fmt::format(R"(<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>)", spec.width / 2,
                   escape(spec.title))
    << '\n';
  o << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", left, top, pw, ph)
    << '\n';

  for (int i = 0; i <= 5; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
    const double gx = left + pw * i / 5.0;
    const double gy = top + ph - ph * i / 5.0;
    const double label_x = spec.log_x ? std::pow(10.0, fx) : fx;
    o << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/>)", gx, top, top + ph) << '\n';
    o << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{:.4g}</text>)", gx, top + ph + 16, label_x)
      << '\n';
    o << fmt::format(R"(<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#ddd"/>)", gy, left, left + pw) << '\n';
    o << fmt::format(R"(<text x="{}" y="{}" text-anchor="end">{:.6g}</text>)", left - 6, gy + 4, fy) << '\n';
  }
  o << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{}</text>)", left + pw / 2, spec.height - 12,
                   escape(spec.x_label))
    << '\n';
  o << fmt::format(R"svg(<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>)svg",
                   top + ph / 2, escape(spec.y_label))
    << '\n';

  double legend_y = top + 16;
  for (const auto& s : series) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0.0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      pts += fmt::format("{:.3f},{:.3f} ", px(s.x[i]), py(s.y[i]));
    }
    o << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5"{} points="{}"/>)", s.color,
                     s.dashed ? R"( stroke-dasharray="6,4")" : "", pts)
      << '\n';
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if ((spec.log_x && !(s.x[i] > 0.0)) || !std::isfinite(s.y[i])) continue;
        o << fmt::format(R"(<circle cx="{:.3f}" cy="{:.3f}" r="2.5" fill="{}"/>)", px(s.x[i]), py(s.y[i]), s.color)
          << '\n';
      }
    }
    if (!s.label.empty()) {
      o << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>)", left + pw - 150,
                       legend_y - 4, left + pw - 125, legend_y - 4, s.color)
        << '\n';
      o << fmt::format(R"(<text x="{}" y="{}">{}</text>)", left + pw - 120, legend_y, escape(s.label)) << '\n';
      legend_y += 16;
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace dpwaves
