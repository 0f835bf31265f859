#pragma once

// Deterministic SVG scatter/line plots: fixed viewport, fixed number
// formatting, no timestamps, so identical data gives identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace cyclecensus {

struct SvgSeries {
  enum class Style { markers, line };
  std::string label;
  Style style = Style::markers;
  std::string color = "#1f77b4";
  std::vector<std::pair<double, double>> points;
};

class SvgPlot {
 public:
  std::string title, x_label, y_label;
  std::vector<SvgSeries> series;

  std::string render() const {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
      for (auto [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if (first) {
          xmin = xmax = x;
          ymin = ymax = y;
          first = false;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    ymin = std::min(ymin, 0.0);
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double xstep = nice_step((xmax - xmin) / 6), ystep = nice_step((ymax - ymin) / 6);
    xmin = std::floor(xmin / xstep) * xstep;
    xmax = std::ceil(xmax / xstep) * xstep;
    ymin = std::floor(ymin / ystep) * ystep;
    ymax = std::ceil(ymax / ystep) * ystep;

    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += text(kWidth / 2, 24, title, "middle", 16);
    out += text(kWidth / 2, kHeight - 12, x_label, "middle", 13);
    out += "<text x=\"18\" y=\"" + num(kHeight / 2) + "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           num(kHeight / 2) + ")\">" + escape(y_label) + "</text>\n";
    // Axes and ticks.
    out += line(px(xmin), py(ymin), px(xmax), py(ymin), "black");
    out += line(px(xmin), py(ymin), px(xmin), py(ymax), "black");
    for (double x = xmin; x <= xmax + xstep / 2; x += xstep) {
      out += line(px(x), py(ymin), px(x), py(ymin) + 5, "black");
      out += text(px(x), py(ymin) + 18, tick(x), "middle", 11);
    }
    for (double y = ymin; y <= ymax + ystep / 2; y += ystep) {
      out += line(px(xmin) - 5, py(y), px(xmin), py(y), "black");
      out += line(px(xmin), py(y), px(xmax), py(y), "#e0e0e0");
      out += text(px(xmin) - 8, py(y) + 4, tick(y), "end", 11);
    }
    double legend_y = kTop + 8;
    for (const auto& s : series) {
      if (s.style == SvgSeries::Style::line) {
        std::string pts;
        for (auto [x, y] : s.points) {
          if (!std::isfinite(x) || !std::isfinite(y)) continue;
          if (!pts.empty()) pts += ' ';
          pts += num(px(x)) + "," + num(py(y));
        }
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
      } else {
        for (auto [x, y] : s.points) {
          if (!std::isfinite(x) || !std::isfinite(y)) continue;
          out += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"2.5\" fill=\"" + s.color + "\"/>\n";
        }
      }
      if (!s.label.empty()) {
        out += line(kWidth - kRight - 170, legend_y, kWidth - kRight - 150, legend_y, s.color);
        out += text(kWidth - kRight - 145, legend_y + 4, s.label, "start", 11);
        legend_y += 16;
      }
    }
    out += "</svg>\n";
    return out;
  }

 private:
  static constexpr double kWidth = 720, kHeight = 480, kLeft = 80, kRight = 20, kTop = 40, kBottom = 50;

  static double nice_step(double raw) {
    if (raw <= 0) return 1;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r <= 1 ? 1 : r <= 2 ? 2 : r <= 5 ? 5 : 10) * mag;
  }
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  static std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
  }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }
  static std::string line(double x1, double y1, double x2, double y2, const std::string& color) {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + color + "\"/>\n";
  }
  static std::string text(double x, double y, const std::string& s, const char* anchor, int size) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
           "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }
};

}  // namespace cyclecensus
