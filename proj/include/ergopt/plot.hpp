#pragma once

// Self-contained SVG line plots: fixed 800x500 viewBox, inline path data,
// tick labels with 3 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace ergopt {

struct StepSegment {
  double x0, x1, y;
};

struct PlotSpec {
  std::string title;
  std::string xlabel = "x";
  std::string ylabel = "value";
  std::vector<double> markers;  // dashed vertical lines
};

namespace detail {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 50;

inline std::string tick_label(double v) {
  if (std::abs(v) < 1e-300) v = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class Frame {
 public:
  Frame(double xmin, double xmax, double ymin, double ymax) : x0_(xmin), x1_(xmax) {
    if (!(x1_ > x0_)) x1_ = x0_ + 1;
    if (!(ymax > ymin)) {
      ymin -= 0.5;
      ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    y0_ = ymin - pad;
    y1_ = ymax + pad;
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

  std::string axes(const PlotSpec& spec) const {
    std::ostringstream s;
    const double bx = kLeft, by = kHeight - kBottom, tx = kWidth - kRight, ty = kTop;
    s << "<rect x=\"" << num(bx) << "\" y=\"" << num(ty) << "\" width=\"" << num(tx - bx) << "\" height=\""
      << num(by - ty) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / 4.0;
      const double yv = y0_ + (y1_ - y0_) * i / 4.0;
      s << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(by) << "\" x2=\"" << num(px(xv)) << "\" y2=\""
        << num(by + 5) << "\" stroke=\"#444\"/>\n";
      s << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(by + 20) << "\" text-anchor=\"middle\">"
        << tick_label(xv) << "</text>\n";
      s << "<line x1=\"" << num(bx - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(bx) << "\" y2=\""
        << num(py(yv)) << "\" stroke=\"#444\"/>\n";
      s << "<text x=\"" << num(bx - 8) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
        << tick_label(yv) << "</text>\n";
    }
    s << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(spec.title) << "</text>\n";
    s << "<text x=\"" << num((bx + tx) / 2) << "\" y=\"" << num(kHeight - 10) << "\" text-anchor=\"middle\">"
      << escape(spec.xlabel) << "</text>\n";
    s << "<text x=\"18\" y=\"" << num((by + ty) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num((by + ty) / 2) << ")\">" << escape(spec.ylabel) << "</text>\n";
    for (double m : spec.markers) {
      s << "<line x1=\"" << num(px(m)) << "\" y1=\"" << num(ty) << "\" x2=\"" << num(px(m)) << "\" y2=\"" << num(by)
        << "\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
    }
    return s.str();
  }

 private:
  double x0_, x1_, y0_, y1_;
};

inline std::string document(const std::string& body) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"800\" height=\"500\" fill=\"white\"/>\n" +
         body + "</svg>\n";
}

}  // namespace detail

// Piecewise constant graph; segments need not be contiguous.
inline std::string svg_step_plot(const std::vector<StepSegment>& segs, const PlotSpec& spec) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 0;
  if (!segs.empty()) {
    xmin = segs.front().x0;
    xmax = segs.front().x1;
    ymin = ymax = segs.front().y;
  }
  for (const auto& s : segs) {
    xmin = std::min(xmin, s.x0);
    xmax = std::max(xmax, s.x1);
    ymin = std::min(ymin, s.y);
    ymax = std::max(ymax, s.y);
  }
  detail::Frame f(xmin, xmax, ymin, ymax);
  std::ostringstream path;
  for (const auto& s : segs) {
    path << "M" << detail::num(f.px(s.x0)) << " " << detail::num(f.py(s.y)) << "H" << detail::num(f.px(s.x1));
  }
  return detail::document(f.axes(spec) + "<path d=\"" + path.str() +
                          "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\"/>\n");
}

inline std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys, const PlotSpec& spec) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 0;
  if (!xs.empty()) {
    xmin = *std::min_element(xs.begin(), xs.end());
    xmax = *std::max_element(xs.begin(), xs.end());
    ymin = *std::min_element(ys.begin(), ys.end());
    ymax = *std::max_element(ys.begin(), ys.end());
  }
  detail::Frame f(xmin, xmax, ymin, ymax);
  std::ostringstream path;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    path << (i ? "L" : "M") << detail::num(f.px(xs[i])) << " " << detail::num(f.py(ys[i]));
  }
  return detail::document(f.axes(spec) + "<path d=\"" + path.str() +
                          "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\"/>\n");
}

}  // namespace ergopt
