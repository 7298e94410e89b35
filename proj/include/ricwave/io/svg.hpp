#ifndef RICWAVE_IO_SVG_HPP
#define RICWAVE_IO_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ricwave/io/version.hpp"
#include "ricwave/types.hpp"

// Direct SVG emission for line plots: axes, ticks and paths are computed
// in-tool so figures are plain diffable text with no plotting dependency.

namespace ricwave {

class SvgFigure {
 public:
  SvgFigure(int width = 800, int height = 560) : width_(width), height_(height) {}

  void set_title(const std::string& t) { title_ = t; }
  void set_xlabel(const std::string& t) { xlabel_ = t; }
  void set_ylabel(const std::string& t) { ylabel_ = t; }

  void add_polyline(const std::vector<std::pair<double, double>>& pts,
                    const std::string& color, const std::string& label = "") {
    if (pts.empty()) return;
    series_.push_back({pts, color, label});
    for (const auto& [x, y] : pts) {
      xmin_ = std::min(xmin_, x);
      xmax_ = std::max(xmax_, x);
      ymin_ = std::min(ymin_, y);
      ymax_ = std::max(ymax_, y);
    }
  }

  void add_marker(double x, double y, const std::string& color) {
    markers_.push_back({x, y, color});
    xmin_ = std::min(xmin_, x);
    xmax_ = std::max(xmax_, x);
    ymin_ = std::min(ymin_, y);
    ymax_ = std::max(ymax_, y);
  }

  std::string render(const std::string& canonical_config) const {
    double x0 = xmin_, x1 = xmax_, y0 = ymin_, y1 = ymax_;
    if (!(x0 < x1)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y0 < y1)) { y0 -= 0.5; y1 += 0.5; }
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;

    const double ml = 70, mr = 20, mt = title_.empty() ? 20 : 40, mb = 50;
    const double pw = width_ - ml - mr, ph = height_ - mt - mb;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
       << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " "
       << height_ << "\">\n";
    os << "<!-- " << version_comment().substr(2) << " -->\n";
    os << "<!-- " << hash_comment(canonical_config).substr(2) << " -->\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_
       << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
       << fmt(pw) << "\" height=\"" << fmt(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(x0, x1)) {
      const double X = px(t);
      os << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
         << fmt(X) << "\" y2=\"" << fmt(mt + ph + 5)
         << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << fmt(X) << "\" y=\"" << fmt(mt + ph + 18)
         << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t)
         << "</text>\n";
    }
    for (double t : ticks(y0, y1)) {
      const double Y = py(t);
      os << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(Y) << "\" x2=\""
         << fmt(ml) << "\" y2=\"" << fmt(Y) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(Y + 4)
         << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }

    for (const auto& s : series_) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.pts.size(); ++i)
        os << (i ? " " : "") << fmt(px(s.pts[i].first)) << ","
           << fmt(py(s.pts[i].second));
      os << "\"/>\n";
    }
    for (const auto& m : markers_)
      os << "<circle cx=\"" << fmt(px(m.x)) << "\" cy=\"" << fmt(py(m.y))
         << "\" r=\"3\" fill=\"" << m.color << "\"/>\n";

    double ly = mt + 16;
    for (const auto& s : series_)
      if (!s.label.empty()) {
        os << "<line x1=\"" << fmt(ml + 10) << "\" y1=\"" << fmt(ly - 4)
           << "\" x2=\"" << fmt(ml + 34) << "\" y2=\"" << fmt(ly - 4)
           << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << fmt(ml + 40) << "\" y=\"" << fmt(ly)
           << "\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 16;
      }

    if (!title_.empty())
      os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"24\" font-size=\"15\" "
            "text-anchor=\"middle\">" << title_ << "</text>\n";
    if (!xlabel_.empty())
      os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height_ - 12)
         << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel_
         << "</text>\n";
    if (!ylabel_.empty())
      os << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
         << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
         << fmt(mt + ph / 2) << ")\">" << ylabel_ << "</text>\n";
    os << "</svg>\n";
    return os.str();
  }

 private:
  struct Series {
    std::vector<std::pair<double, double>> pts;
    std::string color, label;
  };
  struct Marker {
    double x, y;
    std::string color;
  };

  static std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
    return buf;
  }

  static std::vector<double> ticks(double lo, double hi) {
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (mag * m >= raw) { step = mag * m; break; }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step)
      out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
  }

  int width_, height_;
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
  std::vector<Marker> markers_;
  double xmin_ = std::numeric_limits<double>::infinity();
  double xmax_ = -std::numeric_limits<double>::infinity();
  double ymin_ = std::numeric_limits<double>::infinity();
  double ymax_ = -std::numeric_limits<double>::infinity();
};

}  // namespace ricwave

#endif
