#pragma once

// Minimal self-contained SVG line/bar charts with inline styling.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace crvsat::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool step = false;  // draw as a right-continuous step function
};

struct Bar {
  std::string label;
  double value = 0.0;
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

class Chart {
 public:
  Chart(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  Chart& log_y(bool on = true) {
    log_y_ = on;
    return *this;
  }
  Chart& y_range(double lo, double hi) {
    y_lo_ = lo;
    y_hi_ = hi;
    fixed_y_ = true;
    return *this;
  }
  Chart& add(Series s) {
    series_.push_back(std::move(s));
    return *this;
  }
  Chart& bars(std::vector<Bar> b, std::string color) {
    bars_ = std::move(b);
    bar_color_ = std::move(color);
    return *this;
  }

  std::string render() const {
    constexpr double W = 720, H = 420, L = 70, R = 20, T = 40, B = 60;
    const double pw = W - L - R, ph = H - T - B;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series_) {
      for (auto [x, y] : s.points) {
        if (log_y_ && y <= 0) continue;
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
    for (const auto& b : bars_) {
      if (log_y_ && b.value <= 0) continue;
      y_lo = std::min(y_lo, b.value);
      y_hi = std::max(y_hi, b.value);
    }
    if (!bars_.empty()) {
      x_lo = 0;
      x_hi = static_cast<double>(bars_.size());
      if (!log_y_) y_lo = std::min(0.0, y_lo);
    }
    if (fixed_y_) {
      y_lo = y_lo_;
      y_hi = y_hi_;
    }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
    if (!std::isfinite(y_lo)) y_lo = log_y_ ? 1 : 0, y_hi = log_y_ ? 10 : 1;
    if (x_hi <= x_lo) x_hi = x_lo + 1;
    if (log_y_) {
      y_lo = std::pow(10.0, std::floor(std::log10(y_lo)));
      y_hi = std::pow(10.0, std::ceil(std::log10(y_hi)));
      if (y_hi <= y_lo) y_hi = y_lo * 10;
    } else if (y_hi <= y_lo) {
      y_hi = y_lo + 1;
    }

    auto sx = [&](double x) { return L + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) {
      const double t = log_y_ ? (std::log10(y) - std::log10(y_lo)) /
                                    (std::log10(y_hi) - std::log10(y_lo))
                              : (y - y_lo) / (y_hi - y_lo);
      return T + ph - t * ph;
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title_) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // y ticks
    std::vector<double> yticks;
    if (log_y_) {
      for (double v = y_lo; v <= y_hi * 1.0001; v *= 10) yticks.push_back(v);
    } else {
      for (int i = 0; i <= 5; ++i) yticks.push_back(y_lo + (y_hi - y_lo) * i / 5.0);
    }
    for (double v : yticks) {
      o << "<line x1=\"" << L << "\" x2=\"" << L + pw << "\" y1=\"" << sy(v) << "\" y2=\""
        << sy(v) << "\" stroke=\"#ddd\"/>\n";
      o << "<text x=\"" << L - 6 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">"
        << fmt(v) << "</text>\n";
    }
    if (bars_.empty()) {
      for (int i = 0; i <= 5; ++i) {
        const double v = x_lo + (x_hi - x_lo) * i / 5.0;
        o << "<text x=\"" << sx(v) << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">"
          << fmt(v) << "</text>\n";
      }
    }
    o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 14 << "\" text-anchor=\"middle\">"
      << escape(x_label_) << "</text>\n";
    o << "<text transform=\"translate(16," << T + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_) << "</text>\n";

    const double base = log_y_ ? y_lo : std::max(y_lo, 0.0);
    for (std::size_t i = 0; i < bars_.size(); ++i) {
      const double v = bars_[i].value;
      const double x0 = sx(i + 0.15), x1 = sx(i + 0.85);
      if (!(log_y_ && v <= 0)) {
        const double top = sy(std::max(v, base));
        o << "<rect x=\"" << x0 << "\" y=\"" << top << "\" width=\"" << x1 - x0 << "\" height=\""
          << sy(base) - top << "\" fill=\"" << bar_color_ << "\"/>\n";
      }
      o << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << T + ph + 16
        << "\" text-anchor=\"middle\">" << escape(bars_[i].label) << "</text>\n";
    }

    double legend_y = T + 14;
    for (const auto& s : series_) {
      std::ostringstream path;
      bool first = true;
      double prev_y = 0;
      for (auto [x, y] : s.points) {
        if (log_y_ && y <= 0) continue;
        if (s.step && !first) path << ' ' << sx(x) << ',' << sy(prev_y);
        path << (first ? "" : " ") << sx(x) << ',' << sy(y);
        first = false;
        prev_y = y;
      }
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\""
        << path.str() << "\"/>\n";
      o << "<line x1=\"" << L + pw - 150 << "\" x2=\"" << L + pw - 130 << "\" y1=\"" << legend_y
        << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"3\"/>\n";
      o << "<text x=\"" << L + pw - 124 << "\" y=\"" << legend_y + 4 << "\">" << escape(s.label)
        << "</text>\n";
      legend_y += 16;
    }
    o << "</svg>\n";
    return o.str();
  }

 private:
  std::string title_, x_label_, y_label_;
  bool log_y_ = false;
  bool fixed_y_ = false;
  double y_lo_ = 0, y_hi_ = 1;
  std::vector<Series> series_;
  std::vector<Bar> bars_;
  std::string bar_color_ = "#4477aa";
};

}  // namespace crvsat::svg
