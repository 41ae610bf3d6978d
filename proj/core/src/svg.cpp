#include "homsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace homsim {

namespace {

constexpr int kWidth = 820;
constexpr int kHeight = 560;
constexpr int kMarginLeft = 78;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 46;
constexpr int kMarginBottom = 64;
constexpr const char* kGeneratorTag = "homsim-svg 1";

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// widen [lo, hi] to a round tick step and return the tick positions
std::vector<double> nice_ticks(double lo, double hi) {
  if (!(hi > lo)) hi = lo + 1.0;
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 0.5 * step; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& file,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = 0.0;
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("series x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      const double err = i < s.y_err.size() ? s.y_err[i] : 0.0;
      y_hi = std::max(y_hi, s.y[i] + err);
    }
  }
  if (!(x_hi > x_lo)) throw std::invalid_argument("plot needs an x extent");
  y_hi *= 1.06;

  const double px_w = kWidth - kMarginLeft - kMarginRight;
  const double px_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) {
    return kMarginLeft + px_w * (x - x_lo) / (x_hi - x_lo);
  };
  auto sy = [&](double y) {
    return kHeight - kMarginBottom - px_h * (y - y_lo) / (y_hi - y_lo);
  };

  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<!-- generator: " << kGeneratorTag << " -->\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"26\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"17\">"
      << title << "</text>\n";

  // frame
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << fmt(px_w) << "\" height=\"" << fmt(px_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(x_lo, x_hi)) {
    if (t < x_lo || t > x_hi) continue;
    const double x = sx(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kHeight - kMarginBottom
        << "\" x2=\"" << fmt(x) << "\" y2=\"" << kHeight - kMarginBottom + 6
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << kHeight - kMarginBottom + 22
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << fmt_tick(t) << "</text>\n";
  }
  for (double t : nice_ticks(y_lo, y_hi)) {
    if (t < y_lo || t > y_hi) continue;
    const double y = sy(t);
    out << "<line x1=\"" << kMarginLeft - 6 << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << kMarginLeft << "\" y2=\"" << fmt(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMarginLeft - 10 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << fmt_tick(t) << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + px_w / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << x_label << "</text>\n";
  out << "<text x=\"22\" y=\"" << kMarginTop + px_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" transform=\"rotate(-90 22 "
      << kMarginTop + px_h / 2 << ")\">" << y_label << "</text>\n";

  int legend_row = 0;
  for (const PlotSeries& s : series) {
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double x = sx(s.x[i]);
        const double y = sy(s.y[i]);
        if (i < s.y_err.size() && s.y_err[i] > 0.0) {
          out << "<line x1=\"" << fmt(x) << "\" y1=\""
              << fmt(sy(s.y[i] - s.y_err[i])) << "\" x2=\"" << fmt(x)
              << "\" y2=\"" << fmt(sy(s.y[i] + s.y_err[i])) << "\" stroke=\""
              << s.color << "\"/>\n";
        }
        out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y)
            << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
      }
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) out << ' ';
        out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i]));
      }
      out << "\"/>\n";
    }
    const int ly = kMarginTop + 16 + 18 * legend_row++;
    out << "<line x1=\"" << kMarginLeft + 12 << "\" y1=\"" << ly << "\" x2=\""
        << kMarginLeft + 38 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
        << "\" stroke-width=\"3\"/>\n";
    out << "<text x=\"" << kMarginLeft + 44 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace homsim
