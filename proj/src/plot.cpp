#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "geotomo/error.hpp"
#include "geotomo/harness.hpp"

namespace geotomo {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string renderSvg(const ErrorTable& table, ErrorMetric metric) {
  const int q = table.metricIndex(metric);
  std::vector<double> xs, means, maxes;
  for (const auto& r : table.rows) {
    if (!(r.x > 0)) continue;
    xs.push_back(r.x);
    means.push_back(r.mean[q]);
    maxes.push_back(r.max[q]);
  }
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x0 = std::min(x0, std::log10(xs[i]));
    x1 = std::max(x1, std::log10(xs[i]));
    for (double v : {means[i], maxes[i]})
      if (v > 0 && std::isfinite(v)) {
        y0 = std::min(y0, std::log10(v));
        y1 = std::max(y1, std::log10(v));
      }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = -1, y1 = 0;
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  const double padX = 0.05 * (x1 - x0), padY = 0.08 * (y1 - y0);
  x0 -= padX, x1 += padX, y0 -= padY, y1 += padY;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double lx) { return kLeft + (lx - x0) / (x1 - x0) * pw; };
  auto py = [&](double ly) { return kTop + (y1 - ly) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double lx = x0 + (x1 - x0) * t / 4.0, ly = y0 + (y1 - y0) * t / 4.0;
    s << "<text class=\"tick\" x=\"" << num(px(lx)) << "\" y=\"" << num(kTop + ph + 16)
      << "\" font-size=\"11\" text-anchor=\"middle\">" << label(std::pow(10.0, lx)) << "</text>\n";
    s << "<text class=\"tick\" x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(ly) + 4)
      << "\" font-size=\"11\" text-anchor=\"end\">" << label(std::pow(10.0, ly)) << "</text>\n";
  }
  s << "<text class=\"xlabel\" x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
    << "\" font-size=\"13\" text-anchor=\"middle\">" << toString(table.sweep) << " (log scale)</text>\n";
  s << "<text class=\"ylabel\" x=\"15\" y=\"" << num(kTop + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\""
    << " transform=\"rotate(-90 15 " << num(kTop + ph / 2) << ")\">" << toString(metric) << " error (log scale)</text>\n";

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cx = px(std::log10(xs[i]));
    if (means[i] > 0 && std::isfinite(means[i]))
      s << "<circle class=\"mean\" cx=\"" << num(cx) << "\" cy=\"" << num(py(std::log10(means[i])))
        << "\" r=\"3.5\" fill=\"none\" stroke=\"#1f77b4\"/>\n";
    if (maxes[i] > 0 && std::isfinite(maxes[i])) {
      const double cy = py(std::log10(maxes[i]));
      s << "<path class=\"max\" d=\"M" << num(cx - 3.5) << ' ' << num(cy - 3.5) << " L" << num(cx + 3.5) << ' '
        << num(cy + 3.5) << " M" << num(cx - 3.5) << ' ' << num(cy + 3.5) << " L" << num(cx + 3.5) << ' '
        << num(cy - 3.5) << "\" stroke=\"#d62728\"/>\n";
    }
  }

  try {
    const RateFit f = fitRate(table, metric, Statistic::Mean);
    const double la = x0 + padX, lb = x1 - padX;
    const double ya = std::log10(f.amplitude) + f.exponent * la, yb = std::log10(f.amplitude) + f.exponent * lb;
    s << "<line class=\"fit\" x1=\"" << num(px(la)) << "\" y1=\"" << num(py(ya)) << "\" x2=\"" << num(px(lb))
      << "\" y2=\"" << num(py(yb)) << "\" stroke=\"#1f77b4\" stroke-dasharray=\"5,3\"/>\n";
    s << "<text class=\"legend\" x=\"" << num(kLeft + 8) << "\" y=\"" << num(kTop + 16)
      << "\" font-size=\"12\">slope " << label(f.exponent) << "</text>\n";
  } catch (const Error&) {
    // too few usable points for a line
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace geotomo
