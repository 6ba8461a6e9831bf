#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pmb {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y, yerr;  // yerr optional (empty or same size)
};

struct PlotOptions {
  std::string title, xlabel, ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<std::string> footnotes;
};

namespace detail {

inline const char* plot_color(size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % 8];
}

inline std::string fnum(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

// Self-contained line chart. Wide enough for the regret sweeps, the distortion
// profiles and the beta-ratio diagnostics; not a general plotting library.
inline std::string line_chart_svg(const std::vector<PlotSeries>& series,
                                  const PlotOptions& opt) {
  if (series.empty()) throw DomainError("plot: no series");
  const double W = 860, H = 520, L = 78, R = 260, Tm = 52, B = 64;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return opt.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.logy ? std::log10(v) : v; };
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      double xv = tx(s.x[i]);
      double lo = s.y[i], hi = s.y[i];
      if (!s.yerr.empty()) {
        lo -= s.yerr[i];
        hi += s.yerr[i];
      }
      if (opt.logy && lo <= 0) lo = s.y[i];
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, ty(lo));
      ymax = std::max(ymax, ty(hi));
    }
  }
  if (!(xmax > xmin)) {
    xmax = xmin + 1;
  }
  if (!(ymax > ymin)) {
    ymax = ymin + 1;
  }
  double ypad = 0.06 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double v) { return L + (tx(v) - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - ymin) / (ymax - ymin) * (H - Tm - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
     << "\" font-family=\"Helvetica,Arial,sans-serif\" font-size=\"13\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"28\" font-size=\"17\" font-weight=\"bold\">" << opt.title
     << "</text>\n";

  // axes
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << Tm << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";

  // x ticks
  std::vector<double> xticks;
  if (opt.logx) {
    for (int e = static_cast<int>(std::floor(xmin)); e <= static_cast<int>(std::ceil(xmax));
         ++e) {
      if (e >= xmin - 1e-9 && e <= xmax + 1e-9) xticks.push_back(e);
    }
  } else {
    for (int i = 0; i <= 5; ++i) xticks.push_back(xmin + (xmax - xmin) * i / 5.0);
  }
  for (double t : xticks) {
    double x = L + (t - xmin) / (xmax - xmin) * (W - L - R);
    os << "<line x1=\"" << x << "\" y1=\"" << H - B << "\" x2=\"" << x << "\" y2=\"" << H - B + 5
       << "\" stroke=\"black\"/>\n";
    double shown = opt.logx ? std::pow(10.0, t) : t;
    os << "<text x=\"" << x << "\" y=\"" << H - B + 20 << "\" text-anchor=\"middle\">"
       << detail::fnum(shown) << "</text>\n";
  }
  // y ticks
  for (int i = 0; i <= 5; ++i) {
    double t = ymin + (ymax - ymin) * i / 5.0;
    double y = H - B - (t - ymin) / (ymax - ymin) * (H - Tm - B);
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    double shown = opt.logy ? std::pow(10.0, t) : t;
    os << "<text x=\"" << L - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << detail::fnum(shown) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 18
     << "\" text-anchor=\"middle\">" << opt.xlabel << "</text>\n";
  os << "<text x=\"20\" y=\"" << (Tm + H - B) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << (Tm + H - B) / 2 << ")\">"
     << opt.ylabel << "</text>\n";

  // series
  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = detail::plot_color(si);
    std::ostringstream pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      pts << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\""
       << pts.str() << "\"/>\n";
    for (size_t i = 0; i < s.x.size(); ++i) {
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.6\" fill=\""
         << color << "\"/>\n";
      if (!s.yerr.empty() && s.yerr[i] > 0) {
        double lo = s.y[i] - s.yerr[i], hi = s.y[i] + s.yerr[i];
        if (opt.logy && lo <= 0) lo = s.y[i];
        os << "<line x1=\"" << px(s.x[i]) << "\" y1=\"" << py(lo) << "\" x2=\"" << px(s.x[i])
           << "\" y2=\"" << py(hi) << "\" stroke=\"" << color << "\" stroke-width=\"1.2\"/>\n";
      }
    }
    double ly = Tm + 18.0 * si;
    os << "<line x1=\"" << W - R + 16 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 44
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 50 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  for (size_t i = 0; i < opt.footnotes.size(); ++i) {
    os << "<text x=\"" << W - R + 16 << "\" y=\""
       << Tm + 18.0 * series.size() + 22 + 16.0 * i << "\" font-size=\"11\" fill=\"#444\">"
       << opt.footnotes[i] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pmb
