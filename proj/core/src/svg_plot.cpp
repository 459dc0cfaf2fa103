#include "rmimo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmimo/errors.hpp"

namespace rmimo {
namespace {

constexpr double kWidth = 860, kHeight = 540;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 58;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi <= lo) hi = lo + 1.0;
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

// Tick step of the form {1, 2, 5} * 10^k giving 4-8 ticks.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= mult * mag) return mult * mag;
  }
  return 10.0 * mag;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Range xr, yr;
  bool first = true;
  for (const PlotSeries& s : spec.series) {
    if (s.x.size() != s.y.size())
      throw DimensionError("plot series x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xr = {s.x[i], s.x[i]};
        yr = {s.y[i], s.y[i]};
        first = false;
      }
      xr.include(s.x[i]);
      yr.include(s.y[i]);
      if (!s.yerr.empty() && i < s.yerr.size()) {
        yr.include(s.y[i] - s.yerr[i]);
        yr.include(s.y[i] + s.yerr[i]);
      }
    }
  }
  for (const PlotHLine& h : spec.hlines) yr.include(h.y);
  xr.pad();
  yr.pad();

  auto px = [&](double x) {
    const double t = spec.log_x
                         ? (std::log10(x) - std::log10(xr.lo)) /
                               (std::log10(xr.hi) - std::log10(xr.lo))
                         : (x - xr.lo) / (xr.hi - xr.lo);
    return kLeft + t * (kWidth - kLeft - kRight);
  };
  auto py = [&](double y) {
    const double t = (y - yr.lo) / (yr.hi - yr.lo);
    return kHeight - kBottom - t * (kHeight - kTop - kBottom);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Grid and ticks.
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  const double xstep = nice_step(xr.hi - xr.lo);
  for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-9 * xstep;
       x += xstep) {
    const double p = px(x);
    out << "<line x1=\"" << num(p) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(p) << "\" y2=\"" << num(kHeight - kBottom)
        << "\" stroke=\"#e3e3e3\"/>\n";
    out << "<text x=\"" << num(p) << "\" y=\"" << num(kHeight - kBottom + 18)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo);
  for (double y = std::ceil(yr.lo / ystep) * ystep; y <= yr.hi + 1e-9 * ystep;
       y += ystep) {
    const double p = py(y);
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(p) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(p)
        << "\" stroke=\"#e3e3e3\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(p + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "</g>\n";

  // Axes frame.
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
      << num(kWidth - kLeft - kRight) << "\" height=\""
      << num(kHeight - kTop - kBottom)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (const PlotHLine& h : spec.hlines) {
    const double p = py(h.y);
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(p) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(p) << "\" stroke=\""
        << h.color << "\" stroke-dasharray=\"2 4\"/>\n";
    if (!h.label.empty()) {
      out << "<text x=\"" << num(kWidth - kRight - 6) << "\" y=\""
          << num(p - 5)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\" fill=\""
          << h.color << "\">" << escape(h.label) << "</text>\n";
    }
  }

  for (const PlotSeries& s : spec.series) {
    if (!s.markers && s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.8\"";
      if (s.dashed) out << " stroke-dasharray=\"6 4\"";
      out << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
      out << "\"/>\n";
    }
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double cx = px(s.x[i]);
        const double cy = py(s.y[i]);
        if (!s.yerr.empty() && s.yerr[i] > 0) {
          const double y0 = py(s.y[i] - s.yerr[i]);
          const double y1 = py(s.y[i] + s.yerr[i]);
          out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(y0)
              << "\" x2=\"" << num(cx) << "\" y2=\"" << num(y1)
              << "\" stroke=\"" << s.color << "\"/>\n";
          for (double ye : {y0, y1})
            out << "<line x1=\"" << num(cx - 3) << "\" y1=\"" << num(ye)
                << "\" x2=\"" << num(cx + 3) << "\" y2=\"" << num(ye)
                << "\" stroke=\"" << s.color << "\"/>\n";
        }
        out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
            << "\" r=\"3.2\" fill=\"" << s.color << "\"/>\n";
      }
    }
  }

  // Legend.
  double ly = kTop + 14;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const PlotSeries& s : spec.series) {
    const double lx = kLeft + 12;
    if (s.markers) {
      out << "<circle cx=\"" << num(lx + 11) << "\" cy=\"" << num(ly - 4)
          << "\" r=\"3.2\" fill=\"" << s.color << "\"/>\n";
    } else {
      out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4)
          << "\" x2=\"" << num(lx + 22) << "\" y2=\"" << num(ly - 4)
          << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
      if (s.dashed) out << " stroke-dasharray=\"6 4\"";
      out << "/>\n";
    }
    out << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly)
        << "\">" << escape(s.label) << "</text>\n";
    ly += 17;
  }
  out << "</g>\n";

  // Labels.
  out << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"22\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\" "
         "font-weight=\"bold\">"
      << escape(spec.title) << "</text>\n";
  out << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\""
      << num(kHeight - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << num((kTop + kHeight - kBottom) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 "
      << num((kTop + kHeight - kBottom) / 2) << ")\">" << escape(spec.y_label)
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::filesystem::path& path, const PlotSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << render_svg(spec);
}

}  // namespace rmimo
