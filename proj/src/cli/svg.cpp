#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "locfade/cli.hpp"

namespace locfade::cli {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 80, kRight = 220, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

// Auxiliary series live in the CSV but would wreck the plot's scale.
bool plotted(const std::string& s) {
  auto ends = [&](const char* suf) {
    const std::string t = suf;
    return s.size() >= t.size() && s.compare(s.size() - t.size(), t.size(), t) == 0;
  };
  return s.rfind("ratio_", 0) != 0 && s.rfind("max_", 0) != 0 && s != "k_db" && !ends("/k_star") &&
         !ends("/mc_pfa");
}

struct Axis {
  bool log = false;
  double lo = 0, hi = 1;  // in transformed units
  double pixel_lo = 0, pixel_hi = 1;

  double t(double v) const { return log ? std::log10(v) : v; }
  double map(double v) const { return pixel_lo + (t(v) - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

  void fit(double mn, double mx) {
    lo = t(mn);
    hi = t(mx);
    if (log) {
      lo = std::floor(lo);
      hi = std::ceil(hi);
      if (hi <= lo) hi = lo + 1;
    } else {
      if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
      }
      const double step = nice_step();
      lo = std::floor(lo / step) * step;
      hi = std::ceil(hi / step) * step;
    }
  }

  double nice_step() const {
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 2.5, 5.0}) {
      if (raw <= f * mag * 1.0000001) return f * mag;
    }
    return 10.0 * mag;
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int span = static_cast<int>(hi - lo);
      const int every = std::max(1, span / 8 + (span % 8 != 0 ? 1 : 0));
      for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += every) out.push_back(std::pow(10.0, e));
    } else {
      const double step = nice_step();
      for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-9 * step) break;
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
      }
    }
    return out;
  }
};

}  // namespace

std::string render_svg(const ExperimentResult& result) {
  const auto rows = result.sorted_rows();
  Axis ax, ay;
  ax.log = result.log_x;
  ay.log = result.log_y;
  ax.pixel_lo = kLeft;
  ax.pixel_hi = kWidth - kRight;
  ay.pixel_lo = kHeight - kBottom;
  ay.pixel_hi = kTop;

  std::map<std::string, std::vector<const ResultRow*>> groups;
  std::vector<std::string> order;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& r : rows) {
    if (!plotted(r.series) || !ax.usable(r.x) || !ay.usable(r.y)) continue;
    if (!groups.count(r.series)) order.push_back(r.series);
    groups[r.series].push_back(&r);
    xmin = std::min(xmin, r.x);
    xmax = std::max(xmax, r.x);
    ymin = std::min(ymin, r.y);
    ymax = std::max(ymax, r.y);
  }
  if (order.empty()) {
    xmin = ymin = ax.log ? 1.0 : 0.0;
    xmax = ymax = ax.log ? 10.0 : 1.0;
  }
  ax.fit(xmin, xmax);
  ay.fit(ymin, ymax);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) + "\" height=\"" + f2(kHeight) +
       "\" viewBox=\"0 0 " + f2(kWidth) + " " + f2(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + f2(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(result.experiment) + "</text>\n";

  // frame and grid
  s += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double v : ax.ticks()) {
    const double px = ax.map(v);
    s += "<line x1=\"" + f2(px) + "\" y1=\"" + f2(ay.pixel_hi) + "\" x2=\"" + f2(px) + "\" y2=\"" + f2(ay.pixel_lo) + "\"/>\n";
  }
  for (double v : ay.ticks()) {
    const double py = ay.map(v);
    s += "<line x1=\"" + f2(ax.pixel_lo) + "\" y1=\"" + f2(py) + "\" x2=\"" + f2(ax.pixel_hi) + "\" y2=\"" + f2(py) + "\"/>\n";
  }
  s += "</g>\n";
  s += "<rect x=\"" + f2(kLeft) + "\" y=\"" + f2(kTop) + "\" width=\"" + f2(ax.pixel_hi - ax.pixel_lo) +
       "\" height=\"" + f2(ay.pixel_lo - ay.pixel_hi) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<g text-anchor=\"middle\">\n";
  for (double v : ax.ticks()) {
    s += "<text x=\"" + f2(ax.map(v)) + "\" y=\"" + f2(ay.pixel_lo + 16) + "\">" + label(v) + "</text>\n";
  }
  s += "</g>\n<g text-anchor=\"end\">\n";
  for (double v : ay.ticks()) {
    s += "<text x=\"" + f2(kLeft - 6) + "\" y=\"" + f2(ay.map(v) + 4) + "\">" + label(v) + "</text>\n";
  }
  s += "</g>\n";
  s += "<text x=\"" + f2((ax.pixel_lo + ax.pixel_hi) / 2) + "\" y=\"" + f2(kHeight - 18) +
       "\" text-anchor=\"middle\">" + escape(result.x_label) + "</text>\n";
  s += "<text transform=\"translate(18 " + f2((ay.pixel_lo + ay.pixel_hi) / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(result.y_label) + "</text>\n";

  std::size_t idx = 0;
  for (const auto& name : order) {
    const char* color = kPalette[idx % std::size(kPalette)];
    const bool dashed = name.find("analytic") != std::string::npos || name.find("closed") != std::string::npos;
    const auto& pts = groups[name];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"" +
         (dashed ? " stroke-dasharray=\"6 3\"" : "") + " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      s += (i ? " " : "") + f2(ax.map(pts[i]->x)) + "," + f2(ay.map(pts[i]->y));
    }
    s += "\"/>\n";
    for (const auto* r : pts) {
      if (!r->ci95) continue;
      const double px = ax.map(r->x);
      double lo = r->y - *r->ci95, hi = r->y + *r->ci95;
      if (ay.log && lo <= 0.0) lo = std::pow(10.0, ay.lo);
      s += "<line stroke=\"" + std::string(color) + "\" x1=\"" + f2(px) + "\" y1=\"" + f2(ay.map(lo)) + "\" x2=\"" +
           f2(px) + "\" y2=\"" + f2(ay.map(hi)) + "\"/>\n";
    }
    const double ly = kTop + 10 + 16.0 * static_cast<double>(idx);
    const double lx = kWidth - kRight + 12;
    s += "<line stroke=\"" + std::string(color) + "\" stroke-width=\"2\"" + (dashed ? " stroke-dasharray=\"6 3\"" : "") +
         " x1=\"" + f2(lx) + "\" y1=\"" + f2(ly) + "\" x2=\"" + f2(lx + 24) + "\" y2=\"" + f2(ly) + "\"/>\n";
    s += "<text x=\"" + f2(lx + 30) + "\" y=\"" + f2(ly + 4) + "\">" + escape(name) + "</text>\n";
    ++idx;
  }
  s += "</svg>\n";
  return s;
}

void emit_svg(const ExperimentResult& result, const std::filesystem::path& path) {
  if (result.rows.empty()) throw IoError("emit_svg: empty result");
  write_atomic(path, render_svg(result));
}

}  // namespace locfade::cli
