#include "ilg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ilg {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

constexpr const char* kColors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e"};

struct Axis {
  double lo, hi;      // data range (log10 for log axes)
  double px0, px1;    // pixel range
  bool log;

  double map(double v) const {
    const double x = log ? std::log10(v) : v;
    return px0 + (x - lo) / (hi - lo) * (px1 - px0);
  }
};

void expand(double& lo, double& hi, double v) {
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

std::string marker_svg(double x, double y, int kind, const std::string& color) {
  char buf[256];
  switch (kind) {
    case 1:
      std::snprintf(buf, sizeof(buf),
                    "<circle cx='%s' cy='%s' r='3' fill='%s'/>", fmt4(x).c_str(),
                    fmt4(y).c_str(), color.c_str());
      break;
    case 2:
      std::snprintf(buf, sizeof(buf),
                    "<rect x='%s' y='%s' width='6' height='6' fill='none' stroke='%s'/>",
                    fmt4(x - 3).c_str(), fmt4(y - 3).c_str(), color.c_str());
      break;
    default:
      buf[0] = '\0';
  }
  return buf;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;
  std::string color;
  bool dashed;
  int marker;  // 0 none, 1 circle, 2 square
};

std::string render_plot(const std::vector<Series>& series, const std::string& xlabel,
                        const std::string& ylabel, bool logx, bool logy) {
  const double width = 760, height = 560;
  const double ml = 72, mr = 16, mt = 16, mb = 52;

  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.pts) {
      expand(xlo, xhi, logx ? std::log10(x) : x);
      expand(ylo, yhi, logy ? std::log10(y) : y);
    }
  }
  if (xlo > xhi) throw std::invalid_argument("render_plot: no data");
  if (xhi - xlo < 1e-9) xhi = xlo + 1.0;
  if (yhi - ylo < 1e-9) yhi = ylo + 1.0;
  const double pad_x = 0.03 * (xhi - xlo), pad_y = 0.05 * (yhi - ylo);
  Axis ax{xlo - pad_x, xhi + pad_x, ml, width - mr, logx};
  Axis ay{ylo - pad_y, yhi + pad_y, height - mb, mt, logy};

  std::string svg;
  svg += "<svg xmlns='http://www.w3.org/2000/svg' width='" + fmt(width) + "' height='" +
         fmt(height) + "' viewBox='0 0 " + fmt(width) + " " + fmt(height) + "'>\n";
  svg += "<rect width='100%' height='100%' fill='white'/>\n";
  svg += "<rect x='" + fmt4(ml) + "' y='" + fmt4(mt) + "' width='" + fmt4(width - ml - mr) +
         "' height='" + fmt4(height - mt - mb) +
         "' fill='none' stroke='#333' stroke-width='1'/>\n";

  // decade / linear ticks
  const auto tick_values = [](double lo, double hi, bool log) {
    std::vector<double> ticks;
    if (log) {
      for (int k = static_cast<int>(std::floor(lo)); k <= static_cast<int>(std::ceil(hi)); ++k)
        if (k >= lo && k <= hi) ticks.push_back(std::pow(10.0, k));
    } else {
      const double span = hi - lo;
      double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
      if (span / step > 8) step *= 2;
      for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
        ticks.push_back(v);
    }
    return ticks;
  };
  for (double v : tick_values(ax.lo, ax.hi, logx)) {
    const double px = ax.map(v);
    svg += "<line x1='" + fmt4(px) + "' y1='" + fmt4(height - mb) + "' x2='" + fmt4(px) +
           "' y2='" + fmt4(height - mb + 5) + "' stroke='#333'/>\n";
    svg += "<text x='" + fmt4(px) + "' y='" + fmt4(height - mb + 20) +
           "' font-size='12' text-anchor='middle' font-family='sans-serif'>" +
           (logx ? ("1e" + fmt(std::log10(v))) : fmt(v)) + "</text>\n";
  }
  for (double v : tick_values(ay.lo, ay.hi, logy)) {
    const double py = ay.map(v);
    svg += "<line x1='" + fmt4(ml - 5) + "' y1='" + fmt4(py) + "' x2='" + fmt4(ml) + "' y2='" +
           fmt4(py) + "' stroke='#333'/>\n";
    svg += "<text x='" + fmt4(ml - 8) + "' y='" + fmt4(py + 4) +
           "' font-size='12' text-anchor='end' font-family='sans-serif'>" +
           (logy ? ("1e" + fmt(std::log10(v))) : fmt(v)) + "</text>\n";
  }
  svg += "<text x='" + fmt4((ml + width - mr) / 2) + "' y='" + fmt4(height - 10) +
         "' font-size='13' text-anchor='middle' font-family='sans-serif'>" + xlabel +
         "</text>\n";
  svg += "<text x='16' y='" + fmt4((mt + height - mb) / 2) +
         "' font-size='13' text-anchor='middle' font-family='sans-serif' transform='rotate(-90 "
         "16 " +
         fmt4((mt + height - mb) / 2) + ")'>" + ylabel + "</text>\n";

  for (const auto& s : series) {
    std::string path;
    for (std::size_t i = 0; i < s.pts.size(); ++i) {
      path += (i == 0 ? "M" : "L");
      path += fmt4(ax.map(s.pts[i].first)) + " " + fmt4(ay.map(s.pts[i].second)) + " ";
    }
    svg += "<path d='" + path + "' fill='none' stroke='" + s.color + "' stroke-width='1.5'" +
           (s.dashed ? " stroke-dasharray='6 4'" : "") + "/>\n";
    if (s.marker) {
      for (const auto& [x, y] : s.pts)
        svg += marker_svg(ax.map(x), ay.map(y), s.marker, s.color) + "\n";
    }
  }

  double ly = mt + 18;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    const double lx = width - mr - 180;
    svg += "<line x1='" + fmt4(lx) + "' y1='" + fmt4(ly - 4) + "' x2='" + fmt4(lx + 26) +
           "' y2='" + fmt4(ly - 4) + "' stroke='" + s.color + "' stroke-width='1.5'" +
           (s.dashed ? " stroke-dasharray='6 4'" : "") + "/>\n";
    svg += "<text x='" + fmt4(lx + 32) + "' y='" + fmt4(ly) +
           "' font-size='12' font-family='sans-serif'>" + s.label + "</text>\n";
    ly += 16;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

std::string record_csv(const RunRecord& record) {
  std::string out = "level,n_elements,n_dofs,iterations,estimator,h1_error,energy\n";
  for (const auto& lvl : record.levels) {
    out += std::to_string(lvl.level) + "," + std::to_string(lvl.n_elements) + "," +
           std::to_string(lvl.n_dofs) + "," + std::to_string(lvl.iterations) + "," +
           fmt(lvl.estimator) + "," + fmt(lvl.h1_error) + "," + fmt(lvl.energy) + "\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

void write_record_csv(const RunRecord& record, const std::filesystem::path& path) {
  write_file_atomic(path, record_csv(record));
}

void write_convergence_svg(const std::vector<NamedRecord>& records,
                           const std::filesystem::path& path) {
  std::vector<Series> series;
  double ref_anchor_x = 0.0, ref_anchor_y = 0.0, xmax = 0.0;
  int color = 0;
  for (const auto& nr : records) {
    Series est{nr.label + " estimator", {}, kColors[color % 5], false, 1};
    Series err{nr.label + " error", {}, kColors[color % 5], true, 2};
    for (const auto& lvl : nr.record->levels) {
      if (lvl.estimator > 0.0) est.pts.push_back({double(lvl.n_elements), lvl.estimator});
      if (lvl.h1_error > 0.0) err.pts.push_back({double(lvl.n_elements), lvl.h1_error});
    }
    if (!est.pts.empty()) {
      if (ref_anchor_x == 0.0) {
        ref_anchor_x = est.pts.front().first;
        ref_anchor_y = est.pts.front().second;
      }
      xmax = std::max(xmax, est.pts.back().first);
    }
    series.push_back(std::move(est));
    series.push_back(std::move(err));
    ++color;
  }
  if (ref_anchor_x > 0.0 && xmax > ref_anchor_x) {
    Series ref{"|T|^(-1/2)", {}, "#888888", true, 0};
    const double c = ref_anchor_y * std::sqrt(ref_anchor_x);
    for (double x = ref_anchor_x; x <= xmax * 1.0001; x *= 1.5)
      ref.pts.push_back({x, c / std::sqrt(x)});
    ref.pts.push_back({xmax, c / std::sqrt(xmax)});
    series.push_back(std::move(ref));
  }
  write_file_atomic(path, render_plot(series, "elements", "estimator / error", true, true));
}

void write_iterations_svg(const std::vector<NamedRecord>& records,
                          const std::filesystem::path& path) {
  std::vector<Series> series;
  int color = 0;
  for (const auto& nr : records) {
    Series s{nr.label, {}, kColors[color % 5], false, 1};
    for (const auto& lvl : nr.record->levels)
      s.pts.push_back({double(lvl.n_elements), double(lvl.iterations)});
    series.push_back(std::move(s));
    ++color;
  }
  write_file_atomic(path, render_plot(series, "elements", "linearization steps", true, false));
}

}  // namespace ilg
