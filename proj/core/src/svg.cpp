#include "maptest/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace maptest {

namespace {

struct Series {
  const char* name;
  std::optional<double> SweepRecord::*column;
  const char* color;
};

const Series probability_series[] = {
    {"exact_unreg", &SweepRecord::exact_unreg, "#7f7f7f"},
    {"exact_oracle_map", &SweepRecord::exact_oracle_map, "#1f77b4"},
    {"exact_apriori_map", &SweepRecord::exact_apriori_map, "#2ca02c"},
    {"bound_xi", &SweepRecord::bound_xi, "#9467bd"},
    {"emp_2sample", &SweepRecord::emp_2sample, "#ff7f0e"},
    {"emp_1sample", &SweepRecord::emp_1sample, "#d62728"},
    {"emp_level", &SweepRecord::emp_level, "#8c564b"},
};

const Series gamma_series[] = {
    {"gamma_mean", &SweepRecord::gamma_mean, "#d62728"},
    {"gamma_q16", &SweepRecord::gamma_q16, "#ff9896"},
    {"gamma_q84", &SweepRecord::gamma_q84, "#ff9896"},
};

constexpr double width = 720.0;
constexpr double panel_h = 300.0;
constexpr double left = 70.0;
constexpr double right = 190.0;
constexpr double top = 40.0;
constexpr double gap = 50.0;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool has_column(const SweepResult& r, std::optional<double> SweepRecord::*c) {
  return std::any_of(r.records.begin(), r.records.end(), [&](const SweepRecord& x) { return (x.*c).has_value(); });
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

struct Panel {
  double y0;
  double lo;  // value range after transform
  double hi;
  bool log_y;
};

}  // namespace

std::string render_svg(const SweepResult& result, const std::string& title) {
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (const auto& r : result.records)
    if (r.sigma > 0.0) {
      smin = std::min(smin, r.sigma);
      smax = std::max(smax, r.sigma);
    }
  if (!(smax > 0.0)) smin = smax = 1.0;
  double lx0 = std::floor(std::log10(smin)), lx1 = std::ceil(std::log10(smax));
  if (lx1 <= lx0) lx1 = lx0 + 1.0;
  const double plot_w = width - left - right;
  // Descending sigma: largest on the left.
  auto xpos = [&](double sigma) { return left + (lx1 - std::log10(sigma)) / (lx1 - lx0) * plot_w; };

  bool any_gamma = false;
  for (const auto& s : gamma_series) any_gamma = any_gamma || has_column(result, s.column);

  std::vector<Panel> panels{{top, 0.0, 1.0, false}};
  if (any_gamma) {
    double g0 = std::numeric_limits<double>::infinity(), g1 = -g0;
    for (const auto& s : gamma_series)
      for (const auto& r : result.records)
        if (r.*s.column && *(r.*s.column) > 0.0) {
          g0 = std::min(g0, std::log10(*(r.*s.column)));
          g1 = std::max(g1, std::log10(*(r.*s.column)));
        }
    if (!std::isfinite(g0)) g0 = g1 = 0.0;
    g0 = std::floor(g0);
    g1 = std::ceil(g1);
    if (g1 <= g0) g1 = g0 + 1.0;
    panels.push_back({top + panel_h + gap, g0, g1, true});
  }
  const double height = top + panels.size() * panel_h + (panels.size() - 1) * gap + 50.0;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt("%.0f", width) +
         "\" height=\"" + fmt("%.0f", height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt("%.1f", left) + "\" y=\"20\" font-size=\"14\">" + escape(title) + "</text>\n";

  auto draw_panel = [&](const Panel& p, const Series* series, std::size_t count, const char* ylabel) {
    auto ypos = [&](double v) {
      const double t = p.log_y ? std::log10(v) : v;
      return p.y0 + (1.0 - (t - p.lo) / (p.hi - p.lo)) * panel_h;
    };
    out += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", p.y0) + "\" width=\"" + fmt("%.1f", plot_w) +
           "\" height=\"" + fmt("%.1f", panel_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = lx0; e <= lx1 + 0.5; e += 1.0) {
      const double x = left + (lx1 - e) / (lx1 - lx0) * plot_w;
      out += "<line x1=\"" + fmt("%.1f", x) + "\" y1=\"" + fmt("%.1f", p.y0) + "\" x2=\"" + fmt("%.1f", x) +
             "\" y2=\"" + fmt("%.1f", p.y0 + panel_h) + "\" stroke=\"#dddddd\"/>\n";
      out += "<text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", p.y0 + panel_h + 14) +
             "\" text-anchor=\"middle\">1e" + fmt("%.0f", e) + "</text>\n";
    }
    const int ticks = p.log_y ? static_cast<int>(p.hi - p.lo) : 5;
    for (int i = 0; i <= ticks; ++i) {
      const double t = p.lo + (p.hi - p.lo) * i / ticks;
      const double y = p.y0 + (1.0 - (t - p.lo) / (p.hi - p.lo)) * panel_h;
      out += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", y) + "\" x2=\"" +
             fmt("%.1f", left + plot_w) + "\" y2=\"" + fmt("%.1f", y) + "\" stroke=\"#eeeeee\"/>\n";
      const std::string label = p.log_y ? "1e" + fmt("%.0f", t) : fmt("%.1f", t);
      out += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", y + 4) + "\" text-anchor=\"end\">" +
             label + "</text>\n";
    }
    out += "<text x=\"16\" y=\"" + fmt("%.1f", p.y0 + panel_h / 2) + "\" transform=\"rotate(-90 16 " +
           fmt("%.1f", p.y0 + panel_h / 2) + ")\" text-anchor=\"middle\">" + ylabel + "</text>\n";
    out += "<text x=\"" + fmt("%.1f", left + plot_w / 2) + "\" y=\"" + fmt("%.1f", p.y0 + panel_h + 30) +
           "\" text-anchor=\"middle\">sigma</text>\n";

    int legend = 0;
    for (std::size_t s = 0; s < count; ++s) {
      const Series& se = series[s];
      if (!has_column(result, se.column)) continue;
      std::string pts;
      for (const auto& r : result.records) {
        const auto& v = r.*se.column;
        if (!v || !(r.sigma > 0.0) || !std::isfinite(*v) || (p.log_y && !(*v > 0.0))) continue;
        if (!pts.empty()) pts += ' ';
        pts += fmt("%.2f", xpos(r.sigma)) + "," + fmt("%.2f", ypos(*v));
      }
      out += "<polyline fill=\"none\" stroke=\"" + std::string(se.color) + "\" stroke-width=\"1.5\" points=\"" + pts +
             "\"><title>" + se.name + "</title></polyline>\n";
      const double ly = p.y0 + 12 + 16 * legend++;
      out += "<line x1=\"" + fmt("%.1f", left + plot_w + 10) + "\" y1=\"" + fmt("%.1f", ly - 4) + "\" x2=\"" +
             fmt("%.1f", left + plot_w + 30) + "\" y2=\"" + fmt("%.1f", ly - 4) + "\" stroke=\"" + se.color +
             "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + fmt("%.1f", left + plot_w + 35) + "\" y=\"" + fmt("%.1f", ly) + "\">" + se.name +
             "</text>\n";
    }
  };

  draw_panel(panels[0], probability_series, std::size(probability_series), "probability");
  if (any_gamma) draw_panel(panels[1], gamma_series, std::size(gamma_series), "gamma");
  out += "</svg>\n";
  return out;
}

}  // namespace maptest
