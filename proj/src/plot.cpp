#include "slungload/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace slungload {
namespace {

constexpr double kWidth = 820.0;
constexpr double kPanelHeight = 260.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 28.0;
constexpr double kBottom = 42.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s == "-0.00" || s == "-0") s.erase(0, 1);
  return s;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

// Expands degenerate ranges and snaps the ends to the tick grid.
Range padded(Range r) {
  if (!r.valid()) return {0.0, 1.0};
  if (r.hi - r.lo < 1e-9 * std::max(1.0, std::abs(r.hi))) {
    const double pad = std::max(0.5, 0.1 * std::abs(r.hi));
    r.lo -= pad;
    r.hi += pad;
  }
  const double step = nice_step(r.hi - r.lo);
  return {std::floor(r.lo / step) * step, std::ceil(r.hi / step) * step};
}

double panel_height(const Panel& panel) {
  return panel.equal_axes ? 2.0 * kPanelHeight : kPanelHeight;
}

void render_panel(std::ostringstream& svg, const Panel& panel, double y0) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = panel_height(panel) - kTop - kBottom;
  const double ox = kLeft, oy = y0 + kTop;

  Range xr, yr;
  for (const Series& s : panel.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr = padded(xr);
  yr = padded(yr);
  if (panel.equal_axes) {
    // same metres per pixel on both axes, centred
    const double scale = std::max((xr.hi - xr.lo) / pw, (yr.hi - yr.lo) / ph);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr = {cx - 0.5 * scale * pw, cx + 0.5 * scale * pw};
    yr = {cy - 0.5 * scale * ph, cy + 0.5 * scale * ph};
  }
  auto px = [&](double x) { return ox + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return oy + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  svg << "<g>\n";
  svg << "<text x=\"" << fixed(ox + pw / 2) << "\" y=\"" << fixed(y0 + 18)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(panel.title)
      << "</text>\n";
  svg << "<rect x=\"" << fixed(ox) << "\" y=\"" << fixed(oy) << "\" width=\""
      << fixed(pw) << "\" height=\"" << fixed(ph)
      << "\" fill=\"none\" stroke=\"#000\"/>\n";

  auto ticks = [](Range r) {
    std::vector<double> out;
    const double step = nice_step(r.hi - r.lo);
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
      out.push_back(v);
    }
    return out;
  };
  for (double v : ticks(xr)) {
    const double x = px(v);
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(oy) << "\" x2=\""
        << fixed(x) << "\" y2=\"" << fixed(oy + ph)
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << fixed(x) << "\" y=\""
        << fixed(oy + ph + 15) << "\" text-anchor=\"middle\" font-size=\"11\">"
        << tick_label(v) << "</text>\n";
  }
  for (double v : ticks(yr)) {
    const double y = py(v);
    svg << "<line x1=\"" << fixed(ox) << "\" y1=\"" << fixed(y) << "\" x2=\""
        << fixed(ox + pw) << "\" y2=\"" << fixed(y)
        << "\" stroke=\"#ddd\"/>\n<text x=\"" << fixed(ox - 6) << "\" y=\""
        << fixed(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
        << tick_label(v) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(ox + pw / 2) << "\" y=\"" << fixed(oy + ph + 32)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.xlabel)
      << "</text>\n";
  svg << "<text x=\"" << fixed(ox - 52) << "\" y=\"" << fixed(oy + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
      << fixed(ox - 52) << " " << fixed(oy + ph / 2) << ")\">"
      << escape(panel.ylabel) << "</text>\n";

  // desired (dashed) curves reuse the colours of the actual ones in order
  std::size_t solid = 0, dashed = 0;
  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const Series& s = panel.series[k];
    const std::size_t slot = s.dashed ? dashed++ : solid++;
    const char* color = kPalette[slot % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.2\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "")
        << " points=\"";
    const std::size_t count = std::min(s.x.size(), s.y.size());
    bool first = true;
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg << (first ? "" : " ") << fixed(px(s.x[i])) << "," << fixed(py(s.y[i]));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = oy + 12 + 15 * static_cast<double>(k);
    svg << "<line x1=\"" << fixed(ox + pw + 10) << "\" y1=\"" << fixed(ly - 4)
        << "\" x2=\"" << fixed(ox + pw + 34) << "\" y2=\"" << fixed(ly - 4)
        << "\" stroke=\"" << color << "\""
        << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    svg << "<text x=\"" << fixed(ox + pw + 40) << "\" y=\"" << fixed(ly)
        << "\" font-size=\"11\">" << escape(s.name) << "</text>\n";
  }
  svg << "</g>\n";
}

// Series are sampled at the thinned record indices.
class Builder {
 public:
  Builder(const SimLog& log) : log_(log), idx_(thin_indices(log.records.size())) {
    for (std::size_t i : idx_) t_.push_back(log.records[i].t);
  }

  std::vector<double> collect(const std::function<double(const LogRecord&)>& f) const {
    std::vector<double> out;
    out.reserve(idx_.size());
    for (std::size_t i : idx_) out.push_back(f(log_.records[i]));
    return out;
  }

  Series vs_time(const std::string& name,
                 const std::function<double(const LogRecord&)>& f,
                 bool dashed = false) const {
    return {name, t_, collect(f), dashed};
  }

  Series xy(const std::string& name,
            const std::function<double(const LogRecord&)>& fx,
            const std::function<double(const LogRecord&)>& fy,
            bool dashed = false) const {
    return {name, collect(fx), collect(fy), dashed};
  }

  int n() const { return log_.vehicle_count; }

 private:
  const SimLog& log_;
  std::vector<std::size_t> idx_;
  std::vector<double> t_;
};

const char* const kAxis[] = {"x", "y", "z"};

}  // namespace

std::vector<std::size_t> thin_indices(std::size_t count, std::size_t max_points) {
  std::vector<std::size_t> out;
  if (count == 0 || max_points == 0) return out;
  if (max_points == 1) return {count - 1};
  // stride = ceil((count-1)/(max-1)) leaves room for the final sample
  const std::size_t stride =
      count <= max_points ? 1 : (count - 1 + max_points - 2) / (max_points - 1);
  for (std::size_t i = 0; i < count; i += stride) out.push_back(i);
  if (out.back() != count - 1) out.push_back(count - 1);
  return out;
}

std::string render_svg(const Figure& figure) {
  std::ostringstream svg;
  double height = 0.0;
  for (const Panel& p : figure.panels) height += panel_height(p);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
      << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 "
      << fixed(kWidth, 0) << " " << fixed(height, 0)
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  double y0 = 0.0;
  for (const Panel& p : figure.panels) {
    render_panel(svg, p, y0);
    y0 += panel_height(p);
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_dat(const Figure& figure) {
  std::ostringstream out;
  char buf[64];
  out << "# " << figure.name << "\n";
  for (const Panel& panel : figure.panels) {
    for (const Series& s : panel.series) {
      out << "# " << panel.title << ": " << s.name << (s.dashed ? " (desired)" : "")
          << "\n";
      const std::size_t count = std::min(s.x.size(), s.y.size());
      for (std::size_t i = 0; i < count; ++i) {
        std::snprintf(buf, sizeof buf, "%.9g %.9g\n", s.x[i], s.y[i]);
        out << buf;
      }
      out << "\n\n";
    }
  }
  return out.str();
}

std::vector<Figure> figure_set(const SimLog& log) {
  const Builder b(log);
  const int n = b.n();
  std::vector<Figure> figs;

  {
    Figure f{"load_position", {}};
    Panel pos{"Load position", "t (s)", "x_L (m)", {}};
    Panel err{"Load error", "t (s)", "x_e (m)", {}};
    for (int a = 0; a < 3; ++a) {
      pos.series.push_back(b.vs_time(std::string("x_L ") + kAxis[a],
                                     [a](const LogRecord& r) { return r.load_position(a); }));
    }
    for (int a = 0; a < 3; ++a) {
      pos.series.push_back(b.vs_time(std::string("x_Ld ") + kAxis[a],
                                     [a](const LogRecord& r) { return r.ref_position(a); },
                                     true));
      err.series.push_back(b.vs_time(std::string("x_e ") + kAxis[a],
                                     [a](const LogRecord& r) { return r.load_error(a); }));
    }
    err.series.push_back(b.vs_time("|x_e|", [](const LogRecord& r) { return r.load_error.norm(); }));
    f.panels = {pos, err};
    figs.push_back(f);
  }

  {
    Figure f{"uav_positions", {}};
    for (int a = 0; a < 3; ++a) {
      Panel p{std::string("UAV positions, ") + kAxis[a], "t (s)",
              std::string(kAxis[a]) + " (m)", {}};
      for (int i = 0; i < n; ++i) {
        p.series.push_back(b.vs_time("x_" + std::to_string(i + 1), [i, a](const LogRecord& r) {
          return r.vehicles[i].position(a);
        }));
      }
      for (int i = 0; i < n; ++i) {
        p.series.push_back(b.vs_time("x_" + std::to_string(i + 1) + "d",
                                     [i, a](const LogRecord& r) {
                                       return r.vehicles[i].position_desired(a);
                                     },
                                     true));
      }
      f.panels.push_back(p);
    }
    figs.push_back(f);
  }

  auto per_vehicle = [&](const std::string& name, const std::string& title,
                         const std::string& unit,
                         const std::function<void(Panel&, int)>& fill) {
    Figure f{name, {}};
    for (int i = 0; i < n; ++i) {
      Panel p{title + ", UAV " + std::to_string(i + 1), "t (s)", unit, {}};
      fill(p, i);
      f.panels.push_back(p);
    }
    figs.push_back(f);
  };

  per_vehicle("quaternions", "Attitude quaternion", "q", [&](Panel& p, int i) {
    for (int c = 0; c < 4; ++c) {
      p.series.push_back(b.vs_time("q" + std::to_string(c), [i, c](const LogRecord& r) {
        return r.vehicles[i].attitude(c);
      }));
    }
    for (int c = 0; c < 4; ++c) {
      p.series.push_back(b.vs_time("q" + std::to_string(c) + "d",
                                   [i, c](const LogRecord& r) {
                                     return r.vehicles[i].attitude_desired(c);
                                   },
                                   true));
    }
  });

  per_vehicle("tensions", "Cable tension T_i a_i", "N", [&](Panel& p, int i) {
    for (int a = 0; a < 3; ++a) {
      p.series.push_back(b.vs_time(std::string("T a ") + kAxis[a], [i, a](const LogRecord& r) {
        return r.vehicles[i].tension * r.vehicles[i].direction(a);
      }));
    }
    for (int a = 0; a < 3; ++a) {
      p.series.push_back(b.vs_time(std::string("T_d a_d ") + kAxis[a],
                                   [i, a](const LogRecord& r) {
                                     return r.vehicles[i].tension_desired(a);
                                   },
                                   true));
    }
  });

  per_vehicle("control_inputs", "Control input u_i", "N", [&](Panel& p, int i) {
    for (int a = 0; a < 3; ++a) {
      p.series.push_back(b.vs_time(std::string("u ") + kAxis[a], [i, a](const LogRecord& r) {
        return r.vehicles[i].control_input()(a);
      }));
    }
    p.series.push_back(b.vs_time("|u|", [i](const LogRecord& r) {
      return r.vehicles[i].control_input().norm();
    }));
  });

  auto spatial = [&](const std::string& name, const std::string& title,
                     const std::string& xl, const std::string& yl,
                     const std::function<double(const Vec3&)>& fx,
                     const std::function<double(const Vec3&)>& fy) {
    Panel p{title, xl, yl, {}, true};
    p.series.push_back(b.xy("load", [&](const LogRecord& r) { return fx(r.load_position); },
                            [&](const LogRecord& r) { return fy(r.load_position); }));
    for (int i = 0; i < n; ++i) {
      p.series.push_back(b.xy("UAV " + std::to_string(i + 1),
                              [&, i](const LogRecord& r) { return fx(r.vehicles[i].position); },
                              [&, i](const LogRecord& r) { return fy(r.vehicles[i].position); }));
    }
    p.series.push_back(b.xy("reference", [&](const LogRecord& r) { return fx(r.ref_position); },
                            [&](const LogRecord& r) { return fy(r.ref_position); }, true));
    figs.push_back({name, {p}});
  };

  spatial("top_view", "Top view", "x (m)", "y (m)",
          [](const Vec3& v) { return v.x(); }, [](const Vec3& v) { return v.y(); });
  // isometric: x and y axes 30 degrees below the horizontal
  const double c30 = std::cos(std::numbers::pi / 6.0);
  spatial("projection_3d", "Isometric projection", "(x - y) cos 30 (m)",
          "z - (x + y)/2 (m)",
          [c30](const Vec3& v) { return (v.x() - v.y()) * c30; },
          [](const Vec3& v) { return v.z() - 0.5 * (v.x() + v.y()); });
  return figs;
}

std::vector<std::filesystem::path> write_plots(const SimLog& log,
                                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const Figure& f : figure_set(log)) {
    for (const auto& [ext, text] :
         {std::pair{".svg", render_svg(f)}, std::pair{".dat", render_dat(f)}}) {
      const auto path = dir / (f.name + ext);
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << text;
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace slungload
