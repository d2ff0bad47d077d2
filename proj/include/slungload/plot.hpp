#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slungload/log.hpp"

namespace slungload {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Series> series;
  bool equal_axes = false;  // top view and projections
};

struct Figure {
  std::string name;  // file stem
  std::vector<Panel> panels;
};

/// Hard cap on points per series after thinning.
inline constexpr std::size_t kMaxPlotPoints = 2000;

/// Keeps every k-th sample (and the last) so at most `max_points` remain.
std::vector<std::size_t> thin_indices(std::size_t count,
                                      std::size_t max_points = kMaxPlotPoints);

/// Deterministic SVG: fixed canvas, coordinates printed with 2 decimals.
std::string render_svg(const Figure& figure);

/// gnuplot-friendly text: one block per series, blank-line separated,
/// columns x y with 9 significant digits.
std::string render_dat(const Figure& figure);

/// Load position + error, UAV positions, quaternions, tensions (desired
/// dashed), control inputs, top view and a 3D projection.
std::vector<Figure> figure_set(const SimLog& log);

/// Writes <name>.svg and <name>.dat for every figure of figure_set(log).
/// Returns the written paths.
std::vector<std::filesystem::path> write_plots(const SimLog& log,
                                               const std::filesystem::path& dir);

}  // namespace slungload
