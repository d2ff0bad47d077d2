#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slungload/plot.hpp"
#include "slungload/simulation.hpp"

namespace slungload {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const SimLog& sample_log() {
  static const SimLog log = [] {
    ScenarioConfig c = ScenarioConfig::Default();
    c.duration = 2.5;
    return simulate(c).log;
  }();
  return log;
}

TEST(Thin, Examples) {
  EXPECT_TRUE(thin_indices(0).empty());
  EXPECT_EQ(thin_indices(1), std::vector<std::size_t>{0});
  EXPECT_EQ(thin_indices(5, 10), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(thin_indices(5, 3), (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_LE(thin_indices(20001).size(), 2000u);
  EXPECT_GT(thin_indices(20001).size(), 1000u);
}

TEST(ThinProperty, BoundedIncreasingKeepsEnds) {
  for (std::size_t count = 1; count < 30000; count = count * 3 / 2 + 1) {
    for (std::size_t cap : {2u, 7u, 2000u}) {
      const auto idx = thin_indices(count, cap);
      ASSERT_FALSE(idx.empty());
      EXPECT_LE(idx.size(), cap);
      EXPECT_EQ(idx.front(), 0u);
      EXPECT_EQ(idx.back(), count - 1);
      for (std::size_t k = 1; k < idx.size(); ++k) EXPECT_GT(idx[k], idx[k - 1]);
    }
  }
}

TEST(FigureSet, CoversTheFigureList) {
  const auto figs = figure_set(sample_log());
  std::vector<std::string> names;
  for (const auto& f : figs) names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"load_position", "uav_positions", "quaternions",
                                              "tensions", "control_inputs", "top_view",
                                              "projection_3d"}));
  for (const auto& f : figs) {
    for (const auto& p : f.panels) {
      for (const auto& s : p.series) {
        EXPECT_LE(s.x.size(), kMaxPlotPoints) << f.name << "/" << s.name;
        EXPECT_EQ(s.x.size(), s.y.size());
      }
    }
  }
  bool has_dashed = false;
  for (const auto& p : figs[3].panels)
    for (const auto& s : p.series) has_dashed = has_dashed || s.dashed;
  EXPECT_TRUE(has_dashed);
}

TEST(Render, PureFunctionOfLog) {
  for (const auto& f : figure_set(sample_log())) {
    const std::string svg = render_svg(f);
    EXPECT_EQ(svg, render_svg(f));
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg.find("nan"), std::string::npos) << f.name;
    EXPECT_FALSE(render_dat(f).empty());
  }
}

TEST(Render, EmptyAndFlatSeries) {
  Figure f{"flat", {Panel{"p", "t", "y", {Series{"c", {0, 1, 2}, {1, 1, 1}, false},
                                          Series{"none", {}, {}, true}}}}};
  const std::string svg = render_svg(f);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(WritePlots, ByteIdenticalRewrite) {
  const fs::path dir = fs::path(::testing::TempDir()) / "slungload_plots";
  fs::remove_all(dir);
  const auto first = write_plots(sample_log(), dir / "a");
  const auto second = write_plots(sample_log(), dir / "b");
  ASSERT_EQ(first.size(), 14u);
  for (std::size_t k = 0; k < first.size(); ++k) {
    EXPECT_EQ(first[k].filename(), second[k].filename());
    EXPECT_EQ(slurp(first[k]), slurp(second[k])) << first[k];
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace slungload
