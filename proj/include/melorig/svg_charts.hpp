#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "melorig/datasheet.hpp"
#include "melorig/stats.hpp"
#include "melorig/transitions.hpp"

namespace melorig {

struct ChartOptions {
  int width = 800;
  int height = 600;
  std::string title;
};

// 12x12 grid labeled C..B both ways, cell shade linear from the matrix
// minimum (white) to maximum (dark), legend strip included. Each cell rect
// carries data-row/data-col/data-value attributes; a companion CSV
// (same path, .csv extension) holds the full-precision grid. Throws
// UndefinedRow unless all rows are defined.
void emit_heatmap(const StochasticMatrix& m, const std::filesystem::path& svg_path,
                  const ChartOptions& options = {});

enum class ScatterMode { Regression, ByComposer };

// x = popularity, y = originality. Every record must carry both values or
// MissingFields lists the offenders. Regression mode draws the fitted line
// whose data-space endpoints (at min and max popularity) sit in
// data-x1/y1/x2/y2 attributes at full precision; ByComposer mode colors
// points per composer and emits one legend entry each.
void emit_scatter(std::span<const PieceRecord> records, ScatterMode mode,
                  const std::optional<RegressionResult>& fit,
                  const std::filesystem::path& svg_path, const ChartOptions& options = {});

struct BoxStats {
  std::string composer;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

// Median-exclusive quartiles ([1,2,3,4,5] gives 1.5/3/4.5); a single value
// collapses all five numbers. Throws EmptyGroup.
BoxStats box_stats(std::string composer, std::span<const double> values);

// One box per composer, whiskers at the outermost points within 1.5 IQR of
// the quartiles, points beyond drawn as outlier dots. Companion CSV (.csv
// extension) lists Composer,Min,Q1,Median,Q3,Max,N.
void emit_box_plot(const std::map<std::string, std::vector<double>>& scores_by_composer,
                   const std::filesystem::path& svg_path, const ChartOptions& options = {});

}  // namespace melorig
