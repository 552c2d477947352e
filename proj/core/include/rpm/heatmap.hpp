#pragma once

#include <filesystem>
#include <string>

namespace rpm {

struct HeatmapInfo {
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t cells = 0;
};

/// Renders success_rate from a sweep summary CSV as an SVG grid over two of its columns.
/// Rows sharing an (x, y) pair are pooled by their trial counts. Throws
/// std::invalid_argument naming any column that is missing.
HeatmapInfo emit_heatmap(const std::filesystem::path& summary_csv, const std::string& x_field,
                         const std::string& y_field, const std::filesystem::path& svg_out);

}  // namespace rpm
