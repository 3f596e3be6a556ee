#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finfold/sweep.hpp"

namespace finfold {

inline constexpr std::string_view kMetricsHeader =
    "f_hz,fin_state,speed_mps,accel_mps2,r2,cot_total,cot_caudal,cot_dorsal,st,re,"
    "turn_radius_m,turn_omega_radps,notes";
inline constexpr std::size_t kMetricsColumns = 13;

// metrics.csv text: one row per cell, empty fields where a run failed.
std::string format_metrics_csv(std::span<const SweepCell> cells);
// Inverse of format_metrics_csv (mean power and turn centre are not stored).
std::vector<SweepCell> parse_metrics_csv(std::string_view text);
std::vector<SweepCell> read_metrics_csv(const std::filesystem::path& path);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line chart; identical input gives identical bytes.
std::string render_line_chart(std::string_view title, std::string_view x_label,
                              std::string_view y_label, std::span<const ChartSeries> series);

// Writes metrics.csv plus speed_vs_f.svg, cot_vs_f.svg, st_vs_f.svg,
// re_vs_f.svg and accel_vs_f.svg into out_dir (created if missing). Returns
// the written paths. Empty input is kPrecondition; write failures are kIo.
std::vector<std::filesystem::path> emit_report(std::span<const SweepCell> cells,
                                               const std::filesystem::path& out_dir);

}  // namespace finfold
