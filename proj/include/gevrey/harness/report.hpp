#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gevrey::harness {

enum class Transform {
  kLogVsN,          // log(error) against n
  kLogVsCubeRootN,  // log(error) against n^(1/3)
  kLogLog,          // log(error) against log(n)
};

std::string_view transform_name(Transform t);
Transform parse_transform(std::string_view name);

struct RatePoint {
  double t = 0.0;
  double error = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Transform transform = Transform::kLogLog;
  std::size_t points = 0;
};

/// Ordinary least squares on transformed coordinates using the records with
/// error > 0. Throws ValidationError with fewer than 4 such records.
RateFit fit_rate(const std::vector<RatePoint>& records, Transform transform);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

struct Table {
  std::vector<std::string> metadata;  // written as "# line"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
};

std::string to_csv(const Table& table);
Table parse_csv(std::string_view text);
void emit_csv(const Table& table, const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<RatePoint> points;
};

/// log10(error) against the transformed t. Each series with at least 4
/// positive points gets its least-squares line drawn dashed. Throws
/// ValidationError when there is nothing to plot.
std::string render_svg(const std::vector<PlotSeries>& series, Transform transform, const std::string& title,
                       const std::string& x_label);
void emit_svg(const std::vector<PlotSeries>& series, Transform transform, const std::string& title,
              const std::string& x_label, const std::filesystem::path& path);

/// Writes text to a file, throwing IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace gevrey::harness
