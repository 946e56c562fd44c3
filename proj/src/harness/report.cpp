#include "gevrey/harness/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "gevrey/common/errors.hpp"

namespace gevrey::harness {

namespace {

double transform_x(double t, Transform tr) {
  switch (tr) {
    case Transform::kLogVsN:
      return t;
    case Transform::kLogVsCubeRootN:
      return std::cbrt(t);
    case Transform::kLogLog:
      return std::log(t);
  }
  return t;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view transform_name(Transform t) {
  switch (t) {
    case Transform::kLogVsN:
      return "log-vs-n";
    case Transform::kLogVsCubeRootN:
      return "log-vs-cuberoot-n";
    case Transform::kLogLog:
      return "loglog";
  }
  return "loglog";
}

Transform parse_transform(std::string_view name) {
  for (Transform t : {Transform::kLogVsN, Transform::kLogVsCubeRootN, Transform::kLogLog})
    if (transform_name(t) == name) return t;
  throw ValidationError("unknown transform '" + std::string(name) + "'");
}

RateFit fit_rate(const std::vector<RatePoint>& records, Transform transform) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    if (!(r.error > 0.0) || !std::isfinite(r.error)) continue;
    if (transform == Transform::kLogLog && !(r.t > 0.0)) continue;
    pts.emplace_back(transform_x(r.t, transform), std::log(r.error));
  }
  if (pts.size() < 4)
    throw ValidationError("fit_rate: need at least 4 records with positive error, got " + std::to_string(pts.size()));
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit_rate: all abscissae coincide");
  RateFit fit;
  fit.transform = transform;
  fit.points = pts.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_number(v));
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
  std::string s;
  for (const auto& m : table.metadata) s += "# " + m + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) s += (i ? "," : "") + table.columns[i];
  s += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += "\n";
  }
  return s;
}

Table parse_csv(std::string_view text) {
  Table t;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      t.metadata.emplace_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.columns.size()) throw ValidationError("csv: row width differs from header");
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw ValidationError("csv: missing header line");
  return t;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

void emit_csv(const Table& table, const std::filesystem::path& path) { write_text(path, to_csv(table)); }

std::string render_svg(const std::vector<PlotSeries>& series, Transform transform, const std::string& title,
                       const std::string& x_label) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  std::size_t drawable = 0;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (!(p.error > 0.0) || (transform == Transform::kLogLog && !(p.t > 0.0))) continue;
      const double x = transform_x(p.t, transform), y = std::log10(p.error);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      ++drawable;
    }
  if (drawable == 0) throw ValidationError("svg: nothing to plot (no records with positive error)");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double W = 640, H = 480, L = 80, R = 20, T = 40, B = 60;
  const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  static const std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
       xml_escape(title + " [" + std::string(transform_name(transform)) + "]") + "</text>\n";
  s += "<line x1=\"" + fixed(L) + "\" y1=\"" + fixed(H - B) + "\" x2=\"" + fixed(W - R) + "\" y2=\"" + fixed(H - B) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fixed(L) + "\" y1=\"" + fixed(T) + "\" x2=\"" + fixed(L) + "\" y2=\"" + fixed(H - B) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"320\" y=\"468\" text-anchor=\"middle\" font-size=\"13\">" + xml_escape(x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"240\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 240)\">"
       "log10(error)</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
    s += "<text x=\"" + fixed(px(xv)) + "\" y=\"" + fixed(H - B + 18) + "\" text-anchor=\"middle\" font-size=\"11\">" +
         fixed(xv) + "</text>\n";
    s += "<text x=\"" + fixed(L - 6) + "\" y=\"" + fixed(py(yv) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         fixed(yv) + "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ser = series[k];
    const char* color = colors[k % colors.size()];
    std::string pts;
    for (const auto& p : ser.points) {
      if (!(p.error > 0.0) || (transform == Transform::kLogLog && !(p.t > 0.0))) continue;
      pts += fixed(px(transform_x(p.t, transform))) + "," + fixed(py(std::log10(p.error))) + " ";
    }
    if (pts.empty()) continue;
    pts.pop_back();
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    std::string label = ser.label;
    try {
      const RateFit fit = fit_rate(ser.points, transform);
      // The fit is in natural log; the axis is log10.
      const double x0 = xmin, x1 = xmax;
      const double y0 = (fit.intercept + fit.slope * x0) / std::log(10.0);
      const double y1 = (fit.intercept + fit.slope * x1) / std::log(10.0);
      s += "<line x1=\"" + fixed(px(x0)) + "\" y1=\"" + fixed(py(y0)) + "\" x2=\"" + fixed(px(x1)) + "\" y2=\"" +
           fixed(py(y1)) + "\" stroke=\"" + color + "\" stroke-dasharray=\"6,4\"/>\n";
      label += " (slope " + format_number(std::round(fit.slope * 1000.0) / 1000.0) + ")";
    } catch (const ValidationError&) {
    }
    s += "<text x=\"" + fixed(W - R - 8) + "\" y=\"" + fixed(T + 16.0 * (k + 1)) + "\" text-anchor=\"end\" fill=\"" +
         color + "\" font-size=\"12\">" + xml_escape(label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_svg(const std::vector<PlotSeries>& series, Transform transform, const std::string& title,
              const std::string& x_label, const std::filesystem::path& path) {
  write_text(path, render_svg(series, transform, title, x_label));
}

}  // namespace gevrey::harness
