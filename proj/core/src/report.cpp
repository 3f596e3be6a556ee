#include "finfold/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "finfold/error.hpp"

namespace finfold {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> opt_number(std::string_view s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kParse,
                "line " + std::to_string(line) + ": invalid number '" + std::string(s) + "'");
  }
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

std::string escape_xml(std::string_view s) {
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

// 1-2-5 tick spacing giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double m = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
  return m * mag;
}

struct Axis {
  double lo;
  double hi;
  double step;
};

Axis make_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double step = nice_step(hi - lo, 5);
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

using Extract = std::function<std::optional<double>(const SwimMetrics&)>;

struct ChartSpec {
  const char* file;
  const char* title;
  const char* y_label;
  Extract value;
};

}  // namespace

std::string format_metrics_csv(std::span<const SweepCell> cells) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& c : cells) {
    std::string notes = c.notes;
    std::replace(notes.begin(), notes.end(), ',', ';');
    std::replace(notes.begin(), notes.end(), '\n', ' ');
    out += num(c.frequency) + "," + std::string(to_string(c.fin)) + ",";
    if (c.metrics) {
      const auto& m = *c.metrics;
      for (double v : {m.mean_speed, m.acceleration, m.r_squared, m.cot_total, m.cot_caudal,
                       m.cot_dorsal, m.strouhal, m.reynolds}) {
        out += num(v) + ",";
      }
      if (m.turn) {
        out += num(m.turn->radius) + "," + num(m.turn->angular_speed) + ",";
      } else {
        out += ",,";
      }
    } else {
      out += ",,,,,,,,,,";
    }
    out += notes + "\n";
  }
  return out;
}

std::vector<SweepCell> parse_metrics_csv(std::string_view text) {
  std::vector<SweepCell> cells;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kMetricsHeader) {
        throw Error(ErrorKind::kParse, "line 1: unexpected metrics header");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != kMetricsColumns) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(kMetricsColumns) + " fields");
    }
    SweepCell cell;
    const auto freq = opt_number(f[0], line_no);
    if (!freq) throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": missing f_hz");
    cell.frequency = *freq;
    cell.fin = parse_fin_state(f[1]);
    cell.notes = std::string(f[12]);
    const auto speed = opt_number(f[2], line_no);
    if (speed) {
      SwimMetrics m;
      m.frequency = cell.frequency;
      m.fin = cell.fin;
      m.mean_speed = *speed;
      double* fields[] = {&m.acceleration, &m.r_squared, &m.cot_total, &m.cot_caudal,
                          &m.cot_dorsal, &m.strouhal, &m.reynolds};
      for (std::size_t k = 0; k < std::size(fields); ++k) {
        *fields[k] = opt_number(f[3 + k], line_no).value_or(NAN);
      }
      const auto radius = opt_number(f[10], line_no);
      const auto omega = opt_number(f[11], line_no);
      if (radius && omega) {
        m.turn = TurnFit{*radius, *omega, 0.0, 0.0, 0.0, *radius * std::abs(*omega)};
      }
      cell.metrics = m;
    }
    cells.push_back(std::move(cell));
  }
  if (!header_seen) throw Error(ErrorKind::kParse, "empty metrics file");
  return cells;
}

std::vector<SweepCell> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_metrics_csv(os.str());
}

std::string render_line_chart(std::string_view title, std::string_view x_label,
                              std::string_view y_label, std::span<const ChartSeries> series) {
  constexpr double kW = 640, kH = 400, kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  const Axis ax = make_axis(xmin, xmax);
  const Axis ay = make_axis(ymin, ymax);
  auto px = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::string out;
  char buf[256];
  auto put = [&](const char* f, auto... args) {
    std::snprintf(buf, sizeof buf, f, args...);
    out += buf;
  };
  put("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH, kW, kH);
  put("<rect width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", kW, kH);
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape_xml(title) + "</text>\n";

  // Grid and tick labels.
  const int nx = static_cast<int>(std::lround((ax.hi - ax.lo) / ax.step));
  for (int i = 0; i <= nx; ++i) {
    const double v = ax.lo + i * ax.step;
    put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n", px(v), kTop,
        px(v), kTop + ph);
    put("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%.4g</text>\n", px(v),
        kTop + ph + 18, std::abs(v) < 1e-12 * ax.step ? 0.0 : v);
  }
  const int ny = static_cast<int>(std::lround((ay.hi - ay.lo) / ay.step));
  for (int i = 0; i <= ny; ++i) {
    const double v = ay.lo + i * ay.step;
    put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n", kLeft, py(v),
        kLeft + pw, py(v));
    put("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n", kLeft - 6, py(v) + 4,
        std::abs(v) < 1e-12 * ay.step ? 0.0 : v);
  }
  put("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
      kLeft, kTop, pw, ph);
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kH - 16) +
         "\" text-anchor=\"middle\">" + escape_xml(x_label) + "</text>\n";
  out += "<text transform=\"translate(18 " + num(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape_xml(y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    // Non-finite points break the line.
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
               "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", points.empty() ? "" : " ", px(s.x[i]),
                    py(s.y[i]));
      points += buf;
      put("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", px(s.x[i]), py(s.y[i]),
          colour);
    }
    flush();
    const double ly = kTop + 16 + 20 * static_cast<double>(k);
    put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"2\"/>\n",
        kLeft + pw + 14, ly, kLeft + pw + 38, ly, colour);
    out += "<text x=\"" + num(kLeft + pw + 44) + "\" y=\"" + num(ly + 4) + "\">" +
           escape_xml(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::vector<std::filesystem::path> emit_report(std::span<const SweepCell> cells,
                                               const std::filesystem::path& out_dir) {
  if (cells.empty()) throw Error(ErrorKind::kPrecondition, "no results to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorKind::kIo, "cannot create output directory '" + out_dir.string() + "'");
  }

  std::vector<std::filesystem::path> written;
  written.push_back(out_dir / "metrics.csv");
  write_file(written.back(), format_metrics_csv(cells));

  const ChartSpec charts[] = {
      {"speed_vs_f.svg", "Steady speed", "speed (m/s)",
       [](const SwimMetrics& m) -> std::optional<double> { return m.mean_speed; }},
      {"cot_vs_f.svg", "Cost of transport", "COT (-)",
       [](const SwimMetrics& m) -> std::optional<double> { return m.cot_total; }},
      {"st_vs_f.svg", "Strouhal number", "St (-)",
       [](const SwimMetrics& m) -> std::optional<double> { return m.strouhal; }},
      {"re_vs_f.svg", "Reynolds number", "Re (-)",
       [](const SwimMetrics& m) -> std::optional<double> { return m.reynolds; }},
      {"accel_vs_f.svg", "Acceleration", "acceleration (m/s^2)",
       [](const SwimMetrics& m) -> std::optional<double> { return m.acceleration; }},
  };

  // Fin states in order of first appearance.
  std::vector<FinState> states;
  for (const auto& c : cells) {
    if (std::find(states.begin(), states.end(), c.fin) == states.end()) states.push_back(c.fin);
  }
  for (const auto& chart : charts) {
    std::vector<ChartSeries> series;
    for (FinState fin : states) {
      ChartSeries s{std::string(to_string(fin)), {}, {}};
      std::vector<const SweepCell*> rows;
      for (const auto& c : cells) {
        if (c.fin == fin) rows.push_back(&c);
      }
      std::stable_sort(rows.begin(), rows.end(), [](const SweepCell* a, const SweepCell* b) {
        return a->frequency < b->frequency;
      });
      for (const SweepCell* c : rows) {
        s.x.push_back(c->frequency);
        s.y.push_back(c->metrics ? chart.value(*c->metrics).value_or(NAN) : NAN);
      }
      series.push_back(std::move(s));
    }
    written.push_back(out_dir / chart.file);
    write_file(written.back(),
               render_line_chart(chart.title, "tail-beat frequency (Hz)", chart.y_label, series));
  }
  return written;
}

}  // namespace finfold
