#include "melorig/svg_charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "melorig/csv.hpp"
#include "melorig/errors.hpp"

namespace melorig {

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Svg {
  std::string body;
  int width, height;

  Svg(int w, int h) : width(w), height(h) {}

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = {}) {
    body += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
            "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"" +
            (extra.empty() ? "" : " " + extra) + "/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0, const std::string& extra = {}) {
    body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
            "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            num(stroke_width) + "\"" + (extra.empty() ? "" : " " + extra) + "/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& extra = {}) {
    body += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
            "\" fill=\"" + fill + "\"" + (extra.empty() ? "" : " " + extra) + "/>\n";
  }
  void text(double x, double y, const std::string& content, int size = 12,
            const std::string& anchor = "start", const std::string& extra = {}) {
    body += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
            std::to_string(size) + "\" font-family=\"sans-serif\" text-anchor=\"" +
            anchor + "\"" + (extra.empty() ? "" : " " + extra) + ">" +
            xml_escape(content) + "</text>\n";
  }

  std::string finish() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n" +
           body + "</svg>\n";
  }
};

void write_svg(const Svg& svg, const std::filesystem::path& path) {
  csv::write_text_file(path, svg.finish());
}

std::string shade(double t) {
  // white at 0 to dark blue at 1
  int r = static_cast<int>(std::lround(255.0 + (8.0 - 255.0) * t));
  int g = static_cast<int>(std::lround(255.0 + (48.0 - 255.0) * t));
  int b = static_cast<int>(std::lround(255.0 + (107.0 - 255.0) * t));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
  return buf;
}

const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#1B6CA8", "#D1495B", "#66A182", "#8D6A9F",
      "#E0A458", "#3D3B30", "#7A9E9F", "#C97B84"};
  return colors;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double px0 = 0.0, px1 = 1.0;

  double at(double v) const {
    if (hi == lo) return 0.5 * (px0 + px1);
    return px0 + (v - lo) / (hi - lo) * (px1 - px0);
  }
};

std::filesystem::path companion_csv(const std::filesystem::path& svg_path) {
  std::filesystem::path p = svg_path;
  p.replace_extension(".csv");
  return p;
}

}  // namespace

void emit_heatmap(const StochasticMatrix& m, const std::filesystem::path& svg_path,
                  const ChartOptions& options) {
  for (std::size_t r = 0; r < PitchClass::kCount; ++r)
    if (!m.row_defined[r])
      raise(Errc::UndefinedRow, std::string("heat map needs all rows defined; row ") +
                                    kPitchClassNames[r] + " is not");

  double lo = m.probs[0][0], hi = m.probs[0][0];
  for (std::size_t r = 0; r < PitchClass::kCount; ++r)
    for (std::size_t c = 0; c < PitchClass::kCount; ++c) {
      lo = std::min(lo, m.probs[r][c]);
      hi = std::max(hi, m.probs[r][c]);
    }

  Svg svg(options.width, options.height);
  double left = 70, top = 60, right = 110, bottom = 50;
  double cell_w = (options.width - left - right) / 12.0;
  double cell_h = (options.height - top - bottom) / 12.0;

  svg.text(options.width / 2.0, 24,
           options.title.empty() ? "Two-note transition probabilities" : options.title,
           16, "middle");
  svg.text(left + cell_w * 6.0, options.height - 12, "To pitch class", 13, "middle");
  svg.text(16, top + cell_h * 6.0, "From pitch class", 13, "middle",
           "transform=\"rotate(-90 16 " + num(top + cell_h * 6.0) + ")\"");

  for (std::size_t r = 0; r < PitchClass::kCount; ++r) {
    svg.text(left - 8, top + (r + 0.65) * cell_h, kPitchClassNames[r], 12, "end");
    svg.text(left + (r + 0.5) * cell_w, top - 8, kPitchClassNames[r], 12, "middle");
    for (std::size_t c = 0; c < PitchClass::kCount; ++c) {
      double v = m.probs[r][c];
      double t = hi == lo ? 0.0 : (v - lo) / (hi - lo);
      std::string extra = std::string("data-row=\"") + kPitchClassNames[r] +
                          "\" data-col=\"" + kPitchClassNames[c] + "\" data-value=\"" +
                          full(v) + "\"";
      svg.rect(left + c * cell_w, top + r * cell_h, cell_w, cell_h, shade(t), extra);
    }
  }

  double lx = options.width - right + 20;
  svg.text(lx, top - 8, "P", 12, "start");
  int steps = 6;
  double swatch_h = (options.height - top - bottom) / static_cast<double>(steps);
  for (int i = 0; i < steps; ++i) {
    double t = steps == 1 ? 0.0 : static_cast<double>(steps - 1 - i) / (steps - 1);
    svg.rect(lx, top + i * swatch_h, 18, swatch_h, shade(t), "class=\"legend\"");
    double v = lo + t * (hi - lo);
    char label[32];
    std::snprintf(label, sizeof label, "%.4f", v);
    svg.text(lx + 24, top + (i + 0.6) * swatch_h, label, 11);
  }

  write_svg(svg, svg_path);
  write_stochastic_matrix_csv(m, companion_csv(svg_path));
}

void emit_scatter(std::span<const PieceRecord> records, ScatterMode mode,
                  const std::optional<RegressionResult>& fit,
                  const std::filesystem::path& svg_path, const ChartOptions& options) {
  std::string offenders;
  for (const PieceRecord& rec : records)
    if (!rec.originality || !rec.popularity)
      offenders += (offenders.empty() ? "" : ", ") + rec.file_name;
  if (!offenders.empty())
    raise(Errc::MissingFields,
          "records lack originality or popularity: " + offenders);
  if (records.empty()) raise(Errc::MissingFields, "no records to plot");

  double xlo = static_cast<double>(*records[0].popularity);
  double xhi = xlo, ylo = *records[0].originality, yhi = ylo;
  for (const PieceRecord& rec : records) {
    double x = static_cast<double>(*rec.popularity), y = *rec.originality;
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }

  Svg svg(options.width, options.height);
  double left = 80, top = 50, right = mode == ScatterMode::ByComposer ? 180 : 40,
         bottom = 60;
  double xpad = xhi == xlo ? 1.0 : (xhi - xlo) * 0.05;
  double ypad = yhi == ylo ? 0.05 : (yhi - ylo) * 0.08;
  Axis xaxis{xlo - xpad, xhi + xpad, left, options.width - right};
  Axis yaxis{ylo - ypad, yhi + ypad, static_cast<double>(options.height - bottom),
             static_cast<double>(top)};

  svg.text(options.width / 2.0, 24,
           options.title.empty() ? "Melodic originality vs popularity" : options.title,
           16, "middle");
  svg.line(left, options.height - bottom, options.width - right,
           options.height - bottom, "#333333");
  svg.line(left, top, left, options.height - bottom, "#333333");
  svg.text((left + options.width - right) / 2.0, options.height - 16, "Popularity", 13,
           "middle");
  svg.text(20, (top + options.height - bottom) / 2.0, "Melodic Originality", 13,
           "middle",
           "transform=\"rotate(-90 20 " + num((top + options.height - bottom) / 2.0) +
               ")\"");

  for (int i = 0; i <= 4; ++i) {
    double fx = xaxis.lo + (xaxis.hi - xaxis.lo) * i / 4.0;
    double fy = yaxis.lo + (yaxis.hi - yaxis.lo) * i / 4.0;
    char xb[32], yb[32];
    std::snprintf(xb, sizeof xb, "%.0f", fx);
    std::snprintf(yb, sizeof yb, "%.3f", fy);
    svg.text(xaxis.at(fx), options.height - bottom + 18, xb, 10, "middle");
    svg.text(left - 8, yaxis.at(fy) + 4, yb, 10, "end");
    svg.line(xaxis.at(fx), options.height - bottom, xaxis.at(fx),
             options.height - bottom + 4, "#333333");
    svg.line(left - 4, yaxis.at(fy), left, yaxis.at(fy), "#333333");
  }

  std::map<std::string, std::string> color_of;
  if (mode == ScatterMode::ByComposer) {
    for (const PieceRecord& rec : records) color_of.emplace(rec.composer, "");
    std::size_t i = 0;
    for (auto& [name, color] : color_of)
      color = palette()[i++ % palette().size()];
    double ly = top + 10;
    for (const auto& [name, color] : color_of) {
      svg.rect(options.width - right + 16, ly - 9, 12, 12, color,
               "class=\"legend-swatch\"");
      svg.text(options.width - right + 34, ly + 1, name, 12, "start",
               "class=\"legend-label\"");
      ly += 20;
    }
  }

  for (const PieceRecord& rec : records) {
    double x = static_cast<double>(*rec.popularity), y = *rec.originality;
    std::string color = mode == ScatterMode::ByComposer ? color_of[rec.composer]
                                                        : "#1B6CA8";
    svg.circle(xaxis.at(x), yaxis.at(y), 4, color,
               "fill-opacity=\"0.75\" data-x=\"" + full(x) + "\" data-y=\"" + full(y) +
                   "\"");
  }

  if (mode == ScatterMode::Regression && fit) {
    double y1 = fit->intercept + fit->slope * xlo;
    double y2 = fit->intercept + fit->slope * xhi;
    svg.line(xaxis.at(xlo), yaxis.at(y1), xaxis.at(xhi), yaxis.at(y2), "#D1495B", 2.0,
             "data-x1=\"" + full(xlo) + "\" data-y1=\"" + full(y1) + "\" data-x2=\"" +
                 full(xhi) + "\" data-y2=\"" + full(y2) + "\"");
  }

  write_svg(svg, svg_path);
}

BoxStats box_stats(std::string composer, std::span<const double> values) {
  if (values.empty())
    raise(Errc::EmptyGroup, "no scores for composer '" + composer + "'");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());

  auto median_of = [](std::span<const double> s) {
    std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
  };

  BoxStats b;
  b.composer = std::move(composer);
  b.n = v.size();
  b.min = v.front();
  b.max = v.back();
  b.median = median_of(v);
  std::size_t half = v.size() / 2;
  if (half == 0) {
    b.q1 = b.q3 = b.median;
  } else {
    b.q1 = median_of(std::span<const double>(v.data(), half));
    b.q3 = median_of(std::span<const double>(v.data() + v.size() - half, half));
  }
  return b;
}

void emit_box_plot(const std::map<std::string, std::vector<double>>& scores_by_composer,
                   const std::filesystem::path& svg_path, const ChartOptions& options) {
  if (scores_by_composer.empty()) raise(Errc::EmptyGroup, "no composers to plot");

  std::vector<BoxStats> stats;
  double ylo = 0.0, yhi = 1.0;
  bool first = true;
  for (const auto& [name, values] : scores_by_composer) {
    stats.push_back(box_stats(name, values));
    for (double v : values) {
      if (first) {
        ylo = yhi = v;
        first = false;
      }
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  }

  Svg svg(options.width, options.height);
  double left = 80, top = 50, right = 40, bottom = 70;
  double ypad = yhi == ylo ? 0.05 : (yhi - ylo) * 0.08;
  Axis yaxis{ylo - ypad, yhi + ypad, static_cast<double>(options.height - bottom),
             static_cast<double>(top)};
  double span = options.width - left - right;
  double slot = span / static_cast<double>(stats.size());
  double box_w = std::min(60.0, slot * 0.5);

  svg.text(options.width / 2.0, 24,
           options.title.empty() ? "Melodic originality by composer" : options.title, 16,
           "middle");
  svg.line(left, options.height - bottom, options.width - right,
           options.height - bottom, "#333333");
  svg.line(left, top, left, options.height - bottom, "#333333");
  svg.text(20, (top + options.height - bottom) / 2.0, "Melodic Originality", 13,
           "middle",
           "transform=\"rotate(-90 20 " + num((top + options.height - bottom) / 2.0) +
               ")\"");
  svg.text((left + options.width - right) / 2.0, options.height - 16, "Composer", 13,
           "middle");

  for (int i = 0; i <= 4; ++i) {
    double fy = yaxis.lo + (yaxis.hi - yaxis.lo) * i / 4.0;
    char yb[32];
    std::snprintf(yb, sizeof yb, "%.3f", fy);
    svg.text(left - 8, yaxis.at(fy) + 4, yb, 10, "end");
    svg.line(left - 4, yaxis.at(fy), left, yaxis.at(fy), "#333333");
  }

  std::size_t idx = 0;
  for (const BoxStats& b : stats) {
    const auto& values = scores_by_composer.at(b.composer);
    double cx = left + (idx + 0.5) * slot;
    double iqr = b.q3 - b.q1;
    double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
    double whisker_lo = b.max, whisker_hi = b.min;
    for (double v : values) {
      if (v >= lo_fence) whisker_lo = std::min(whisker_lo, v);
      if (v <= hi_fence) whisker_hi = std::max(whisker_hi, v);
    }

    std::string color = palette()[idx % palette().size()];
    svg.line(cx, yaxis.at(whisker_lo), cx, yaxis.at(b.q1), "#333333");
    svg.line(cx, yaxis.at(b.q3), cx, yaxis.at(whisker_hi), "#333333");
    svg.line(cx - box_w * 0.3, yaxis.at(whisker_lo), cx + box_w * 0.3,
             yaxis.at(whisker_lo), "#333333");
    svg.line(cx - box_w * 0.3, yaxis.at(whisker_hi), cx + box_w * 0.3,
             yaxis.at(whisker_hi), "#333333");
    svg.rect(cx - box_w / 2, yaxis.at(b.q3), box_w,
             std::max(0.0, yaxis.at(b.q1) - yaxis.at(b.q3)), color,
             "fill-opacity=\"0.55\" stroke=\"#333333\" data-composer=\"" +
                 xml_escape(b.composer) + "\" data-q1=\"" + full(b.q1) +
                 "\" data-median=\"" + full(b.median) + "\" data-q3=\"" + full(b.q3) +
                 "\"");
    svg.line(cx - box_w / 2, yaxis.at(b.median), cx + box_w / 2, yaxis.at(b.median),
             "#111111", 2.0);
    for (double v : values)
      if (v < lo_fence || v > hi_fence)
        svg.circle(cx, yaxis.at(v), 3, "#333333", "class=\"outlier\"");
    svg.text(cx, options.height - bottom + 18, b.composer, 11, "middle");
    ++idx;
  }

  write_svg(svg, svg_path);

  std::string text = "Composer,Min,Q1,Median,Q3,Max,N\n";
  for (const BoxStats& b : stats)
    text += csv::join({b.composer, full(b.min), full(b.q1), full(b.median), full(b.q3),
                       full(b.max), std::to_string(b.n)});
  csv::write_text_file(companion_csv(svg_path), text);
}

}  // namespace melorig
