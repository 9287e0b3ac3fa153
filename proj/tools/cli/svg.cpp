#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cli.hpp"
#include "ltt/analytic.hpp"

namespace ltt::cli {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 200.0;  // legend column
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string trim_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<LttCurve>& curves, const SvgStyle& style) {
  if (curves.empty()) throw UsageError("plot: no curves to draw");

  double y_max = 1.0;
  for (const LttCurve& c : curves) {
    y_max = std::max(y_max, static_cast<double>(c.n));
    for (const LttPoint& p : c.points) y_max = std::max(y_max, p.expected_lineages);
  }
  const double y_min = 1.0;
  const double y_span = y_max > y_min ? y_max - y_min : 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double sigma) { return kLeft + sigma * plot_w; };
  auto py = [&](double lineages) { return kTop + plot_h * (1.0 - (lineages - y_min) / y_span); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
       "\" viewBox=\"0 0 " + fixed(kWidth) + " " + fixed(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    s += "<text x=\"" + fixed(kLeft) + "\" y=\"28\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(style.title) + "</text>\n";
  }

  // Axes and ticks.
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<polyline points=\"" + fixed(px(0)) + "," + fixed(py(y_min)) + " " + fixed(px(1)) + "," + fixed(py(y_min)) +
       "\"/>\n";
  s += "<polyline points=\"" + fixed(px(0)) + "," + fixed(py(y_min)) + " " + fixed(px(0)) + "," + fixed(py(y_max)) +
       "\"/>\n";
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double sigma = i / 4.0;
    s += "<line x1=\"" + fixed(px(sigma)) + "\" y1=\"" + fixed(py(y_min)) + "\" x2=\"" + fixed(px(sigma)) +
         "\" y2=\"" + fixed(py(y_min) + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(px(sigma)) + "\" y=\"" + fixed(py(y_min) + 18) + "\" text-anchor=\"middle\">" +
         trim_number(sigma) + "</text>\n";
  }
  const int y_ticks = 5;
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = y_min + y_span * i / y_ticks;
    s += "<line x1=\"" + fixed(px(0) - 5) + "\" y1=\"" + fixed(py(v)) + "\" x2=\"" + fixed(px(0)) + "\" y2=\"" +
         fixed(py(v)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(px(0) - 8) + "\" y=\"" + fixed(py(v) + 4) + "\" text-anchor=\"end\">" +
         trim_number(std::round(v * 100.0) / 100.0) + "</text>\n";
  }
  s += "<text x=\"" + fixed(px(0.5)) + "\" y=\"" + fixed(kHeight - 15) +
       "\" text-anchor=\"middle\">relative time sigma</text>\n";
  s += "<text x=\"18\" y=\"" + fixed(py((y_min + y_max) / 2)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       fixed(py((y_min + y_max) / 2)) + ")\">expected lineages</text>\n";
  s += "</g>\n";

  if (style.diagonal_reference) {
    const double n = static_cast<double>(curves.front().n);
    s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"" + fixed(px(0)) + "," +
         fixed(py(1.0)) + " " + fixed(px(1)) + "," + fixed(py(n)) + "\"/>\n";
  }

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const SeriesStyle series = style.series.empty() ? SeriesStyle{} : style.series[k % style.series.size()];
    s += "<polyline fill=\"none\" stroke=\"" + escape(series.color) + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const LttPoint& p : curves[k].points) {
      if (!first) s += ' ';
      first = false;
      s += fixed(px(p.sigma)) + "," + fixed(py(p.expected_lineages));
    }
    s += "\"/>\n";
  }

  std::vector<SeriesStyle> legend = style.legend;
  if (legend.empty()) {
    for (const SeriesStyle& series : style.series) {
      if (!series.label.empty()) legend.push_back(series);
    }
  }
  if (style.diagonal_reference) legend.push_back(SeriesStyle{"black", style.reference_label});
  s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  double ly = kTop + 10;
  const double lx = kWidth - kRight + 20;
  for (const SeriesStyle& entry : legend) {
    s += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(lx + 24) + "\" y2=\"" + fixed(ly) +
         "\" stroke=\"" + escape(entry.color) + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fixed(lx + 30) + "\" y=\"" + fixed(ly + 4) + "\">" + escape(entry.label) + "</text>\n";
    ly += 18;
  }
  s += "</g>\n</svg>\n";
  return s;
}

void emit_svg(const std::vector<LttCurve>& curves, const SvgStyle& style, const std::string& path,
              std::ostream& stdout_stream) {
  write_artifact(path, render_svg(curves, style), stdout_stream);
}

FigurePreset figure1_preset(const std::vector<double>& sigma_grid, const QuadratureSpec& quad) {
  static const std::vector<std::string> kColours = {"#2ca02c", "#d4a017", "#1f4fd6", "#d62728", "#000000"};
  FigurePreset fig;
  fig.style.title = "Expected lineages, n = 10 extant, origin age t = 10";
  for (std::size_t r = 0; r < kFigureRhos.size(); ++r) {
    const double rho = kFigureRhos[r];
    fig.style.legend.push_back(SeriesStyle{kColours[r], "rho = " + trim_number(rho)});
    for (double lambda : kFigure1Lambdas) {
      const BirthDeathParams params(lambda, rho * lambda);
      fig.curves.push_back(ltt_curve(OriginAge{10.0}, 10, params, sigma_grid, quad));
      fig.style.series.push_back(
          SeriesStyle{kColours[r], "rho = " + trim_number(rho) + ", lambda = " + trim_number(lambda)});
    }
  }
  return fig;
}

FigurePreset figure2_preset(const std::vector<double>& sigma_grid, const QuadratureSpec& quad) {
  // Bottom to top.
  static const std::vector<double> kRhos = {1.0, 0.75, 0.5, 0.25, 0.0};
  static const std::vector<std::string> kColours = {"#000000", "#d62728", "#1f4fd6", "#d4a017", "#2ca02c"};
  FigurePreset fig;
  fig.style.title = "Expected lineages, n = 10 extant, uniform age prior";
  fig.style.diagonal_reference = true;
  for (std::size_t r = 0; r < kRhos.size(); ++r) {
    const double rho = kRhos[r];
    const BirthDeathParams params(1.0, rho);
    fig.curves.push_back(ltt_curve(UniformAgePrior{}, 10, params, sigma_grid, quad));
    std::string label = "rho = " + trim_number(rho);
    if (rho == 0.0) label += " (Yule)";
    if (rho == 1.0) label += " (critical)";
    fig.style.series.push_back(SeriesStyle{kColours[r], label});
  }
  return fig;
}

}  // namespace ltt::cli
