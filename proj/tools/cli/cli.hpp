#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ltt/curve.hpp"
#include "ltt/params.hpp"
#include "ltt/quad.hpp"

namespace ltt::cli {

// Exit codes of the ltt tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O error, or `verify` found a failing property
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitBudget = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { kExpect, kDensity, kAgeDensity, kSimulate, kVerify, kPlot };
enum class Format { kCsv, kJson };

struct RunConfig {
  Command command = Command::kExpect;
  BirthDeathParams params{1.0, 0.0};
  Condition condition = OriginAge{1.0};
  int n = 10;
  std::vector<double> sigma_grid;  // explicit --sigma values, else uniform --grid points
  int grid = 101;
  std::optional<double> age;
  Format format = Format::kCsv;
  std::string out = "-";
  std::string records;  // simulate: optional per-tree dump
  std::uint64_t seed = 1;
  std::uint64_t reps = 10000;
  QuadratureSpec quad{};
  int fig = 0;  // plot preset, 0 = plot the configured curve
};

// Parses argv (argv[0] is the program name). Throws UsageError, or returns
// nullopt after printing help to `out`.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

// Full front end: parse, execute, write artifacts, map errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string format_double(double x);  // 17 significant digits

// Writes `contents` to `path` via a temporary file and rename; "-" writes to
// `stdout_stream`.
void write_artifact(const std::string& path, const std::string& contents, std::ostream& stdout_stream);

nlohmann::json config_to_json(const RunConfig& config);

// Curve serialization. CSV columns: sigma,expected_lineages[,stderr].
std::string curve_to_csv(const LttCurve& curve);
nlohmann::json curve_to_json(const LttCurve& curve, const nlohmann::json& config = nullptr);
LttCurve curve_from_json(const nlohmann::json& j);
void emit_curve(const LttCurve& curve, Format format, const std::string& path, std::ostream& stdout_stream,
                const nlohmann::json& config = nullptr);

std::string pmf_to_csv(const LineagePmf& pmf);
nlohmann::json pmf_to_json(const LineagePmf& pmf, const BirthDeathParams& params,
                           const nlohmann::json& config = nullptr);

// SVG line charts.
struct SeriesStyle {
  std::string color = "#1f77b4";
  std::string label;
};

struct SvgStyle {
  std::string title;
  std::vector<SeriesStyle> series;  // per curve; cycled if shorter
  std::vector<SeriesStyle> legend;  // defaults to the labelled series
  bool diagonal_reference = false;  // draw 1 + (n - 1) sigma
  std::string reference_label = "straight line";
};

std::string render_svg(const std::vector<LttCurve>& curves, const SvgStyle& style);
void emit_svg(const std::vector<LttCurve>& curves, const SvgStyle& style, const std::string& path,
              std::ostream& stdout_stream);

struct FigurePreset {
  std::vector<LttCurve> curves;
  SvgStyle style;
};

// n = 10, t = 10, lambda in {5, 2, 1, 0.5, 0.2, 0.1, 0.01},
// rho in {0, 1/4, 1/2, 3/4, 1}; one colour per rho.
FigurePreset figure1_preset(const std::vector<double>& sigma_grid, const QuadratureSpec& quad = {});
// n = 10, uniform age prior, rho in {1, 3/4, 1/2, 1/4, 0}, plus the
// straight line.
FigurePreset figure2_preset(const std::vector<double>& sigma_grid, const QuadratureSpec& quad = {});

inline const std::vector<double> kFigure1Lambdas = {5.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.01};
inline const std::vector<double> kFigureRhos = {0.0, 0.25, 0.5, 0.75, 1.0};

// Cross-check suite behind `ltt verify`.
struct PropertyResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // worst deviation found
  double tolerance = 0.0;
  std::string detail;      // where the worst case occurred
};

std::vector<PropertyResult> run_verify_suite(const QuadratureSpec& quad = {});

}  // namespace ltt::cli
