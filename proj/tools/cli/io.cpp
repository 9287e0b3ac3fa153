#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "ltt/errors.hpp"

namespace ltt::cli {
namespace {

using nlohmann::json;

json condition_to_json(const Condition& condition) {
  json j;
  j["kind"] = condition_name(condition);
  if (auto t = condition_age(condition)) j["age"] = *t;
  return j;
}

Condition condition_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "origin") return OriginAge{j.at("age").get<double>()};
  if (kind == "mrca") return MrcaAge{j.at("age").get<double>()};
  if (kind == "survival") return Survival{j.at("age").get<double>()};
  if (kind == "uniform-prior") return UniformAgePrior{};
  throw UsageError("unknown condition kind '" + kind + "'");
}

json params_to_json(const BirthDeathParams& p) {
  return json{{"lambda", p.lambda()}, {"mu", p.mu()}, {"delta", p.delta()}, {"rho", p.rho()}};
}

const char* command_name(Command c) {
  switch (c) {
    case Command::kExpect:
      return "expect";
    case Command::kDensity:
      return "density";
    case Command::kAgeDensity:
      return "age-density";
    case Command::kSimulate:
      return "simulate";
    case Command::kVerify:
      return "verify";
    case Command::kPlot:
      return "plot";
  }
  return "?";
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_artifact(const std::string& path, const std::string& contents, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << contents;
    stdout_stream.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f << contents;
    f.flush();
    if (!f) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  j["lambda"] = c.params.lambda();
  j["mu"] = c.params.mu();
  j["n"] = c.n;
  j["condition"] = condition_to_json(c.condition);
  j["grid"] = c.grid;
  if (!c.sigma_grid.empty()) j["sigma"] = c.sigma_grid;
  if (c.age) j["age"] = *c.age;
  j["format"] = c.format == Format::kCsv ? "csv" : "json";
  j["seed"] = c.seed;
  j["reps"] = c.reps;
  j["abs_tol"] = c.quad.abs_tol;
  j["rel_tol"] = c.quad.rel_tol;
  j["max_subdivisions"] = c.quad.max_subdivisions;
  if (c.fig != 0) j["fig"] = c.fig;
  return j;
}

std::string curve_to_csv(const LttCurve& curve) {
  const bool with_stderr = curve.source == CurveSource::kMonteCarlo;
  std::string s = with_stderr ? "sigma,expected_lineages,stderr\n" : "sigma,expected_lineages\n";
  for (const LttPoint& p : curve.points) {
    s += format_double(p.sigma);
    s += ',';
    s += format_double(p.expected_lineages);
    if (with_stderr) {
      s += ',';
      s += format_double(p.standard_error.value_or(0.0));
    }
    s += '\n';
  }
  return s;
}

json curve_to_json(const LttCurve& curve, const json& config) {
  json j;
  j["source"] = curve.source == CurveSource::kAnalytic ? "analytic" : "monte-carlo";
  j["condition"] = condition_to_json(curve.condition);
  j["n"] = curve.n;
  j["params"] = params_to_json(curve.params);
  json points = json::array();
  for (const LttPoint& p : curve.points) {
    json q{{"sigma", p.sigma}, {"expected_lineages", p.expected_lineages}};
    if (p.standard_error) q["stderr"] = *p.standard_error;
    points.push_back(q);
  }
  j["points"] = points;
  if (curve.sampling) {
    j["sampling"] = json{{"seed", curve.sampling->seed},
                         {"accepted", curve.sampling->accepted},
                         {"attempted", curve.sampling->attempted}};
  }
  if (!config.is_null()) j["config"] = config;
  return j;
}

LttCurve curve_from_json(const json& j) {
  const json& p = j.at("params");
  LttCurve curve{condition_from_json(j.at("condition")),
                 j.at("n").get<int>(),
                 BirthDeathParams(p.at("lambda").get<double>(), p.at("mu").get<double>()),
                 {},
                 j.at("source").get<std::string>() == "analytic" ? CurveSource::kAnalytic : CurveSource::kMonteCarlo,
                 std::nullopt};
  for (const json& q : j.at("points")) {
    LttPoint point{q.at("sigma").get<double>(), q.at("expected_lineages").get<double>(), std::nullopt};
    if (q.contains("stderr")) point.standard_error = q.at("stderr").get<double>();
    curve.points.push_back(point);
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    curve.sampling = SamplingStats{s.at("seed").get<std::uint64_t>(), s.at("accepted").get<std::uint64_t>(),
                                   s.at("attempted").get<std::uint64_t>()};
  }
  return curve;
}

void emit_curve(const LttCurve& curve, Format format, const std::string& path, std::ostream& stdout_stream,
                const json& config) {
  const std::string text = format == Format::kCsv ? curve_to_csv(curve) : curve_to_json(curve, config).dump(2) + "\n";
  write_artifact(path, text, stdout_stream);
}

std::string pmf_to_csv(const LineagePmf& pmf) {
  std::string s = "m,probability\n";
  for (int m = pmf.min_m; m <= pmf.max_m(); ++m) {
    s += std::to_string(m);
    s += ',';
    s += format_double(pmf.at(m));
    s += '\n';
  }
  return s;
}

json pmf_to_json(const LineagePmf& pmf, const BirthDeathParams& params, const json& config) {
  json j;
  j["condition"] = condition_to_json(pmf.condition);
  j["n"] = pmf.n;
  j["sigma"] = pmf.sigma;
  j["params"] = params_to_json(params);
  j["min_m"] = pmf.min_m;
  j["probs"] = pmf.probs;
  if (!config.is_null()) j["config"] = config;
  return j;
}

}  // namespace ltt::cli
