#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "ltt/analytic.hpp"
#include "ltt/sim.hpp"

namespace ltt::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ltt");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) result.push_back(line);
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("ltt-test-" + std::to_string(std::rand()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(Expect, BoundaryRows) {
  const Outcome o = invoke({"expect", "--condition", "origin", "--n", "10", "--lambda", "1", "--mu", "0.5", "--age",
                            "10", "--grid", "101"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[0], "sigma,expected_lineages");
  EXPECT_EQ(rows[1], "0,1");
  EXPECT_EQ(rows[101], "1,10");
  EXPECT_EQ(o.out.find('\r'), std::string::npos);
}

TEST(Expect, ExplicitSigmaList) {
  const Outcome o = invoke({"expect", "--age", "2", "--n", "2", "--sigma", "0.5"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 2u);
  const double e = std::exp(-1.0);
  EXPECT_EQ(rows[1], "0.5," + format_double((1 + 2 * e) / (1 + e)));
}

TEST(Expect, UniformPriorJson) {
  const Outcome o =
      invoke({"expect", "--condition", "uniform-prior", "--n", "2", "--sigma", "0.5", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["source"], "analytic");
  EXPECT_NEAR(j["points"][0]["expected_lineages"].get<double>(), 4.0 / 3.0, 1e-15);
  EXPECT_EQ(j["config"]["command"], "expect");
  EXPECT_EQ(j["config"]["condition"]["kind"], "uniform-prior");
}

TEST(Serialization, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Serialization, CsvSchema) {
  LttCurve analytic{OriginAge{1.0}, 3, BirthDeathParams(1.0, 0.0), {{0.0, 1.0, std::nullopt}, {1.0, 3.0, std::nullopt}},
                    CurveSource::kAnalytic, std::nullopt};
  EXPECT_EQ(curve_to_csv(analytic), "sigma,expected_lineages\n0,1\n1,3\n");
  LttCurve mc = analytic;
  mc.source = CurveSource::kMonteCarlo;
  mc.points[0].standard_error = 0.0;
  mc.points[1].standard_error = 0.25;
  EXPECT_EQ(curve_to_csv(mc), "sigma,expected_lineages,stderr\n0,1,0\n1,3,0.25\n");
}

TEST(Serialization, JsonRoundTrip) {
  const LttCurve analytic = ltt_curve(MrcaAge{3.0}, 7, BirthDeathParams(1.3, 0.4), uniform_sigma_grid(11));
  EXPECT_EQ(curve_from_json(nlohmann::json::parse(curve_to_json(analytic).dump())), analytic);

  McOptions options;
  options.reps = 200;
  options.seed = 21;
  const LttCurve mc = mc_ltt(Survival{2.0}, 1, BirthDeathParams(1.0, 0.5), {0.1, 0.7}, options);
  EXPECT_EQ(curve_from_json(nlohmann::json::parse(curve_to_json(mc).dump())), mc);

  const LttCurve prior = ltt_curve(UniformAgePrior{}, 4, BirthDeathParams(1.0, 1.0), {0.3});
  EXPECT_EQ(curve_from_json(nlohmann::json::parse(curve_to_json(prior).dump(2))), prior);
}

TEST(Density, PmfRows) {
  const Outcome o = invoke({"density", "--n", "5", "--sigma", "0.5", "--age", "3", "--mu", "0.5"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "m,probability");
  double total = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i].substr(rows[i].find(',') + 1));
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(AgeDensity, Rows) {
  const Outcome o = invoke({"age-density", "--n", "1", "--grid", "4", "--age", "8"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "t,density");
  EXPECT_EQ(rows[1], "2," + format_double(age_density(2.0, 1, BirthDeathParams(1.0, 0.0))));
  EXPECT_EQ(rows[4].substr(0, 2), "8,");
}

TEST(Simulate, CsvWithStderrAndRecords) {
  TempDir dir;
  const fs::path records = dir.path() / "records.csv";
  const fs::path out = dir.path() / "curve.csv";
  const Outcome o = invoke({"simulate", "--condition", "origin", "--lambda", "0.5", "--age", "4", "--n", "3",
                            "--sigma", "0,0.5,1", "--reps", "200", "--seed", "5", "--records", records.string(),
                            "--out", out.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  const auto rows = lines(slurp(out));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "sigma,expected_lineages,stderr");
  EXPECT_EQ(rows[1], "0,1,0");
  EXPECT_EQ(rows[3], "1,3,0");
  EXPECT_EQ(lines(slurp(records)).size(), 601u);
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    EXPECT_EQ(entry.path().string().find(".tmp"), std::string::npos);
  }
}

TEST(Simulate, SeedFromEnvironment) {
  const std::vector<std::string> args = {"simulate", "--age", "3", "--n", "3", "--sigma", "0.5", "--reps", "200",
                                         "--format", "json"};
  setenv("LTT_SEED", "77", 1);
  const Outcome a = invoke(args);
  unsetenv("LTT_SEED");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(nlohmann::json::parse(a.out)["sampling"]["seed"], 77);

  std::vector<std::string> explicit_seed = args;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "77"});
  EXPECT_EQ(invoke(explicit_seed).out, a.out);
  EXPECT_NE(invoke(args).out, a.out);
}

TEST(Config, FileBelowFlags) {
  TempDir dir;
  const fs::path config = dir.path() / "run.ini";
  std::ofstream(config) << "lambda=2\nmu=1\nn=4\nage=3\ngrid=3\n";
  const Outcome from_file = invoke({"expect", "--config", config.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const auto rows = lines(from_file.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2], "0.5," + format_double(expect_given_origin(4, 0.5, 3.0, BirthDeathParams(2.0, 1.0))));

  const Outcome override = invoke({"expect", "--config", config.string(), "--n", "6"});
  EXPECT_EQ(lines(override.out)[3], "1,6");
}

TEST(Verify, AllPropertiesPass) {
  const Outcome o = invoke({"verify"});
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("PASS normalization"), std::string::npos);
  EXPECT_NE(o.out.find("PASS survival decomposition"), std::string::npos);
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
  for (const PropertyResult& r : run_verify_suite()) EXPECT_TRUE(r.passed) << r.name << " " << r.detail;
}

TEST(Plot, FigureTwoOrdering) {
  const FigurePreset fig = figure2_preset(uniform_sigma_grid(21));
  ASSERT_EQ(fig.curves.size(), 5u);
  EXPECT_TRUE(fig.style.diagonal_reference);
  // Listed bottom to top: values at sigma = 0.5 increase along the list.
  for (std::size_t k = 1; k < fig.curves.size(); ++k) {
    EXPECT_GT(fig.curves[k].points[10].expected_lineages, fig.curves[k - 1].points[10].expected_lineages);
  }
  const std::string svg = render_svg(fig.curves, fig.style);
  EXPECT_NE(svg.find("rho = 0 (Yule)"), std::string::npos);
  EXPECT_NE(svg.find("straight line"), std::string::npos);
}

TEST(Plot, FigureOneHasThirtyFiveCurvesAndFiveColours) {
  const FigurePreset fig = figure1_preset(uniform_sigma_grid(11));
  ASSERT_EQ(fig.curves.size(), 35u);
  ASSERT_EQ(fig.style.legend.size(), 5u);
  for (std::size_t k = 0; k < fig.curves.size(); ++k) {
    EXPECT_EQ(fig.style.series[k].color, fig.style.legend[k / 7].color);
  }
  const Outcome o = invoke({"plot", "--fig", "1", "--grid", "11"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, render_svg(fig.curves, fig.style));
}

TEST(Plot, DeterministicSvg) {
  const Outcome a = invoke({"plot", "--fig", "2", "--grid", "21"});
  const Outcome b = invoke({"plot", "--fig", "2", "--grid", "21"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("<?xml", 0), 0u);
  std::size_t polylines = 0;
  for (std::size_t pos = a.out.find("<polyline"); pos != std::string::npos; pos = a.out.find("<polyline", pos + 1)) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 2u + 1u + 5u);  // axes, straight line, model curves
}

TEST(Plot, SingleFlatCurve) {
  const LttCurve flat{OriginAge{1.0}, 1, BirthDeathParams(1.0, 0.0), {{0.0, 1.0, {}}, {1.0, 1.0, {}}},
                      CurveSource::kAnalytic, std::nullopt};
  const std::string svg = render_svg({flat}, SvgStyle{});
  EXPECT_NE(svg.find("points=\"70.00,440.00 560.00,440.00\""), std::string::npos);
  EXPECT_THROW(render_svg({}, SvgStyle{}), UsageError);
}

TEST(ExitCodes, UsageErrorsNameTheFlag) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"expect", "--age", "1", "--reps", "5"}, "--reps"},
      {{"expect", "--condition", "mrca"}, "--age"},
      {{"expect", "--condition", "uniform-prior", "--age", "2"}, "--age"},
      {{"density", "--age", "1", "--sigma", "0.1,0.2"}, "--sigma"},
      {{"density", "--age", "1", "--sigma", "0.1", "--condition", "survival"}, "--condition"},
      {{"expect", "--age", "1", "--fig", "1"}, "--fig"},
      {{"expect", "--age", "1", "--bogus"}, "--bogus"},
      {{"expect", "--age", "1", "--format", "xml"}, "--format"},
      {{"expect", "--age", "1", "--sigma", "1.5"}, "--sigma"},
      {{"expect", "--age", "1", "--mu", "-1"}, "--mu"},
      {{"simulate", "--age", "1", "--reps", "10"}, "--reps"},
  };
  for (const auto& [args, flag] : cases) {
    const Outcome o = invoke(args);
    EXPECT_EQ(o.code, kExitUsage) << args[1];
    EXPECT_NE(o.err.find(flag), std::string::npos) << o.err;
  }
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(ExitCodes, UnsupportedConditionIsUsage) {
  EXPECT_EQ(invoke({"expect", "--condition", "uniform-prior", "--mu", "2"}).code, kExitUsage);
}

TEST(ExitCodes, NumericFailure) {
  const Outcome o = invoke({"expect", "--condition", "uniform-prior", "--mu", "0.5", "--sigma", "0.5", "--abs-tol",
                            "1e-17", "--rel-tol", "1e-17"});
  EXPECT_EQ(o.code, kExitNumeric) << o.err;
  EXPECT_NE(o.err.find("sigma"), std::string::npos);
}

TEST(ExitCodes, BudgetExhaustion) {
  const Outcome o = invoke({"simulate", "--lambda", "0.01", "--age", "1", "--n", "40", "--sigma", "0.5", "--reps",
                            "100"});
  EXPECT_EQ(o.code, kExitBudget) << o.err;
}

TEST(ExitCodes, UnwritablePath) {
  const Outcome o = invoke({"expect", "--age", "1", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(o.code, kExitFailure);
}

}  // namespace
}  // namespace ltt::cli
