#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "ltt/analytic.hpp"
#include "ltt/errors.hpp"
#include "ltt/sim.hpp"

namespace ltt::cli {
namespace {

struct RawFlags {
  double lambda = 1.0;
  double mu = 0.0;
  int n = 10;
  std::string condition = "origin";
  double age = 0.0;
  std::vector<double> sigma;
  int grid = 101;
  std::uint64_t reps = 10000;
  std::uint64_t seed = 1;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::string format = "csv";
  std::string out = "-";
  std::string records;
  int fig = 0;
};

// Flags that only make sense for a subset of commands.
const std::map<std::string, std::vector<Command>> kRestricted = {
    {"--reps", {Command::kSimulate}},
    {"--records", {Command::kSimulate}},
    {"--fig", {Command::kPlot}},
};

void check_allowed(const CLI::App& app, Command command) {
  for (const auto& [flag, commands] : kRestricted) {
    const CLI::Option* opt = app.get_option(flag);
    if (opt->count() == 0) continue;
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
      throw UsageError("flag " + flag + " is not valid for this command");
    }
  }
}

std::vector<double> effective_grid(const RunConfig& c) {
  if (!c.sigma_grid.empty()) return c.sigma_grid;
  return uniform_sigma_grid(c.grid);
}

int execute(const RunConfig& c, std::ostream& out) {
  const nlohmann::json config = config_to_json(c);
  switch (c.command) {
    case Command::kExpect: {
      const LttCurve curve = ltt_curve(c.condition, c.n, c.params, effective_grid(c), c.quad);
      emit_curve(curve, c.format, c.out, out, config);
      return kExitOk;
    }
    case Command::kDensity: {
      const double sigma = c.sigma_grid.front();
      LineagePmf pmf;
      if (auto* o = std::get_if<OriginAge>(&c.condition)) {
        pmf = pmf_given_origin(c.n, sigma, o->t, c.params);
      } else if (auto* m = std::get_if<MrcaAge>(&c.condition)) {
        pmf = pmf_given_mrca(c.n, sigma, m->t, c.params);
      } else {
        pmf = pmf_unknown_age(c.n, sigma, c.params, c.quad);
      }
      const std::string text =
          c.format == Format::kCsv ? pmf_to_csv(pmf) : pmf_to_json(pmf, c.params, config).dump(2) + "\n";
      write_artifact(c.out, text, out);
      return kExitOk;
    }
    case Command::kAgeDensity: {
      const double timescale = c.params.delta() > 0.0 ? c.params.delta() : c.params.lambda();
      const double t_max = c.age.value_or(10.0 / timescale);
      std::string text;
      nlohmann::json rows = nlohmann::json::array();
      if (c.format == Format::kCsv) text = "t,density\n";
      for (int i = 1; i <= c.grid; ++i) {
        const double t = t_max * i / c.grid;
        const double q = age_density(t, c.n, c.params);
        if (c.format == Format::kCsv) {
          text += format_double(t) + "," + format_double(q) + "\n";
        } else {
          rows.push_back({{"t", t}, {"density", q}});
        }
      }
      if (c.format == Format::kJson) text = nlohmann::json{{"points", rows}, {"config", config}}.dump(2) + "\n";
      write_artifact(c.out, text, out);
      return kExitOk;
    }
    case Command::kSimulate: {
      McOptions options;
      options.reps = c.reps;
      options.seed = c.seed;
      options.quad = c.quad;
      std::ostringstream records;
      if (!c.records.empty()) options.records = &records;
      const LttCurve curve = mc_ltt(c.condition, c.n, c.params, effective_grid(c), options);
      if (!c.records.empty()) write_artifact(c.records, records.str(), out);
      emit_curve(curve, c.format, c.out, out, config);
      return kExitOk;
    }
    case Command::kVerify: {
      const std::vector<PropertyResult> results = run_verify_suite(c.quad);
      std::ostringstream os;
      bool all = true;
      for (const PropertyResult& r : results) {
        all = all && r.passed;
        os << (r.passed ? "PASS " : "FAIL ") << r.name << ": worst deviation " << format_double(r.observed)
           << " (tolerance " << r.tolerance << ")";
        if (!r.passed) os << " at " << r.detail;
        os << "\n";
      }
      os << (all ? "all properties passed\n" : "some properties FAILED\n");
      write_artifact(c.out, os.str(), out);
      return all ? kExitOk : kExitFailure;
    }
    case Command::kPlot: {
      const std::vector<double> grid = effective_grid(c);
      if (c.fig == 1 || c.fig == 2) {
        const FigurePreset fig = c.fig == 1 ? figure1_preset(grid, c.quad) : figure2_preset(grid, c.quad);
        emit_svg(fig.curves, fig.style, c.out, out);
      } else {
        const LttCurve curve = ltt_curve(c.condition, c.n, c.params, grid, c.quad);
        SvgStyle style;
        style.title = std::string("Expected lineages (") + condition_name(c.condition) + ")";
        style.series.push_back(SeriesStyle{"#1f4fd6", "n = " + std::to_string(c.n)});
        emit_svg({curve}, style, c.out, out);
      }
      return kExitOk;
    }
  }
  return kExitFailure;
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Lineage-through-time distributions of birth-death trees conditioned on n extant species", "ltt"};
  app.set_config("--config", "", "Flat key=value file using the long flag names");
  app.require_subcommand(1);

  RawFlags f;
  app.add_option("--lambda", f.lambda, "Birth rate (> 0)");
  app.add_option("--mu", f.mu, "Death rate (>= 0)");
  app.add_option("--n", f.n, "Number of extant species");
  app.add_option("--condition", f.condition, "origin | mrca | survival | uniform-prior")
      ->check(CLI::IsMember({"origin", "mrca", "survival", "uniform-prior"}));
  app.add_option("--age", f.age, "Tree age (origin/MRCA/survival); t range for age-density");
  app.add_option("--sigma", f.sigma, "Relative time(s) in [0, 1]; comma-separated for a list")->delimiter(',');
  app.add_option("--grid", f.grid, "Number of uniform sigma (or t) grid points");
  app.add_option("--reps", f.reps, "Accepted trees for simulate");
  app.add_option("--seed", f.seed, "RNG seed for simulate")->envname("LTT_SEED");
  app.add_option("--abs-tol", f.abs_tol, "Quadrature absolute tolerance");
  app.add_option("--rel-tol", f.rel_tol, "Quadrature relative tolerance");
  app.add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", f.out, "Output path, '-' for stdout");
  app.add_option("--records", f.records, "simulate: write replicate,sigma,count records to this path");
  app.add_option("--fig", f.fig, "plot: reproduce figure 1 or 2")->check(CLI::IsMember({1, 2}));

  const std::map<std::string, Command> commands = {
      {"expect", Command::kExpect},     {"density", Command::kDensity}, {"age-density", Command::kAgeDensity},
      {"simulate", Command::kSimulate}, {"verify", Command::kVerify},   {"plot", Command::kPlot}};
  const std::map<std::string, std::string> help = {
      {"expect", "Expected lineage counts over a sigma grid"},
      {"density", "Lineage-count distribution at one sigma"},
      {"age-density", "Origin-age density under the uniform age prior"},
      {"simulate", "Monte-Carlo LTT curve from conditioned simulations"},
      {"verify", "Run the analytic cross-check suite"},
      {"plot", "Write an SVG line chart"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  c.command = commands.at(app.get_subcommands().front()->get_name());
  check_allowed(app, c.command);

  try {
    c.params = BirthDeathParams(f.lambda, f.mu);
  } catch (const Error& e) {
    throw UsageError(std::string(e.what()) + " (flags --lambda/--mu)");
  }
  c.n = f.n;
  c.grid = f.grid;
  c.sigma_grid = f.sigma;
  c.reps = f.reps;
  c.seed = f.seed;
  c.quad = QuadratureSpec{f.abs_tol, f.rel_tol, QuadratureSpec{}.max_subdivisions};
  c.format = f.format == "json" ? Format::kJson : Format::kCsv;
  c.out = f.out;
  c.records = f.records;
  c.fig = f.fig;

  const bool age_given = app.get_option("--age")->count() > 0;
  if (age_given) c.age = f.age;
  const bool uses_condition = c.command == Command::kExpect || c.command == Command::kDensity ||
                              c.command == Command::kSimulate || (c.command == Command::kPlot && c.fig == 0);
  if (uses_condition) {
    if (f.condition == "uniform-prior") {
      if (age_given) throw UsageError("flag --age is not valid with --condition uniform-prior");
      c.condition = UniformAgePrior{};
    } else {
      if (!age_given) throw UsageError("flag --age is required for --condition " + f.condition);
      if (!(f.age > 0.0)) throw UsageError("flag --age must be positive");
      if (f.condition == "origin") c.condition = OriginAge{f.age};
      if (f.condition == "mrca") c.condition = MrcaAge{f.age};
      if (f.condition == "survival") c.condition = Survival{f.age};
    }
  } else if (app.get_option("--condition")->count() > 0) {
    throw UsageError("flag --condition is not valid for this command");
  }

  if (c.n < 1) throw UsageError("flag --n must be >= 1");
  if (std::holds_alternative<MrcaAge>(c.condition) && uses_condition && c.n < 2) {
    throw UsageError("flag --n must be >= 2 with --condition mrca");
  }
  if (c.command == Command::kDensity) {
    if (c.sigma_grid.size() != 1) throw UsageError("flag --sigma must give exactly one value for density");
    if (std::holds_alternative<Survival>(c.condition)) {
      throw UsageError("flag --condition survival is not supported by density");
    }
  }
  if (c.command == Command::kAgeDensity && age_given && !(f.age > 0.0)) {
    throw UsageError("flag --age must be positive");
  }
  if (c.grid < (c.command == Command::kAgeDensity ? 1 : 2)) throw UsageError("flag --grid is too small");
  if (!(c.quad.abs_tol > 0.0)) throw UsageError("flag --abs-tol must be positive");
  if (!(c.quad.rel_tol > 0.0)) throw UsageError("flag --rel-tol must be positive");
  if (c.command == Command::kSimulate && c.reps < 100) throw UsageError("flag --reps must be >= 100");
  if (!c.sigma_grid.empty()) {
    try {
      validate_sigma_grid(c.sigma_grid);
    } catch (const Error& e) {
      throw UsageError(std::string("flag --sigma: ") + e.what());
    }
  }
  if (c.command == Command::kPlot && c.format == Format::kJson) {
    throw UsageError("flag --format is not valid for plot (always SVG)");
  }
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> config = parse_args(args, out);
    if (!config) return kExitOk;
    return execute(*config, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "simulation budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const AccuracyError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedCondition& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ltt::cli
