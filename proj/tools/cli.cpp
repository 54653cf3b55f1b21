#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <string>
#include <utility>
#include <variant>

#include <CLI11.hpp>

#include "gjms/csv.hpp"
#include "gjms/error.hpp"
#include "gjms/moving_spheres.hpp"
#include "gjms/riesz.hpp"
#include "gjms/sobolev_opt.hpp"
#include "gjms/special_functions.hpp"

namespace gjms::cli {

namespace {

constexpr double kProductTolerance = 1e-10;
constexpr double kDefaultBubbleTol = 1e-4;
constexpr double kDefaultThresholdTol = 1e-3;

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct Outcome {
  Table table;
  int code = kExitOk;
  std::string summary;
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string render_csv(const Table& t) {
  CsvTable csv(t.header);
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (const Cell& c : row) cells.push_back(cell_text(c));
    csv.add_row(std::move(cells));
  }
  return csv.str();
}

std::string render_json(const Table& t, const RunConfig& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t k = 0; k < row.size(); ++k) r[t.header[k]] = cell_json(row[k]);
    rows.push_back(std::move(r));
  }
  nlohmann::json doc{{"config", config}, {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

ProblemParams resolve_params(const RunConfig& c, double epsilon) {
  return c.alpha ? ProblemParams::make(c.n, c.s, *c.alpha, epsilon) : ProblemParams::critical(c.n, c.s, epsilon);
}

double single_epsilon(const RunConfig& c) {
  if (c.epsilon.size() > 1) throw ConfigError(c.subcommand + " takes at most one --epsilon");
  return c.epsilon.empty() ? 0.0 : c.epsilon.front();
}

// ---------------------------------------------------------------------------

Outcome cmd_multipliers(RunConfig& c) {
  if (c.L < 0) throw ConfigError("--L must be >= 0");
  const ProblemParams params = resolve_params(c, 0.0);
  const bool integer_s = c.s == std::floor(c.s);
  Outcome o;
  o.table.header = {"l", "multiplier", "three_term", "expansion_gap", "integer_product", "product_rel_error"};
  double worst = 0.0;
  for (int l = 0; l <= c.L; ++l) {
    const MultiplierExpansion e = multiplier_expansion_check(params, l);
    std::vector<Cell> row{static_cast<long long>(l), e.exact, e.three_term, e.gap};
    if (integer_s) {
      const double product = integer_order_product(c.n, static_cast<int>(c.s), l);
      const double err = std::abs(product - e.exact) / std::abs(e.exact);
      worst = std::max(worst, err);
      row.insert(row.end(), {product, err});
    } else {
      row.insert(row.end(), {std::string(), std::string()});
    }
    o.table.rows.push_back(std::move(row));
  }
  if (worst > kProductTolerance) o.code = kExitTolerance;
  o.summary = std::to_string(c.L + 1) + " rows";
  return o;
}

Outcome cmd_verify_bubble(RunConfig& c) {
  const ProblemParams params = resolve_params(c, single_epsilon(c));
  if (!c.tol) c.tol = kDefaultBubbleTol;
  if (!(*c.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (!c.amplitude) c.amplitude = constant_solution_amplitude(params);
  std::vector<double> radii = c.radii;
  std::sort(radii.begin(), radii.end());

  Bubble bubble = Bubble::standard(c.n);
  bubble.amplitude = *c.amplitude;
  RieszOptions options;
  options.rel_tol = c.quad_tol;
  options.max_level = c.quad_level;
  const ResidualReport report = verify_integral_equation(params, bubble, radii, options);

  Outcome o;
  o.table.header = {"r", "lhs", "rhs", "rel_error"};
  for (std::size_t k = 0; k < report.radii.size(); ++k) {
    o.table.rows.push_back({report.radii[k], report.lhs[k], report.rhs[k], report.rel_error_at(k)});
  }
  if (!(report.rel_error < *c.tol)) o.code = kExitTolerance;
  o.summary = "max rel_error " + format_double(report.rel_error);
  return o;
}

Outcome cmd_sobolev(RunConfig& c) {
  for (double eps : c.epsilon) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("epsilon must lie in (0, 1), got " + format_double(eps));
  }
  std::vector<InitKind> inits;
  for (const auto& name : c.init) inits.push_back(parse_init(name));
  std::vector<double> eps_sorted = c.epsilon;
  std::sort(eps_sorted.begin(), eps_sorted.end());
  for (double eps : eps_sorted) resolve_params(c, eps);

  struct Job {
    double eps;
    InitKind init;
    std::future<OptimizerState> state;
  };
  std::vector<Job> jobs;
  for (double eps : eps_sorted) {
    for (InitKind kind : inits) {
      const ProblemParams params = resolve_params(c, eps);
      const int L = c.L;
      const int M = c.M;
      const std::uint64_t seed = c.seed;
      jobs.push_back({eps, kind, std::async(std::launch::async, [params, L, M, seed, kind] {
                        return minimize(params, L, M, make_init(kind, params, L, M, seed));
                      })});
    }
  }

  Outcome o;
  o.table.header = {"epsilon", "init", "s_numeric", "s_closed_form", "rel_error", "iterations", "status"};
  bool all_converged = true;
  double worst = 0.0;
  for (Job& job : jobs) {
    const OptimizerState st = job.state.get();
    const double closed = perturbed_constant(resolve_params(c, job.eps));
    const double err = std::abs(st.objective - closed) / closed;
    worst = std::max(worst, err);
    all_converged = all_converged && st.converged;
    o.table.rows.push_back({job.eps, std::string(init_name(job.init)), st.objective, closed, err,
                            static_cast<long long>(st.iteration), st.status});
  }
  if (!all_converged) {
    o.code = kExitConvergence;
  } else if (!(worst < c.bound)) {
    o.code = kExitTolerance;
  }
  o.summary = std::to_string(jobs.size()) + " runs, max rel_error " + format_double(worst);
  return o;
}

Outcome cmd_moving_spheres(RunConfig& c) {
  if (!c.tol) c.tol = kDefaultThresholdTol;
  const double tol = *c.tol;
  if (!(tol > 0.0)) throw ConfigError("--tol must be positive (bisection would not terminate)");
  const ProblemParams params = resolve_params(c, 0.0);
  std::vector<double> norms = c.x;
  std::sort(norms.begin(), norms.end());
  for (double r : norms) {
    if (!(r > 0.0)) throw ConfigError("--x values must be positive");
  }

  ThresholdOptions options;
  options.seed = c.seed;
  std::vector<std::future<ThresholdResult>> jobs;
  for (double r : norms) {
    Point x(static_cast<std::size_t>(c.n), 0.0);
    x[0] = r;
    jobs.push_back(std::async(std::launch::async, [x, params, tol, options] {
      return lambda_bar(x, params, tol, options);
    }));
  }

  Outcome o;
  o.table.header = {"x_norm", "lambda_bar_numeric", "lambda_bar_closed_form", "abs_gap", "samples_used", "monotone"};
  bool ok = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const ThresholdResult t = jobs[k].get();
    worst = std::max(worst, t.abs_gap);
    ok = ok && t.monotone && t.abs_gap <= 2.0 * tol;
    o.table.rows.push_back({norms[k], t.lambda_bar_numeric, t.lambda_bar_closed_form, t.abs_gap,
                            static_cast<long long>(t.samples_used), std::string(t.monotone ? "true" : "false")});
  }
  if (!ok) o.code = kExitTolerance;
  o.summary = "max gap " + format_double(worst);
  return o;
}

Outcome dispatch(RunConfig& c) {
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");
  if (c.subcommand == "multipliers") return cmd_multipliers(c);
  if (c.subcommand == "verify-bubble") return cmd_verify_bubble(c);
  if (c.subcommand == "sobolev") return cmd_sobolev(c);
  if (c.subcommand == "moving-spheres") return cmd_moving_spheres(c);
  throw ConfigError("unknown subcommand " + c.subcommand);
}

int execute(RunConfig c, std::ostream& out) {
  Outcome o = dispatch(c);
  if (!c.alpha) c.alpha = critical_exponent(c.n, c.s);
  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  const std::string body = c.format == "csv" ? render_csv(o.table) : render_json(o.table, c);
  write_file(dir / (c.subcommand + "." + c.format), body);
  write_file(dir / "config.json", nlohmann::json(c).dump(2) + "\n");
  out << body;
  out << "# " << c.subcommand << ": " << o.summary << ", exit " << o.code << "\n";
  return o.code;
}

}  // namespace

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"subcommand", c.subcommand},
                     {"n", c.n},
                     {"s", c.s},
                     {"alpha", c.alpha ? nlohmann::json(*c.alpha) : nlohmann::json()},
                     {"epsilon", c.epsilon},
                     {"L", c.L},
                     {"M", c.M},
                     {"quad_tol", c.quad_tol},
                     {"quad_level", c.quad_level},
                     {"seed", c.seed},
                     {"tol", c.tol ? nlohmann::json(*c.tol) : nlohmann::json()},
                     {"bound", c.bound},
                     {"amplitude", c.amplitude ? nlohmann::json(*c.amplitude) : nlohmann::json()},
                     {"x", c.x},
                     {"radii", c.radii},
                     {"init", c.init},
                     {"out", c.out},
                     {"format", c.format}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  const auto opt = [&j](const char* key, std::optional<double>& field) {
    if (j.contains(key)) field = j.at(key).is_null() ? std::nullopt : std::optional(j.at(key).get<double>());
  };
  const auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("subcommand", c.subcommand);
  get("n", c.n);
  get("s", c.s);
  opt("alpha", c.alpha);
  get("epsilon", c.epsilon);
  get("L", c.L);
  get("M", c.M);
  get("quad_tol", c.quad_tol);
  get("quad_level", c.quad_level);
  get("seed", c.seed);
  opt("tol", c.tol);
  get("bound", c.bound);
  opt("amplitude", c.amplitude);
  get("x", c.x);
  get("radii", c.radii);
  get("init", c.init);
  get("out", c.out);
  get("format", c.format);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"GJMS operators on spheres: multipliers, bubbles, sharp constants and moving spheres"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  double alpha = 0.0, tol = 0.0, amplitude = 0.0;
  std::string config_path;
  const auto* o_config = app.add_option("--config", config_path, "JSON config of an earlier run")->check(CLI::ExistingFile);
  const auto* o_n = app.add_option("--n", flags.n, "dimension of the sphere");
  const auto* o_s = app.add_option("--s", flags.s, "half the operator order");
  const auto* o_alpha = app.add_option("--alpha", alpha, "nonlinearity exponent (default: critical)");
  const auto* o_eps = app.add_option("--epsilon", flags.epsilon, "perturbation, repeatable");
  const auto* o_L = app.add_option("--L", flags.L, "spectral degree");
  const auto* o_M = app.add_option("--M", flags.M, "quadrature nodes");
  const auto* o_qtol = app.add_option("--quad-tol", flags.quad_tol, "level agreement of the Riesz quadrature");
  const auto* o_qlev = app.add_option("--quad-level", flags.quad_level, "deepest Riesz quadrature level");
  const auto* o_seed = app.add_option("--seed", flags.seed, "random seed");
  const auto* o_tol = app.add_option("--tol", tol, "residual or bisection tolerance");
  const auto* o_bound = app.add_option("--bound", flags.bound, "relative error bound for sobolev");
  const auto* o_amp = app.add_option("--amplitude", amplitude, "bubble amplitude for verify-bubble");
  const auto* o_x = app.add_option("--x", flags.x, "|x| values for moving-spheres");
  const auto* o_radii = app.add_option("--radii", flags.radii, "radii for verify-bubble");
  const auto* o_init = app.add_option("--init", flags.init, "noisy_constant, pole_bubble or constant");
  const auto* o_out = app.add_option("--out", flags.out, "output directory");
  const auto* o_format = app.add_option("--format", flags.format, "csv or json");

  app.add_subcommand("multipliers", "multiplier table for l = 0..L");
  app.add_subcommand("verify-bubble", "bubble residual of the integral equation");
  app.add_subcommand("sobolev", "perturbed Sobolev minimization over the epsilon list");
  app.add_subcommand("moving-spheres", "numeric moving-sphere threshold against sqrt(1+|x|^2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    RunConfig c;
    if (o_config->count() > 0) {
      std::ifstream f(config_path);
      c = nlohmann::json::parse(f).get<RunConfig>();
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    const auto take = [](const CLI::Option* o, auto& dst, const auto& src) {
      if (o->count() > 0) dst = src;
    };
    take(o_n, c.n, flags.n);
    take(o_s, c.s, flags.s);
    if (o_alpha->count() > 0) c.alpha = alpha;
    take(o_eps, c.epsilon, flags.epsilon);
    take(o_L, c.L, flags.L);
    take(o_M, c.M, flags.M);
    take(o_qtol, c.quad_tol, flags.quad_tol);
    take(o_qlev, c.quad_level, flags.quad_level);
    take(o_seed, c.seed, flags.seed);
    if (o_tol->count() > 0) c.tol = tol;
    take(o_bound, c.bound, flags.bound);
    if (o_amp->count() > 0) c.amplitude = amplitude;
    take(o_x, c.x, flags.x);
    take(o_radii, c.radii, flags.radii);
    take(o_init, c.init, flags.init);
    take(o_out, c.out, flags.out);
    take(o_format, c.format, flags.format);
    return execute(std::move(c), out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace gjms::cli
