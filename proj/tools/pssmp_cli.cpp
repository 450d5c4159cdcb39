#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "pssmp/classify.hpp"
#include "pssmp/errors.hpp"
#include "pssmp/estimates.hpp"
#include "pssmp/format.hpp"
#include "pssmp/kernels.hpp"
#include "pssmp/phi.hpp"
#include "pssmp/simulate.hpp"
#include "pssmp/stable.hpp"
#include "run_config.hpp"

using nlohmann::json;
using namespace pssmp;
using cli::RunConfig;

namespace {

constexpr int kParamExit = 2;
constexpr int kNumericExit = 3;

const char* kSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "pssmp reports",
  "$defs": {
    "num": {"type": ["number", "null"]},
    "classify": {
      "type": "object",
      "required": ["alpha", "rho", "phi", "mean_xi1", "mean_xi1_fd", "verdict",
                   "absorption_infinite", "a_phi", "rho_critical", "kappa_star"],
      "properties": {
        "alpha": {"type": "number"}, "rho": {"type": "number"}, "phi": {"type": "string"},
        "mean_xi1": {"type": "number"}, "mean_xi1_fd": {"type": "number"},
        "verdict": {"enum": ["infinite_absorption", "finite_absorption_continuous",
                             "boundary_zero_mean"]},
        "absorption_infinite": {"type": "boolean"},
        "a_phi": {"type": "number"},
        "rho_critical": {"$ref": "#/$defs/num"},
        "kappa_star": {"$ref": "#/$defs/num"}
      }
    },
    "censored_classify": {
      "type": "object",
      "required": ["alpha", "rho", "mean", "verdict"],
      "properties": {
        "alpha": {"type": "number"}, "rho": {"type": "number"}, "mean": {"type": "number"},
        "verdict": {"enum": ["infinite_absorption", "finite_absorption_continuous",
                             "boundary_zero_mean"]}
      }
    },
    "check_estimates": {
      "type": "object",
      "required": ["family", "branch", "ratio_min", "ratio_max", "near_spread", "pass", "near_pass"],
      "properties": {
        "family": {"type": "string"},
        "branch": {"type": "object", "required": ["up", "down"],
                   "properties": {"up": {"type": "string"}, "down": {"type": "string"}}},
        "ratio_min": {"type": "number"}, "ratio_max": {"type": "number"},
        "near_spread": {"type": "number"}, "pass": {"type": "boolean"},
        "near_pass": {"type": "boolean"}
      }
    },
    "symmetry": {
      "type": "object",
      "required": ["alpha", "phi", "symmetric", "residual", "method"],
      "properties": {
        "alpha": {"type": "number"}, "phi": {"type": "string"}, "symmetric": {"type": "boolean"},
        "residual": {"type": "number"}, "method": {"type": "string"}
      }
    },
    "recurrent_extension": {
      "type": "object",
      "required": ["alpha", "rho", "phi", "mean_xi1", "kappa_star", "h_residual"],
      "properties": {
        "alpha": {"type": "number"}, "rho": {"type": "number"}, "phi": {"type": "string"},
        "mean_xi1": {"type": "number"}, "kappa_star": {"type": "number"},
        "h_residual": {"type": "number"}
      }
    },
    "simulate": {
      "type": "object",
      "required": ["alpha", "rho", "phi", "paths", "seed", "horizon", "epsilon", "mean_xi1",
                   "endpoint_mean", "endpoint_se", "absorbed_fraction", "per_path"],
      "properties": {
        "paths": {"type": "integer", "minimum": 1}, "seed": {"type": "integer"},
        "per_path": {"type": "array", "items": {
          "type": "object",
          "required": ["path_id", "xi_bar_T", "clock_total", "absorbed", "absorption_time"],
          "properties": {
            "path_id": {"type": "integer"}, "xi_bar_T": {"type": "number"},
            "clock_total": {"type": "number"}, "absorbed": {"type": "boolean"},
            "absorption_time": {"$ref": "#/$defs/num"}
          }
        }}
      }
    }
  }
})json";

void require(double v, const char* name) {
  if (!std::isfinite(v)) throw ParameterError(std::string("--") + name + " is required");
}

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_num(double v) { return g17(v); }

std::vector<double> parse_alphas(const std::string& s) {
  double lo, hi;
  int n;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
    throw ParameterError("--alphas expects lo:hi:n");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

std::pair<int, int> parse_grid(const std::string& s) {
  int n, m;
  char x;
  std::istringstream is(s);
  if (!(is >> n >> x >> m) || (x != 'x' && x != 'X') || n < 1 || m < 1)
    throw ParameterError("--grid expects NxM");
  return {n, m};
}

std::string verdict_of(double mean, double tol) {
  if (std::abs(mean) <= tol) return to_string(Verdict::boundary_zero_mean);
  return to_string(mean > 0 ? Verdict::infinite_absorption : Verdict::finite_absorption_continuous);
}

void run_classify(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  require(c.rho, "rho");
  const StableParams p = validate(c.alpha, c.rho);
  const PhiPtr phi = parse_phi(c.phi, c.alpha, c.rho);
  const ClassificationReport r = classify(p, *phi, c.zero_tol);
  json j{{"alpha", r.alpha},
         {"rho", r.rho},
         {"phi", r.phi},
         {"mean_xi1", r.mean_xi1},
         {"mean_xi1_fd", mean_xi1_fd(p, *phi)},
         {"verdict", to_string(r.verdict)},
         {"absorption_infinite", r.absorption_infinite},
         {"a_phi", r.a_phi},
         {"rho_critical", r.rho_critical_admissible ? json(r.rho_critical) : json(nullptr)},
         {"kappa_star", opt_num(r.kappa_star)}};
  out << j.dump(2) << "\n";
}

void run_censored(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  require(c.rho, "rho");
  const StableParams p = validate(c.alpha, c.rho);
  const double m = censored_mean(p);
  json j{{"alpha", c.alpha}, {"rho", c.rho}, {"mean", m}, {"verdict", verdict_of(m, c.zero_tol)}};
  out << j.dump(2) << "\n";
}

PhiFactory factory(const std::string& spec) {
  if (phi_spec_coupled(spec))
    return [spec](double a, double r) { return parse_phi(spec, a, r); };
  const PhiPtr fixed = parse_phi(spec, 1.0, 0.5);
  return [fixed](double, double) { return fixed; };
}

void run_curve(const RunConfig& c, std::ostream& out) {
  const auto pts = critical_curve(factory(c.phi), parse_alphas(c.alphas));
  out << "alpha,rho_critical\n";
  for (const auto& pt : pts) out << csv_num(pt.alpha) << "," << csv_num(pt.rho) << "\n";
}

void run_region(const RunConfig& c, std::ostream& out) {
  const auto [n, m] = parse_grid(c.grid);
  const auto cells = region_grid(factory(c.phi), n, m, !c.serial, c.zero_tol);
  out << "alpha,rho,sign,mean\n";
  for (const auto& cell : cells) {
    out << csv_num(cell.alpha) << "," << csv_num(cell.rho) << ",";
    if (cell.admissible)
      out << cell.sign << "," << csv_num(cell.mean) << "\n";
    else
      out << "NA,NA\n";
  }
}

std::vector<double> parse_log_grid(const std::string& s, const char* name) {
  double lo, hi;
  int n;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(lo > 0.0) ||
      !(hi > 0.0))
    throw ParameterError(std::string("--") + name + " expects lo:hi:n with lo, hi > 0");
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1)));
  return out;
}

void run_kernel(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  require(c.rho, "rho");
  const StableParams p = validate(c.alpha, c.rho);
  const ResurrectionKernel k(p, parse_phi(c.phi, c.alpha, c.rho));
  const auto xs = parse_log_grid(c.xs, "xs");
  const auto ys = parse_log_grid(c.ys, "ys");
  out << "x,y,q,j,J,B\n";
  for (double x : xs)
    for (double y : ys) {
      out << csv_num(x) << "," << csv_num(y) << "," << csv_num(k.q_density(x, y)) << ",";
      if (x == y)
        out << "NA,NA,1\n";
      else
        out << csv_num(k.j_density(x, y)) << "," << csv_num(k.J_density(x, y)) << ","
            << csv_num(k.boundary_factor(x, y)) << "\n";
    }
}

void run_check_estimates(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  const double rho = std::isfinite(c.rho) ? c.rho : 0.5;
  const StableParams p = validate(c.alpha, rho);
  const PhiPtr phi = parse_phi(c.phi, c.alpha, rho);
  const ResurrectionKernel k(p, phi);
  const Envelope env = Envelope::for_phi(c.alpha, phi);
  ComparabilityOptions opt;
  opt.budget = c.budget;
  opt.per_decade = c.per_decade;
  opt.parallel = !c.serial;
  const auto r = verify_comparability(k, env, opt);
  json j{{"family", to_string(env.family())},
         {"phi", phi->describe()},
         {"branch", {{"up", env.branch_up()}, {"down", env.branch_down()}}},
         {"ratio_min", r.ratio_min},
         {"ratio_max", r.ratio_max},
         {"near_spread", r.near_max / r.near_min},
         {"pass", r.pass},
         {"near_pass", r.near_pass}};
  out << j.dump(2) << "\n";
}

void run_symmetry(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  const double rho = std::isfinite(c.rho) ? c.rho : 0.5;
  const PhiPtr phi = parse_phi(c.phi, c.alpha, rho);
  const SymmetryResult r = is_symmetric(*phi, c.alpha);
  json j{{"alpha", c.alpha},
         {"phi", phi->describe()},
         {"symmetric", r.symmetric},
         {"residual", r.residual},
         {"method", r.method}};
  out << j.dump(2) << "\n";
}

void run_recurrent(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  require(c.rho, "rho");
  const StableParams p = validate(c.alpha, c.rho);
  const PhiPtr phi = parse_phi(c.phi, c.alpha, c.rho);
  const double k = recurrent_extension_kappa(p, *phi);
  json j{{"alpha", c.alpha},
         {"rho", c.rho},
         {"phi", phi->describe()},
         {"mean_xi1", mean_xi1(p, *phi)},
         {"kappa_star", k},
         {"h_residual", h_function(p, *phi, k)}};
  out << j.dump(2) << "\n";
}

void run_simulate(const RunConfig& c, std::ostream& out) {
  require(c.alpha, "alpha");
  require(c.rho, "rho");
  const StableParams p = validate(c.alpha, c.rho);
  const PhiPtr phi = parse_phi(c.phi, c.alpha, c.rho);
  SimConfig sc;
  sc.epsilon = c.epsilon;
  sc.horizon = c.horizon;
  sc.dt_out = c.dt_out;
  sc.seed = c.seed;
  sc.n_paths = c.paths;
  if (c.gaussian == "on")
    sc.gaussian_compensation = true;
  else if (c.gaussian == "off")
    sc.gaussian_compensation = false;
  else if (c.gaussian != "auto")
    throw ParameterError("--gaussian expects auto, on or off");
  if (c.format != "csv" && c.format != "json") throw ParameterError("--out expects csv or json");
  if (!(c.x0 > 0.0)) throw ParameterError("--x0 must be positive");
  const auto paths = simulate_paths(p, phi, sc, !c.serial);
  std::vector<PssmpPath> X;
  X.reserve(paths.size());
  for (const auto& xi : paths) X.push_back(lamperti_transform(xi, c.x0, c.alpha, c.dt_out, c.horizon));
  if (c.format == "csv") {
    out << "path_id,t,xi_bar,X\n";
    const long steps = static_cast<long>(std::floor(c.horizon / c.dt_out * (1.0 + 1e-12)));
    for (std::size_t i = 0; i < X.size(); ++i)
      for (long k = 0; k <= steps; ++k) {
        out << i << "," << csv_num(k * c.dt_out) << ",";
        if (k < static_cast<long>(X[i].values.size()))
          out << csv_num(std::log(X[i].values[k] / c.x0)) << "," << csv_num(X[i].values[k]) << "\n";
        else
          out << "NA,NA\n";
      }
    return;
  }
  json per = json::array();
  double sum = 0.0, ss = 0.0;
  int absorbed = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double end = paths[i].values.back();
    sum += end;
    absorbed += X[i].absorbed;
    per.push_back({{"path_id", i},
                   {"xi_bar_T", end},
                   {"clock_total", X[i].clock_total},
                   {"absorbed", X[i].absorbed},
                   {"absorption_time", opt_num(X[i].absorption_time)}});
  }
  const double n = static_cast<double>(X.size());
  const double mean = sum / n;
  for (const auto& xi : paths) ss += (xi.values.back() - mean) * (xi.values.back() - mean);
  json j{{"alpha", c.alpha},
         {"rho", c.rho},
         {"phi", phi->describe()},
         {"paths", c.paths},
         {"seed", c.seed},
         {"horizon", c.horizon},
         {"epsilon", c.epsilon},
         {"mean_xi1", mean_xi1(p, *phi)},
         {"endpoint_mean", mean},
         {"endpoint_se", n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0},
         {"absorbed_fraction", absorbed / n},
         {"per_path", per}};
  out << j.dump(2) << "\n";
}

int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.subcommand == "classify") run_classify(c, out);
  else if (c.subcommand == "censored-classify") run_censored(c, out);
  else if (c.subcommand == "curve") run_curve(c, out);
  else if (c.subcommand == "region") run_region(c, out);
  else if (c.subcommand == "kernel") run_kernel(c, out);
  else if (c.subcommand == "check-estimates") run_check_estimates(c, out);
  else if (c.subcommand == "symmetry") run_symmetry(c, out);
  else if (c.subcommand == "recurrent-extension") run_recurrent(c, out);
  else if (c.subcommand == "simulate") run_simulate(c, out);
  else throw ParameterError("unknown subcommand '" + c.subcommand + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  bool schema = false, dump = false;
  std::string config_path, output_path;
  int threads = 0;

  CLI::App app{"Resurrected stable pssMp toolkit"};
  app.fallthrough();
  app.add_flag("--json-schema", schema, "Print the JSON schema of all reports and exit");
  app.add_option("--config", config_path, "Run the configuration stored in a JSON file");
  app.add_flag("--dump-config", dump, "Print the resolved configuration as JSON and exit");
  app.add_option("--threads", threads, "OpenMP threads (default: PSSMP_THREADS or runtime)");
  app.add_option("-o,--output", output_path, "Write results to a file instead of stdout");

  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::string> opts;
  };
  const std::vector<Sub> subs = {
      {"classify", "Sign of E xi-bar_1 and absorption verdict (JSON)", {"alpha", "rho", "phi", "zero-tol"}},
      {"censored-classify", "Mean of the censored process (JSON)", {"alpha", "rho", "zero-tol"}},
      {"curve", "Critical curve alpha,rho_critical (CSV)", {"phi", "alphas"}},
      {"region", "Sign grid alpha,rho,sign,mean (CSV)", {"phi", "grid", "zero-tol", "serial"}},
      {"kernel", "Kernel values x,y,q,j,J,B over log grids (CSV)", {"alpha", "rho", "phi", "xs", "ys"}},
      {"check-estimates", "Comparability of q with its two-sided envelope (JSON)",
       {"alpha", "rho", "phi", "budget", "per-decade", "serial"}},
      {"symmetry", "Symmetry test for the resurrection kernel (JSON)", {"alpha", "rho", "phi"}},
      {"recurrent-extension", "Root kappa* of h (JSON)", {"alpha", "rho", "phi"}},
      {"simulate", "Monte Carlo paths of xi-bar and X (CSV paths or JSON summary)",
       {"alpha", "rho", "phi", "paths", "horizon", "epsilon", "seed", "dt-out", "x0", "gaussian",
        "out", "serial"}},
  };
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->callback([&cfg, name = std::string(s.name)] { cfg.subcommand = name; });
    for (const auto& o : s.opts) {
      if (o == "alpha") sc->add_option("--alpha", cfg.alpha, "Stability index in (0,2)");
      if (o == "rho") sc->add_option("--rho", cfg.rho, "Positivity parameter");
      if (o == "phi")
        sc->add_option("--phi", cfg.phi,
                       "poly:beta=..,gamma=.. | exp:a=..,beta=..,gamma=.. | dirac:a=.. | "
                       "table:path=FILE | trace | restart | sym:beta=..")
            ->capture_default_str();
      if (o == "zero-tol") sc->add_option("--zero-tol", cfg.zero_tol)->capture_default_str();
      if (o == "alphas") sc->add_option("--alphas", cfg.alphas, "lo:hi:n")->capture_default_str();
      if (o == "grid") sc->add_option("--grid", cfg.grid, "NxM")->capture_default_str();
      if (o == "serial") sc->add_flag("--serial", cfg.serial, "Use the serial reference loop");
      if (o == "xs") sc->add_option("--xs", cfg.xs, "lo:hi:n, geometric")->capture_default_str();
      if (o == "ys") sc->add_option("--ys", cfg.ys, "lo:hi:n, geometric")->capture_default_str();
      if (o == "budget") sc->add_option("--budget", cfg.budget)->capture_default_str();
      if (o == "per-decade") sc->add_option("--per-decade", cfg.per_decade)->capture_default_str();
      if (o == "paths") sc->add_option("--paths", cfg.paths)->capture_default_str();
      if (o == "horizon") sc->add_option("--horizon", cfg.horizon)->capture_default_str();
      if (o == "epsilon") sc->add_option("--epsilon", cfg.epsilon)->capture_default_str();
      if (o == "seed") sc->add_option("--seed", cfg.seed)->capture_default_str();
      if (o == "dt-out") sc->add_option("--dt-out", cfg.dt_out)->capture_default_str();
      if (o == "x0") sc->add_option("--x0", cfg.x0, "Start of X")->capture_default_str();
      if (o == "gaussian")
        sc->add_option("--gaussian", cfg.gaussian, "auto | on | off")->capture_default_str();
      if (o == "out") sc->add_option("--out", cfg.format, "csv | json")->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParamExit;
  }

  if (schema) {
    std::cout << json::parse(kSchema).dump(2) << "\n";
    return 0;
  }

  if (threads <= 0)
    if (const char* env = std::getenv("PSSMP_THREADS")) threads = std::atoi(env);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ParameterError("cannot read config file " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ParameterError(std::string("config file: ") + e.what());
      }
      cfg = cli::from_json(j);
    }
    if (cfg.subcommand.empty()) {
      std::cerr << app.help();
      return kParamExit;
    }
    if (dump) {
      std::cout << cli::to_json(cfg).dump(2) << "\n";
      return 0;
    }
    if (output_path.empty()) return dispatch(cfg, std::cout);
    std::ofstream out(output_path);
    if (!out) throw ParameterError("cannot open output file " + output_path);
    return dispatch(cfg, out);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kParamExit;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericExit;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericExit;
  }
}
