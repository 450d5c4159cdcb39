#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

namespace pssmp::cli {

// Everything a CLI invocation depends on. Serialized as JSON; doubles are
// written in shortest round-trip form so a dumped config reproduces the run.
struct RunConfig {
  std::string subcommand;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::string phi = "restart";
  std::string xs = "1:1:1";      // geometric grid lo:hi:n
  std::string ys = "0.01:100:9";
  std::string grid = "50x50";
  std::string alphas = "0.02:1.98:99";
  double zero_tol = 1e-12;
  double budget = 1e3;
  int per_decade = 25;
  double epsilon = 1e-3;
  double horizon = 1.0;
  double dt_out = 0.01;
  std::uint64_t seed = 1;
  int paths = 1;
  double x0 = 1.0;
  std::string gaussian = "auto";  // auto | on | off
  std::string format = "csv";     // csv | json
  bool serial = false;
};

inline nlohmann::json number_or_null(double v) {
  return v == v ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const RunConfig& c) {
  return nlohmann::json{{"subcommand", c.subcommand},
                        {"alpha", number_or_null(c.alpha)},
                        {"rho", number_or_null(c.rho)},
                        {"phi", c.phi},
                        {"xs", c.xs},
                        {"ys", c.ys},
                        {"grid", c.grid},
                        {"alphas", c.alphas},
                        {"zero_tol", c.zero_tol},
                        {"budget", c.budget},
                        {"per_decade", c.per_decade},
                        {"epsilon", c.epsilon},
                        {"horizon", c.horizon},
                        {"dt_out", c.dt_out},
                        {"seed", c.seed},
                        {"paths", c.paths},
                        {"x0", c.x0},
                        {"gaussian", c.gaussian},
                        {"format", c.format},
                        {"serial", c.serial}};
}

inline RunConfig from_json(const nlohmann::json& j) {
  RunConfig c;
  auto num = [&](const char* k, double& dst) {
    if (j.contains(k)) dst = j.at(k).is_null() ? std::numeric_limits<double>::quiet_NaN()
                                               : j.at(k).get<double>();
  };
  auto get = [&](const char* k, auto& dst) {
    if (j.contains(k)) j.at(k).get_to(dst);
  };
  get("subcommand", c.subcommand);
  num("alpha", c.alpha);
  num("rho", c.rho);
  get("phi", c.phi);
  get("xs", c.xs);
  get("ys", c.ys);
  get("grid", c.grid);
  get("alphas", c.alphas);
  num("zero_tol", c.zero_tol);
  num("budget", c.budget);
  get("per_decade", c.per_decade);
  num("epsilon", c.epsilon);
  num("horizon", c.horizon);
  num("dt_out", c.dt_out);
  get("seed", c.seed);
  get("paths", c.paths);
  num("x0", c.x0);
  get("gaussian", c.gaussian);
  get("format", c.format);
  get("serial", c.serial);
  return c;
}

}  // namespace pssmp::cli
