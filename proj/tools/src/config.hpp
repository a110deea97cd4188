#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlab/operators.hpp"
#include "dlab/phases.hpp"
#include "dlab/window.hpp"

namespace dlab::cli {

struct OperatorSpec {
  std::string kind = "hermite";  // hermite | twisted | laguerre
  int dim = 1;                   // n for hermite, d for twisted
  std::vector<double> alpha;     // laguerre type, one entry per coordinate
};

struct PhaseSpec {
  std::string family = "fractional";
  std::optional<double> nu;
};

struct WindowSpec {
  double plateau_end = 1.0;
  double support_end = 2.0;
};

struct GridSpec {
  // decay scan
  std::vector<double> t;
  std::vector<double> lambda{8.0};
  int spatial_points = 61;
  double radius = 0.0;
  double fit_t_lo = 0.05;
  double fit_t_hi = 0.6;
  std::vector<double> fit_t;  // times for lambda fits; empty means every t with >= 3 lambdas
  // kernel checks
  std::vector<double> kernel_t{0.1, 0.3, 1.0};
  int kernel_points = 21;
  double kernel_radius = 4.0;
  int truncation = 200;
  // subordination
  std::vector<double> sub_t{0.2, 0.5, 1.0};
  std::vector<double> sub_lambda{2.0, 4.0, 8.0};
};

struct Tolerances {
  double kernel = 1e-8;
  double closed_form = 1e-12;
  double a2_stability = 0.2;
  double subordination = 1e-3;
  double rho_variation = 10.0;
  double time_slope = 0.15;
  double lambda_slope = 0.3;
  double unitarity = 1e-10;
  double besov_identity = 1e-14;
  double window_factor = 4.0;
};

struct BesovSpec {
  double s = 1.0;
  double p = 2.0;
  double q = 2.0;
  int J = 6;
  int terms = 12;
  int max_level = 12;
};

struct ScenarioConfig {
  OperatorSpec op;
  PhaseSpec phase;
  WindowSpec window;
  GridSpec grids;
  Tolerances tol;
  BesovSpec besov;
  std::string output_dir = "dlab-out";
  std::uint64_t seed = 1;

  ModelOperator make_operator() const;
  PhaseFunction make_phase() const;  // verified
  FrequencyWindow make_window() const;
};

/// Parse and semantic errors, all of them.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig load_config_string(const std::string& text, const std::string& source = "<string>");

/// TOML text that reloads to an equivalent configuration.
std::string to_toml(const ScenarioConfig& cfg);
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);

bool equivalent(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace dlab::cli
