#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "dlab/errors.hpp"
#include "dlab/specfun.hpp"

namespace dlab::cli {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    v.push_back(count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  }
  return v;
}

class Reader {
 public:
  std::vector<std::string> errors;

  const toml::table* table(const toml::table& root, const std::string& key) {
    const toml::node* n = root.get(key);
    if (!n) return nullptr;
    if (!n->is_table()) {
      errors.push_back(key + ": expected a table");
      return nullptr;
    }
    return n->as_table();
  }

  void known(const toml::table& t, const std::string& prefix, std::set<std::string> keys) {
    for (const auto& [k, v] : t) {
      if (!keys.count(std::string(k.str()))) {
        errors.push_back(prefix + std::string(k.str()) + ": unknown key");
      }
    }
  }

  void number(const toml::table* t, const std::string& path, const std::string& key, double& out) {
    if (!t) return;
    const toml::node* n = t->get(key);
    if (!n) return;
    if (auto v = n->value<double>()) {
      out = *v;
    } else {
      errors.push_back(path + key + ": expected a number");
    }
  }

  void integer(const toml::table* t, const std::string& path, const std::string& key, int& out) {
    if (!t) return;
    const toml::node* n = t->get(key);
    if (!n) return;
    if (auto v = n->as_integer()) {
      out = static_cast<int>(v->get());
    } else {
      errors.push_back(path + key + ": expected an integer");
    }
  }

  void string(const toml::table* t, const std::string& path, const std::string& key, std::string& out) {
    if (!t) return;
    const toml::node* n = t->get(key);
    if (!n) return;
    if (auto v = n->value<std::string>()) {
      out = *v;
    } else {
      errors.push_back(path + key + ": expected a string");
    }
  }

  bool numbers(const toml::table* t, const std::string& path, const std::string& key,
               std::vector<double>& out) {
    if (!t) return false;
    const toml::node* n = t->get(key);
    if (!n) return false;
    const toml::array* arr = n->as_array();
    if (!arr) {
      errors.push_back(path + key + ": expected an array of numbers");
      return false;
    }
    std::vector<double> v;
    for (const auto& e : *arr) {
      auto d = e.value<double>();
      if (!d) {
        errors.push_back(path + key + ": expected an array of numbers");
        return false;
      }
      v.push_back(*d);
    }
    out = v;
    return true;
  }
};

void validate(const ScenarioConfig& c, std::vector<std::string>& errors) {
  auto err = [&](std::string s) { errors.push_back(std::move(s)); };
  std::optional<ModelOperator> op;
  const auto& o = c.op;
  if (o.kind == "hermite" || o.kind == "twisted") {
    if (o.dim < 1) err("operator.dim: must be >= 1");
    if (!o.alpha.empty()) err("operator.alpha: only used by laguerre");
  } else if (o.kind == "laguerre") {
    if (o.alpha.empty()) err("operator.alpha: laguerre needs at least one type parameter");
    for (double a : o.alpha) {
      if (!(a > -0.5)) err("operator.alpha: every entry must satisfy alpha > -1/2");
    }
  } else {
    err("operator.kind: must be hermite, twisted or laguerre (got '" + o.kind + "')");
  }
  if (errors.empty()) {
    try {
      op = c.make_operator();
    } catch (const std::exception& e) {
      err(std::string("operator: ") + e.what());
    }
  }

  const auto& names = builtin_phase_names();
  if (std::find(names.begin(), names.end(), c.phase.family) == names.end()) {
    err("phase.family: unknown family '" + c.phase.family + "'");
  } else if (c.phase.family == "fractional") {
    const double nu = c.phase.nu.value_or(0.5);
    if (!(nu > 0.0 && nu < 1.0)) err("phase.nu: fractional requires 0<nu<1");
  } else if (c.phase.nu) {
    err("phase.nu: only the fractional family takes nu");
  }
  if (errors.empty()) {
    try {
      c.make_phase();
    } catch (const std::exception& e) {
      err(std::string("phase: ") + e.what());
    }
  }

  const auto& w = c.window;
  if (!(w.plateau_end > 0.0 && w.support_end > w.plateau_end && w.support_end <= 2.0 * w.plateau_end)) {
    err("window: need 0 < plateau_end < support_end <= 2 plateau_end");
  }

  const auto& g = c.grids;
  const double tmax = op ? 0.9 * op->T0() : std::numeric_limits<double>::infinity();
  auto check_times = [&](const std::vector<double>& v, const std::string& name) {
    if (v.empty()) err("grids." + name + ": must not be empty");
    for (double t : v) {
      if (!(t > 0.0 && t < tmax)) {
        err("grids." + name + ": entries must lie in (0, 0.9 T0) = (0, " + std::to_string(tmax) + ")");
        break;
      }
    }
  };
  auto check_positive = [&](const std::vector<double>& v, const std::string& name) {
    if (v.empty()) err("grids." + name + ": must not be empty");
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        err("grids." + name + ": entries must be positive");
        break;
      }
    }
  };
  check_times(g.t, "t");
  check_positive(g.lambda, "lambda");
  check_positive(g.kernel_t, "kernel_t");
  check_positive(g.sub_t, "sub_t");
  check_positive(g.sub_lambda, "sub_lambda");
  if (!g.fit_t.empty()) check_times(g.fit_t, "fit_t");
  if (g.spatial_points < 2) err("grids.spatial_points: must be >= 2");
  if (g.radius < 0.0) err("grids.radius: must be >= 0 (0 selects the default)");
  if (!(g.fit_t_lo > 0.0 && g.fit_t_hi > g.fit_t_lo)) err("grids.fit_t_lo/fit_t_hi: need 0 < lo < hi");
  if (g.kernel_points < 2) err("grids.kernel_points: must be >= 2");
  if (!(g.kernel_radius > 0.0)) err("grids.kernel_radius: must be positive");
  if (g.truncation < 0 || g.truncation > kHermiteMaxOrder) {
    err("grids.truncation: must lie in [0, " + std::to_string(kHermiteMaxOrder) + "]");
  }

  const auto& t = c.tol;
  for (auto [name, v] : {std::pair{"kernel", t.kernel}, {"closed_form", t.closed_form},
                         {"a2_stability", t.a2_stability}, {"subordination", t.subordination},
                         {"rho_variation", t.rho_variation}, {"time_slope", t.time_slope},
                         {"lambda_slope", t.lambda_slope}, {"unitarity", t.unitarity},
                         {"besov_identity", t.besov_identity}, {"window_factor", t.window_factor}}) {
    if (!(v > 0.0)) err(std::string("tolerances.") + name + ": must be positive");
  }

  const auto& b = c.besov;
  if (!(b.p >= 1.0)) err("besov.p: must be >= 1");
  if (!(b.q >= 1.0)) err("besov.q: must be >= 1");
  if (b.J < 1 || b.J > 30) err("besov.J: must lie in [1, 30]");
  if (b.terms < 1) err("besov.terms: must be >= 1");
  if (b.max_level < 0) err("besov.max_level: must be >= 0");
  if (c.output_dir.empty()) err("output.dir: must not be empty");
}

ScenarioConfig from_table(const toml::table& root) {
  ScenarioConfig c;
  std::vector<double> default_t = log_spaced(0.05, 0.6, 12);
  c.grids.t = default_t;
  Reader r;
  r.known(root, "", {"operator", "phase", "window", "grids", "tolerances", "besov", "output"});

  if (const auto* t = r.table(root, "operator")) {
    r.known(*t, "operator.", {"kind", "dim", "alpha"});
    r.string(t, "operator.", "kind", c.op.kind);
    r.integer(t, "operator.", "dim", c.op.dim);
    r.numbers(t, "operator.", "alpha", c.op.alpha);
  }
  if (const auto* t = r.table(root, "phase")) {
    r.known(*t, "phase.", {"family", "nu"});
    r.string(t, "phase.", "family", c.phase.family);
    if (t->get("nu")) {
      double nu = 0.0;
      r.number(t, "phase.", "nu", nu);
      c.phase.nu = nu;
    }
  }
  if (const auto* t = r.table(root, "window")) {
    r.known(*t, "window.", {"plateau_end", "support_end"});
    r.number(t, "window.", "plateau_end", c.window.plateau_end);
    r.number(t, "window.", "support_end", c.window.support_end);
  }
  if (const auto* t = r.table(root, "grids")) {
    r.known(*t, "grids.", {"t", "t_log", "lambda", "spatial_points", "radius", "fit_t_lo", "fit_t_hi",
                           "fit_t", "kernel_t", "kernel_points", "kernel_radius", "truncation",
                           "sub_t", "sub_lambda"});
    r.numbers(t, "grids.", "t", c.grids.t);
    std::vector<double> tlog;
    if (r.numbers(t, "grids.", "t_log", tlog)) {
      if (t->get("t")) {
        r.errors.push_back("grids.t_log: give either t or t_log, not both");
      } else if (tlog.size() != 3 || !(tlog[0] > 0.0 && tlog[1] > tlog[0]) || tlog[2] < 1 ||
                 tlog[2] != std::floor(tlog[2])) {
        r.errors.push_back("grids.t_log: expected [min, max, count] with 0 < min < max");
      } else {
        c.grids.t = log_spaced(tlog[0], tlog[1], static_cast<int>(tlog[2]));
      }
    }
    r.numbers(t, "grids.", "lambda", c.grids.lambda);
    r.integer(t, "grids.", "spatial_points", c.grids.spatial_points);
    r.number(t, "grids.", "radius", c.grids.radius);
    r.number(t, "grids.", "fit_t_lo", c.grids.fit_t_lo);
    r.number(t, "grids.", "fit_t_hi", c.grids.fit_t_hi);
    r.numbers(t, "grids.", "fit_t", c.grids.fit_t);
    r.numbers(t, "grids.", "kernel_t", c.grids.kernel_t);
    r.integer(t, "grids.", "kernel_points", c.grids.kernel_points);
    r.number(t, "grids.", "kernel_radius", c.grids.kernel_radius);
    r.integer(t, "grids.", "truncation", c.grids.truncation);
    r.numbers(t, "grids.", "sub_t", c.grids.sub_t);
    r.numbers(t, "grids.", "sub_lambda", c.grids.sub_lambda);
  }
  if (const auto* t = r.table(root, "tolerances")) {
    r.known(*t, "tolerances.", {"kernel", "closed_form", "a2_stability", "subordination",
                                "rho_variation", "time_slope", "lambda_slope", "unitarity",
                                "besov_identity", "window_factor"});
    auto& k = c.tol;
    r.number(t, "tolerances.", "kernel", k.kernel);
    r.number(t, "tolerances.", "closed_form", k.closed_form);
    r.number(t, "tolerances.", "a2_stability", k.a2_stability);
    r.number(t, "tolerances.", "subordination", k.subordination);
    r.number(t, "tolerances.", "rho_variation", k.rho_variation);
    r.number(t, "tolerances.", "time_slope", k.time_slope);
    r.number(t, "tolerances.", "lambda_slope", k.lambda_slope);
    r.number(t, "tolerances.", "unitarity", k.unitarity);
    r.number(t, "tolerances.", "besov_identity", k.besov_identity);
    r.number(t, "tolerances.", "window_factor", k.window_factor);
  }
  if (const auto* t = r.table(root, "besov")) {
    r.known(*t, "besov.", {"s", "p", "q", "J", "terms", "max_level"});
    r.number(t, "besov.", "s", c.besov.s);
    r.number(t, "besov.", "p", c.besov.p);
    r.number(t, "besov.", "q", c.besov.q);
    r.integer(t, "besov.", "J", c.besov.J);
    r.integer(t, "besov.", "terms", c.besov.terms);
    r.integer(t, "besov.", "max_level", c.besov.max_level);
  }
  if (const auto* t = r.table(root, "output")) {
    r.known(*t, "output.", {"dir", "seed"});
    r.string(t, "output.", "dir", c.output_dir);
    int seed = static_cast<int>(c.seed);
    r.integer(t, "output.", "seed", seed);
    if (seed < 0) r.errors.push_back("output.seed: must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  if (r.errors.empty()) validate(c, r.errors);
  if (!r.errors.empty()) throw ConfigError(r.errors);
  return c;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

ModelOperator ScenarioConfig::make_operator() const {
  if (op.kind == "hermite") return ModelOperator::hermite(op.dim);
  if (op.kind == "twisted") return ModelOperator::twisted(op.dim);
  if (op.kind == "laguerre") return ModelOperator::laguerre(op.alpha);
  throw DomainError("unknown operator kind '" + op.kind + "'");
}

PhaseFunction ScenarioConfig::make_phase() const {
  std::optional<double> nu = phase.nu;
  if (phase.family == "fractional" && !nu) nu = 0.5;
  return accept_phase(builtin_phase(phase.family, nu));
}

FrequencyWindow ScenarioConfig::make_window() const {
  return FrequencyWindow(window.plateau_end, window.support_end);
}

ScenarioConfig load_config_string(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw ConfigError({os.str()});
  }
  return from_table(root);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_string(ss.str(), path);
}

namespace {

toml::array to_array(const std::vector<double>& v) {
  toml::array a;
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string to_toml(const ScenarioConfig& c) {
  toml::table op{{"kind", c.op.kind}, {"dim", c.op.dim}};
  if (!c.op.alpha.empty()) op.insert("alpha", to_array(c.op.alpha));
  toml::table phase{{"family", c.phase.family}};
  if (c.phase.nu) phase.insert("nu", *c.phase.nu);
  toml::table grids{{"t", to_array(c.grids.t)},
                    {"lambda", to_array(c.grids.lambda)},
                    {"spatial_points", c.grids.spatial_points},
                    {"radius", c.grids.radius},
                    {"fit_t_lo", c.grids.fit_t_lo},
                    {"fit_t_hi", c.grids.fit_t_hi},
                    {"fit_t", to_array(c.grids.fit_t)},
                    {"kernel_t", to_array(c.grids.kernel_t)},
                    {"kernel_points", c.grids.kernel_points},
                    {"kernel_radius", c.grids.kernel_radius},
                    {"truncation", c.grids.truncation},
                    {"sub_t", to_array(c.grids.sub_t)},
                    {"sub_lambda", to_array(c.grids.sub_lambda)}};
  const auto& k = c.tol;
  toml::table tol{{"kernel", k.kernel},           {"closed_form", k.closed_form},
                  {"a2_stability", k.a2_stability}, {"subordination", k.subordination},
                  {"rho_variation", k.rho_variation}, {"time_slope", k.time_slope},
                  {"lambda_slope", k.lambda_slope}, {"unitarity", k.unitarity},
                  {"besov_identity", k.besov_identity}, {"window_factor", k.window_factor}};
  toml::table besov{{"s", c.besov.s},         {"p", c.besov.p},         {"q", c.besov.q},
                    {"J", c.besov.J},         {"terms", c.besov.terms}, {"max_level", c.besov.max_level}};
  toml::table root{{"operator", op},
                   {"phase", phase},
                   {"window", toml::table{{"plateau_end", c.window.plateau_end},
                                          {"support_end", c.window.support_end}}},
                   {"grids", grids},
                   {"tolerances", tol},
                   {"besov", besov},
                   {"output", toml::table{{"dir", c.output_dir},
                                          {"seed", static_cast<std::int64_t>(c.seed)}}}};
  std::ostringstream os;
  os << root << "\n";
  return os.str();
}

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["operator"] = {{"kind", c.op.kind}, {"dim", c.op.dim}, {"alpha", c.op.alpha}};
  j["phase"] = {{"family", c.phase.family}};
  j["phase"]["nu"] = c.phase.nu ? nlohmann::ordered_json(*c.phase.nu) : nlohmann::ordered_json();
  j["window"] = {{"plateau_end", c.window.plateau_end}, {"support_end", c.window.support_end}};
  const auto& g = c.grids;
  j["grids"] = {{"t", g.t},
                {"lambda", g.lambda},
                {"spatial_points", g.spatial_points},
                {"radius", g.radius},
                {"fit_t_lo", g.fit_t_lo},
                {"fit_t_hi", g.fit_t_hi},
                {"fit_t", g.fit_t},
                {"kernel_t", g.kernel_t},
                {"kernel_points", g.kernel_points},
                {"kernel_radius", g.kernel_radius},
                {"truncation", g.truncation},
                {"sub_t", g.sub_t},
                {"sub_lambda", g.sub_lambda}};
  const auto& k = c.tol;
  j["tolerances"] = {{"kernel", k.kernel},
                     {"closed_form", k.closed_form},
                     {"a2_stability", k.a2_stability},
                     {"subordination", k.subordination},
                     {"rho_variation", k.rho_variation},
                     {"time_slope", k.time_slope},
                     {"lambda_slope", k.lambda_slope},
                     {"unitarity", k.unitarity},
                     {"besov_identity", k.besov_identity},
                     {"window_factor", k.window_factor}};
  j["besov"] = {{"s", c.besov.s}, {"p", c.besov.p}, {"q", c.besov.q},
                {"J", c.besov.J}, {"terms", c.besov.terms}, {"max_level", c.besov.max_level}};
  j["output"] = {{"dir", c.output_dir}, {"seed", c.seed}};
  return j;
}

bool equivalent(const ScenarioConfig& a, const ScenarioConfig& b) {
  return to_json(a) == to_json(b);
}

}  // namespace dlab::cli
