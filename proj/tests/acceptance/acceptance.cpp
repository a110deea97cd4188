// Acceptance suite: one line per criterion, exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "dlab/calculus.hpp"
#include "dlab/grid.hpp"
#include "dlab/harness.hpp"
#include "dlab/operators.hpp"
#include "dlab/subordination.hpp"
#include "dlab/window.hpp"
#include "output.hpp"
#include "suites.hpp"

using namespace dlab;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return v;
}

PhaseFunction phase_named(const std::string& name) {
  return accept_phase(builtin_phase(name, name == "fractional" ? std::optional<double>(0.5) : std::nullopt));
}

// 1. Truncated spectral sum (K = 200) against the Mehler kernel.
Outcome kernel_identity() {
  const auto op = ModelOperator::hermite(1);
  const PointSet pts = tensor_grid({uniform_axis(-4.0, 4.0, 21)});
  double worst = 0.0;
  for (double t : {0.1, 0.3, 1.0}) {
    SpectralMultiplier m{[t](double r) { return cplx(std::exp(-t * r * r)); }, "heat", 200};
    const SampledKernel K = multiplier_kernel(op, m, pts, pts);
    double diff = 0.0, ref_max = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const cplx ref = heat_kernel(op, t, pts.point(i), pts.point(j));
        diff = std::max(diff, std::abs(K.values(i, j) - ref));
        ref_max = std::max(ref_max, std::abs(ref));
      }
    }
    worst = std::max(worst, diff / ref_max);
  }
  return {worst <= 1e-8, "max error / sup|kernel| = " + num(worst)};
}

// 2. sup |p_it| |t|^{n/2} against the closed form.
Outcome assumption_a1() {
  double worst = 0.0, bound = 0.0;
  bool confirmed = true;
  for (const auto& op : {ModelOperator::hermite(1), ModelOperator::hermite(2), ModelOperator::twisted(1)}) {
    std::vector<double> ts;
    for (int k = 1; k <= 18; ++k) ts.push_back(0.05 * k * op.T0());
    const A1Report r = verify_A1(op, ts);
    worst = std::max(worst, r.max_closed_form_error);
    bound = std::max(bound, r.constant);
    confirmed = confirmed && r.confirmed;
  }
  return {confirmed && worst <= 1e-12,
          "closed-form error " + num(worst) + ", sup |p_it||t|^{n/2} <= " + num(bound)};
}

// 3. Gaussian upper bounds.
Outcome assumption_a2() {
  const std::vector<double> ts{0.02, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
  std::size_t violations = 0, samples = 0;
  const PointSet p1 = tensor_grid({uniform_axis(-4, 4, 41)});
  const PointSet p2 = tensor_grid({uniform_axis(-3, 3, 13), uniform_axis(-3, 3, 13)});
  for (const auto& [op, pts] : {std::pair{ModelOperator::hermite(1), p1}, std::pair{ModelOperator::hermite(2), p2}}) {
    const A2Report r = verify_A2(op, ts, pts);
    violations += r.violations;
    samples += r.samples;
  }
  std::string detail = std::to_string(violations) + " hermite violations in " + std::to_string(samples);
  double worst = 0.0;
  for (const auto& alpha : {std::vector<double>{0.5}, std::vector<double>{0.0}}) {
    const auto op = ModelOperator::laguerre(alpha);
    auto grid = [](int n) {
      Axis a;
      for (int i = 1; i <= n; ++i) a.nodes.push_back(4.0 * i / n);
      return tensor_grid({a});
    };
    const A2Report coarse = verify_A2(op, ts, grid(20));
    const A2Report fine = verify_A2(op, ts, grid(40));
    const double dC = std::abs(fine.C / coarse.C - 1), dc = std::abs(fine.c / coarse.c - 1);
    worst = std::max({worst, dC, dc});
    detail += "; " + op.name() + " (C,c) = (" + num(coarse.C) + "," + num(coarse.c) + ") -> (" + num(fine.C) +
              "," + num(fine.c) + ")";
  }
  return {violations == 0 && worst <= 0.2, detail + "; max relative change " + num(worst)};
}

// 4. Littlewood-Paley partition of unity.
Outcome partition_of_unity() {
  const FrequencyWindow w = FrequencyWindow::standard();
  const int J = 12;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double r = std::ldexp(1.0, J - 1) * i / 9999.0;
    double s = w.Psi(r);
    for (int j = 1; j <= J; ++j) s += w.psi_j(j, r);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return {worst <= 1e-12, "max |Psi + sum psi_j - 1| = " + num(worst)};
}

struct SubordinationSummary {
  double worst_residual = 0.0;
  bool supports = true;
  std::string error;
  std::vector<std::pair<std::string, double>> variation;
};

SubordinationSummary run_subordination() {
  SubordinationSummary s;
  const Profile g = default_profile();
  const std::vector<double> ts{0.2, 0.5, 1.0}, ls{2.0, 4.0, 8.0};
  for (const auto& name : builtin_phase_names()) {
    const PhaseFunction ph = phase_named(name);
    try {
      for (double t : ts) {
        for (double lambda : ls) {
          const SubordinationPieces p = decompose(ph, g, t, lambda, Regime::high);
          std::vector<double> xs;
          const double lo = lambda * lambda / 4, hi = 4 * lambda * lambda;
          for (int i = 0; i <= 400; ++i) xs.push_back(lo + (hi - lo) * i / 400);
          const ReconstructionReport r = reconstruct(p, ph, g, xs);
          s.worst_residual = std::max(s.worst_residual, r.sup_residual / r.sup_g);
          for (double x : {0.0, 0.99 * lambda * lambda / 5, 1.01 * 5 * lambda * lambda}) {
            s.supports = s.supports && p.rho_at(x) == cplx(0.0);
          }
          for (std::size_t m = 0; m < p.s.size(); ++m) {
            if (p.s[m] <= 2 / p.c0 || p.s[m] >= 2 * p.c0) s.supports = s.supports && p.a[m] == cplx(0.0);
          }
        }
      }
      const RhoDecayReport rd = verify_rho_decay(ph, g, ts, ls, {2});
      s.variation.emplace_back(name, rd.variation[0]);
    } catch (const std::exception& e) {
      s.error += name + ": " + e.what() + " ";
    }
  }
  return s;
}

// 7. van der Corput constants.
Outcome van_der_corput() {
  auto instance = [](std::function<double(double)> g, double g2, double delta) {
    OscillatoryInstance inst;
    inst.g = std::move(g);
    inst.g2 = [g2](double) { return g2; };
    inst.psi = [](double) { return 1.0; };
    inst.dpsi = [](double) { return 0.0; };
    inst.a = 0.0;
    inst.b = 1.0;
    inst.delta = delta;
    return inst;
  };
  const std::vector<double> ts = log_spaced(1.0, 1000.0, 31);
  std::vector<double> constants;
  std::string detail = "C(delta) =";
  for (double delta : {1.0, 10.0, 100.0}) {
    const VanDerCorputReport r = van_der_corput_check(instance([delta](double x) { return 0.5 * delta * x * x; }, delta, delta), ts);
    constants.push_back(r.constant);
    detail += " " + num(r.constant);
  }
  const double spread = *std::max_element(constants.begin(), constants.end()) /
                        *std::min_element(constants.begin(), constants.end());
  const VanDerCorputReport sq = van_der_corput_check(instance([](double x) { return x * x; }, 2.0, 1.0), ts);
  const double limit = sq.ratio.back();
  const double target = std::sqrt(M_PI / 4);
  return {spread <= 2.0 && std::abs(limit - target) <= 0.02,
          detail + " (spread " + num(spread) + "); g = x^2 ratio at t=1e3: " + num(limit) + " vs " + num(target)};
}

// 8 and 9. Decay scans on the two n = 2 operators.
struct ScanSummary {
  std::vector<std::string> lines;
  bool time_pass = true;
  bool lambda_pass = true;
  int sharp = 0, total = 0;
  double slowest_phase_seconds = 0.0;
  double lambda_seconds = 0.0;
};

ScanSummary run_scans() {
  ScanSummary s;
  const FrequencyWindow w = FrequencyWindow::standard();
  const std::vector<double> ts = log_spaced(0.05, 0.6, 12);
  for (const auto& name : {"fractional", "klein_gordon", "beam", "fourth_order"}) {
    const PhaseFunction ph = phase_named(name);
    const auto t0 = std::chrono::steady_clock::now();
    std::string line = std::string(name) + ":";
    for (const auto& op : {ModelOperator::hermite(2), ModelOperator::twisted(1)}) {
      const DecayScan sc = scan(op, ph, w, ts, {8.0}, {61, 0.0}, 1);
      const DecayFit f = fit_time_exponent(sc, ph, 8.0, 0.05, std::min(0.6, 0.6 * op.T0()), 0.15);
      s.time_pass = s.time_pass && f.pass;
      s.sharp += f.sharp;
      ++s.total;
      line += " " + op.name() + " slope " + num(f.slope) + (f.pass ? " ok" : " FAIL") + (f.sharp ? "/sharp" : "");
    }
    s.slowest_phase_seconds =
        std::max(s.slowest_phase_seconds, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    s.lines.push_back(line);
  }
  const auto t1 = std::chrono::steady_clock::now();
  for (const auto& name : {"fractional", "klein_gordon", "beam", "fourth_order"}) {
    const PhaseFunction ph = phase_named(name);
    std::string line = std::string(name) + ":";
    for (const auto& op : {ModelOperator::hermite(2), ModelOperator::twisted(1)}) {
      const DecayScan sc = scan(op, ph, w, {0.2}, {4.0, 8.0, 16.0, 32.0}, {61, 0.0}, 1);
      const DecayFit f = fit_lambda_exponent(sc, ph, 0.2, 0.3);
      s.lambda_pass = s.lambda_pass && f.pass;
      line += " " + op.name() + " slope " + num(f.slope) + " vs " + num(f.predicted) + (f.pass ? " ok" : " FAIL");
    }
    s.lines.push_back(line);
  }
  s.lambda_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  return s;
}

// 10. L^2 unitarity.
Outcome unitarity() {
  const PhaseFunction ph = phase_named("klein_gordon");
  double worst = 0.0;
  for (const auto& [op, level] : {std::pair{ModelOperator::hermite(1), 99}, std::pair{ModelOperator::twisted(1), 9},
                                  std::pair{ModelOperator::laguerre({0.5}), 99}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SpectralExpansion f = random_expansion(op, 50, level, seed);
      worst = std::max(worst, l2_unitarity(op, ph, f, {0.1, 0.4, 0.7}));
    }
  }
  return {worst <= 1e-10, "max | ||e^{it phi(L)} f||_2 - ||f||_2 | = " + num(worst)};
}

// 11. Besov norms.
Outcome besov() {
  double worst_identity = 0.0, worst_ratio = 1.0;
  for (const auto& op : {ModelOperator::hermite(1), ModelOperator::twisted(1), ModelOperator::laguerre({0.5})}) {
    SpectralExpansion f = random_expansion(op, 12, 20, 3);
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      if (op.eigenvalue(f.basis[i].level) < 4.0) f.coeffs[i] = 0.0;
    }
    const PointSet grid = norm_grid(op, f.max_level());
    for (const auto& [p, q] : {std::pair{2.0, 2.0}, std::pair{1.0, 2.0}, std::pair{kInfinity, 1.0}}) {
      const double a = besov_norm(op, f, 0.5, p, q, FrequencyWindow::standard(), 6, grid).value;
      const double b = besov_norm_homogeneous(op, f, 0.5, p, q, FrequencyWindow::standard(), 6, grid).value;
      const double c = besov_norm(op, f, 0.5, p, q, FrequencyWindow::alternate(), 6, grid).value;
      worst_identity = std::max(worst_identity, std::abs(a - b));
      worst_ratio = std::max({worst_ratio, a / c, c / a});
    }
  }
  return {worst_identity <= 1e-14 && worst_ratio <= 4.0,
          "|homogeneous - non-homogeneous| = " + num(worst_identity) + ", window ratio " + num(worst_ratio)};
}

// 12. Identical outputs on re-runs.
Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "dlab-acceptance";
  fs::remove_all(base);
  const cli::ScenarioConfig cfg = cli::load_config_string(R"(
[operator]
kind = "hermite"
dim = 2
[phase]
family = "klein_gordon"
[grids]
t_log = [0.05, 0.6, 5]
lambda = [2.0, 4.0]
spatial_points = 21
kernel_points = 9
sub_t = [0.5]
sub_lambda = [4.0]
)");
  std::vector<std::string> diffs;
  std::size_t compared = 0;
  cli::RunOptions a, b;
  a.out_dir = base / "a";
  b.out_dir = base / "b";
  a.jobs = 1;
  b.jobs = 2;
  const cli::RunReport ra = cli::run("all", cfg, a);
  cli::run("all", cfg, b);
  for (const auto& f : ra.files) {
    ++compared;
    if (cli::read_file(a.out_dir / f.path) != cli::read_file(b.out_dir / f.path)) diffs.push_back(f.path);
  }
  auto strip = [](cli::json j) {
    j.erase("timings");
    return j.dump();
  };
  const bool report_same = strip(cli::json::parse(cli::read_file(a.out_dir / "report.json"))) ==
                           strip(cli::json::parse(cli::read_file(b.out_dir / "report.json")));
  if (!report_same) diffs.push_back("report.json (without timings)");
  return {diffs.empty() && compared > 5,
          std::to_string(compared) + " files compared across jobs=1/jobs=2 runs, " + std::to_string(diffs.size()) +
              " differ"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&failures](int id, const std::string& title, const Outcome& o, double seconds, double limit) {
    const bool in_time = seconds < limit;
    const bool ok = o.pass && in_time;
    failures += !ok;
    std::printf("criterion %2d %s  %-28s %s [%.1f s, limit %.0f s%s]\n", id, ok ? "PASS" : "FAIL", title.c_str(),
                o.detail.c_str(), seconds, limit, in_time ? "" : ", too slow");
    std::fflush(stdout);
  };
  auto timed = [](const std::function<Outcome()>& fn, double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
  };

  double sec = 0.0;
  Outcome o = timed(kernel_identity, sec);
  report(1, "hermite kernel identity", o, sec, 10);
  o = timed(assumption_a1, sec);
  report(2, "(A1) closed form", o, sec, 1);
  o = timed(assumption_a2, sec);
  report(3, "(A2) gaussian bound", o, sec, 30);
  o = timed(partition_of_unity, sec);
  report(4, "partition of unity", o, sec, 1);

  SubordinationSummary sub;
  o = timed(
      [&sub] {
        sub = run_subordination();
        return Outcome{sub.error.empty() && sub.worst_residual <= 1e-3 && sub.supports,
                       "max residual / sup|g| = " + num(sub.worst_residual) +
                           (sub.supports ? ", supports exact" : ", SUPPORT VIOLATED") +
                           (sub.error.empty() ? "" : "; " + sub.error)};
      },
      sec);
  report(5, "subordination reconstruction", o, sec, 120);
  {
    bool ok = !sub.variation.empty();
    std::string detail = "sup|rho|(t lambda^{2m})^2 variation:";
    for (const auto& [name, v] : sub.variation) {
      ok = ok && v < 10.0;
      detail += " " + name + " " + num(v);
    }
    report(6, "rho decay (k=2)", {ok, detail}, sec, 120);
  }

  o = timed(van_der_corput, sec);
  report(7, "van der Corput constant", o, sec, 10);

  ScanSummary sc;
  o = timed(
      [&sc] {
        sc = run_scans();
        return Outcome{true, ""};
      },
      sec);
  {
    std::string d8 = "sharp " + std::to_string(sc.sharp) + "/" + std::to_string(sc.total) + ";";
    for (std::size_t i = 0; i < 4 && i < sc.lines.size(); ++i) d8 += " " + sc.lines[i] + ";";
    report(8, "time decay exponents", {o.pass && sc.time_pass && !sc.lines.empty(), o.pass ? d8 : o.detail},
           sc.slowest_phase_seconds, 300);
    std::string d9;
    for (std::size_t i = 4; i < sc.lines.size(); ++i) d9 += " " + sc.lines[i] + ";";
    report(9, "lambda exponents", {o.pass && sc.lambda_pass && sc.lines.size() == 8, o.pass ? d9 : o.detail},
           sc.lambda_seconds, 600);
  }

  o = timed(unitarity, sec);
  report(10, "L2 unitarity", o, sec, 5);
  o = timed(besov, sec);
  report(11, "besov identity and windows", o, sec, 30);
  o = timed(determinism, sec);
  report(12, "determinism", o, sec, 120);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures ? 1 : 0;
}
