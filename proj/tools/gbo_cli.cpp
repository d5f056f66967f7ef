// Command-line driver for the gBO solver.
//
//   gbo run <config> [overrides]
//   gbo sweep <config> --taus 1/200 1/400 ... [--schemes ...] [--tau-ref 1/6400]
//   gbo soliton --m 3 --c 1 [--petviashvili] [--out profile.csv]
//   gbo reference <config> --tau-ref 1/6400 [--out ref.csv]

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "gbo/config.hpp"
#include "gbo/harness.hpp"
#include "gbo/profiles.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Named flags that map straight onto config keys.
struct Overrides {
  std::vector<std::string> assignments;  // key=value
  std::string n, alpha, m, scheme, stages, tau, t_final, trace, snapshot_prefix, reference;

  void attach(CLI::App* cmd) {
    cmd->add_option("-s,--set", assignments, "Override any config key (key=value)");
    cmd->add_option("--N", n, "Number of modes");
    cmd->add_option("--alpha", alpha, "Mapping parameter");
    cmd->add_option("--m", m, "Nonlinearity power");
    cmd->add_option("--scheme", scheme, "cn-mc, cn-ec, irk-mc, irk-ec, leapfrog, irk2-mc, ...");
    cmd->add_option("--stages", stages, "IRK stage count (1 or 2)");
    cmd->add_option("--tau", tau, "Time step, e.g. 1/400");
    cmd->add_option("--T", t_final, "Final time");
    cmd->add_option("--trace", trace, "Trace CSV path");
    cmd->add_option("--snapshot-prefix", snapshot_prefix, "Snapshot file prefix");
    cmd->add_option("--reference", reference, "Reference solution CSV");
  }

  void apply(gbo::Config& cfg) const {
    auto put = [&](const char* key, const std::string& v) {
      if (!v.empty()) cfg.set(key, v);
    };
    put("N", n);
    put("alpha", alpha);
    put("m", m);
    put("scheme", scheme);
    put("stages", stages);
    put("tau", tau);
    put("T", t_final);
    put("trace_path", trace);
    put("snapshot_prefix", snapshot_prefix);
    put("reference_path", reference);
    for (const auto& a : assignments) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + a + "'");
      cfg.set(a.substr(0, eq), a.substr(eq + 1));
    }
  }
};

gbo::RunConfig load_run_config(const std::string& path, const Overrides& ov) {
  gbo::Config cfg = gbo::Config::load(path);
  ov.apply(cfg);
  return gbo::RunConfig::from_config(cfg);
}

void print_summary(const gbo::RunConfig& cfg, const gbo::RunResult& res) {
  const auto& last = res.trace.last();
  std::printf("scheme        %s\n", gbo::scheme_label(cfg.scheme, cfg.stages).c_str());
  std::printf("tau           %s\n", gbo::format_tau(cfg.tau).c_str());
  std::printf("steps         %d\n", res.stats.steps);
  std::printf("t_final       %.10g\n", last.t);
  std::printf("linf_err      %.6e\n", last.linf_err);
  std::printf("I_err         %.6e\n", last.I_err);
  std::printf("M_err         %.6e\n", last.M_err);
  std::printf("E_err         %.6e\n", last.E_err);
  if (res.stats.steps > 0) {
    std::printf("fp_iters      max %d, mean %.2f\n", res.stats.max_fp_iters,
                static_cast<double>(res.stats.total_fp_iters) / res.stats.steps);
  }
  if (res.stats.c0_adjustments) std::printf("c0_adjusts    %d\n", res.stats.c0_adjustments);
  std::printf("imag_residue  %.3e\n", res.stats.max_imag_residue);
}

int cmd_run(const std::string& path, const Overrides& ov) {
  const gbo::RunConfig cfg = load_run_config(path, ov);
  const gbo::RunResult res = gbo::run_simulation(cfg);
  print_summary(cfg, res);
  if (res.diverged) {
    std::fprintf(stderr, "error: step %d (t = %.10g): solution diverged (sup norm above %g)\n",
                 res.diverged_step, res.diverged_step * cfg.tau, cfg.divergence_threshold);
    return kExitFailure;
  }
  return 0;
}

int cmd_sweep(const std::string& path, const Overrides& ov, const std::vector<std::string>& taus_text,
              const std::vector<std::string>& schemes_text, const std::string& tau_ref,
              const std::string& out, const std::string& trace_dir, bool serial) {
  const gbo::RunConfig cfg = load_run_config(path, ov);
  std::vector<double> taus;
  for (const auto& t : taus_text) {
    for (double v : gbo::parse_real_list(t)) taus.push_back(v);
  }
  std::vector<gbo::SweepEntry> schemes;
  for (const auto& s : schemes_text) {
    std::optional<int> implied;
    const gbo::Scheme sc = gbo::parse_scheme(s, &implied);
    schemes.push_back({sc, implied.value_or(cfg.stages)});
  }
  gbo::SweepOptions opts;
  if (!tau_ref.empty()) opts.tau_ref = gbo::parse_real(tau_ref);
  opts.parallel = !serial;
  opts.trace_dir = trace_dir;
  const gbo::RateTable table = gbo::convergence_sweep(cfg, taus, schemes, opts);
  gbo::print_rate_table(std::cout, table);
  if (!out.empty()) gbo::write_rate_table_csv(out, table);
  return 0;
}

int cmd_soliton(int m, double c, bool petviashvili, int n, double alpha, const std::string& out) {
  const gbo::SpectralGrid g(n, alpha);
  const gbo::ModelParams p{m};
  gbo::PhysicalField q;
  if (petviashvili) {
    const auto res = gbo::petviashvili_solve(p, c, {}, g);
    q = res.q;
    std::printf("iterations    %d\n", res.iterations);
  } else {
    if (m != 2) throw std::invalid_argument("closed-form soliton exists only for m = 2; use --petviashvili");
    q = gbo::bo_soliton({c, 0.0}, 0.0, g);
  }
  const auto inv = gbo::compute_invariants(q, m, g);
  std::printf("residual      %.6e\n", gbo::profile_residual(q, p, c, g));
  std::printf("peak          %.15g\n", q[static_cast<std::size_t>(n / 2)]);
  std::printf("I_h           %.15g\n", inv.integral);
  std::printf("M_h           %.15g\n", inv.mass);
  std::printf("E_h           %.15g\n", inv.energy);
  if (!out.empty()) gbo::write_snapshot_csv(out, g, q);
  return 0;
}

int cmd_reference(const std::string& path, const Overrides& ov, const std::string& tau_ref,
                  const std::vector<std::string>& times_text, const std::string& out) {
  const gbo::RunConfig cfg = load_run_config(path, ov);
  std::vector<double> times = cfg.snapshot_times;
  for (const auto& t : times_text) {
    for (double v : gbo::parse_real_list(t)) times.push_back(v);
  }
  const double tr = gbo::parse_real(tau_ref);
  const gbo::ReferenceSolution ref = gbo::reference_solution(cfg, tr, times);
  std::printf("reference     %s, tau %s, %zu snapshots\n",
              gbo::scheme_label(cfg.scheme, cfg.stages).c_str(), gbo::format_tau(tr).c_str(),
              ref.snapshots.size());
  if (!out.empty()) gbo::write_reference_csv(out, gbo::SpectralGrid(cfg.n, cfg.alpha), ref);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative pseudo-spectral solver for the generalized Benjamin-Ono equation"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_ov, sweep_ov, ref_ov;

  auto* run = app.add_subcommand("run", "Integrate one configuration");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_ov.attach(run);

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over step sizes");
  std::vector<std::string> taus, schemes;
  std::string tau_ref, out, trace_dir;
  bool serial = false;
  sweep->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--taus", taus, "Step sizes, each half the previous")->required();
  sweep->add_option("--schemes", schemes, "Schemes to compare (default: the config's)")->delimiter(',');
  sweep->add_option("--tau-ref", tau_ref, "Reference step when no exact solution exists");
  sweep->add_option("-o,--out", out, "Rate-table CSV path");
  sweep->add_option("--trace-dir", trace_dir, "Directory for per-run trace CSVs");
  sweep->add_flag("--serial", serial, "Run sweep entries one after another");
  sweep_ov.attach(sweep);

  auto* sol = app.add_subcommand("soliton", "Solitary-wave profile and its invariants");
  int m = 2, n = 1024;
  double c = 1.0, alpha = 25.0;
  bool petv = false;
  std::string sol_out;
  sol->add_option("--m", m, "Nonlinearity power")->required();
  sol->add_option("--c", c, "Wave speed")->required();
  sol->add_flag("--petviashvili", petv, "Compute the profile by Petviashvili iteration");
  sol->add_option("--N", n, "Number of modes");
  sol->add_option("--alpha", alpha, "Mapping parameter");
  sol->add_option("-o,--out", sol_out, "Write the profile as x,u CSV");

  auto* ref = app.add_subcommand("reference", "Compute a small-step reference solution");
  std::string ref_tau, ref_out;
  std::vector<std::string> ref_times;
  ref->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  ref->add_option("--tau-ref", ref_tau, "Reference step size")->required();
  ref->add_option("--times", ref_times, "Extra sample times");
  ref->add_option("-o,--out", ref_out, "Reference CSV path (t,x,u)");
  ref_ov.attach(ref);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, run_ov);
    if (*sweep) return cmd_sweep(config_path, sweep_ov, taus, schemes, tau_ref, out, trace_dir, serial);
    if (*sol) return cmd_soliton(m, c, petv, n, alpha, sol_out);
    if (*ref) return cmd_reference(config_path, ref_ov, ref_tau, ref_times, ref_out);
  } catch (const gbo::RunFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return 0;
}
