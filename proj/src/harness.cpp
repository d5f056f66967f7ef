#include "gbo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "gbo/kernels.hpp"
#include "gbo/profiles.hpp"
#include "gbo/tableau.hpp"

namespace gbo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Index n with n * tau == t up to rounding, or -1.
long long step_index(double t, double tau) {
  const double q = t / tau;
  const double n = std::round(q);
  if (std::abs(q - n) > 1e-9 * std::max(1.0, std::abs(q))) return -1;
  return static_cast<long long>(n);
}

bool same_time(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

InitialKind parse_initial(const std::string& s) {
  if (s == "soliton") return InitialKind::Soliton;
  if (s == "sech2") return InitialKind::Sech2;
  if (s == "petviashvili") return InitialKind::Petviashvili;
  if (s == "zero") return InitialKind::Zero;
  throw std::invalid_argument("unknown initial data '" + s +
                              "' (expected soliton, sech2, petviashvili or zero)");
}

ErrorReference parse_error_reference(const std::string& s) {
  if (s == "auto") return ErrorReference::Auto;
  if (s == "exact") return ErrorReference::Exact;
  if (s == "file") return ErrorReference::File;
  if (s == "none") return ErrorReference::None;
  throw std::invalid_argument("unknown error_reference '" + s + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw std::runtime_error(where + ": malformed number '" + cell + "'");
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

RunConfig RunConfig::from_config(const Config& cfg) {
  static const std::set<std::string> known = {
      "N", "alpha", "m", "scheme", "stages", "tau", "T", "initial", "c", "x0", "amplitude",
      "scale", "snapshot_times", "trace_path", "snapshot_prefix", "error_reference",
      "reference_path", "C0", "tol_c0", "target_c0", "fp_tol", "fp_maxiter",
      "fp_anderson", "divergence_threshold"};
  for (const auto& [key, value] : cfg.entries()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  RunConfig r;
  r.n = cfg.get_int("N", r.n);
  r.alpha = cfg.get_real("alpha", r.alpha);
  r.m = cfg.get_int("m", r.m);
  if (const auto s = cfg.get("scheme")) {
    std::optional<int> implied;
    r.scheme = parse_scheme(*s, &implied);
    if (implied) r.stages = *implied;
  }
  if (cfg.has("stages")) {
    const int st = cfg.get_int("stages", r.stages);
    if (const auto s = cfg.get("scheme")) {
      std::optional<int> implied;
      parse_scheme(*s, &implied);
      if (implied && *implied != st) {
        throw std::invalid_argument("stages = " + std::to_string(st) + " contradicts scheme '" +
                                    *s + "'");
      }
    }
    r.stages = st;
  }
  r.tau = cfg.get_real("tau", r.tau);
  r.t_final = cfg.get_real("T", r.t_final);
  r.initial.kind = parse_initial(cfg.get_string("initial", "soliton"));
  r.initial.c = cfg.get_real("c", r.initial.c);
  r.initial.x0 = cfg.get_real("x0", r.initial.x0);
  r.initial.amplitude = cfg.get_real("amplitude", r.initial.amplitude);
  r.initial.scale = cfg.get_real("scale", r.initial.scale);
  r.snapshot_times = cfg.get_real_list("snapshot_times");
  r.trace_path = cfg.get_string("trace_path", "");
  r.snapshot_prefix = cfg.get_string("snapshot_prefix", "");
  r.error_reference = parse_error_reference(cfg.get_string("error_reference", "auto"));
  r.reference_path = cfg.get_string("reference_path", "");
  r.c0 = cfg.get_real("C0", r.c0);
  r.tol_c0 = cfg.get_real("tol_c0", r.tol_c0);
  r.target_c0 = cfg.get_real("target_c0", r.target_c0);
  r.fp_tol = cfg.get_real("fp_tol", r.fp_tol);
  r.fp_maxiter = cfg.get_int("fp_maxiter", r.fp_maxiter);
  r.fp_anderson = cfg.get_int("fp_anderson", r.fp_anderson);
  r.divergence_threshold = cfg.get_real("divergence_threshold", r.divergence_threshold);
  r.validate();
  return r;
}

void RunConfig::validate() const {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("N must be even and >= 4");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("T must be positive");
  stepper().validate();
  if (step_count() < 1) throw std::invalid_argument("tau must not exceed T");
  for (double ts : snapshot_times) {
    if (ts < 0.0 || ts > t_final * (1.0 + 1e-12) || step_index(ts, tau) < 0) {
      throw std::invalid_argument("snapshot time " + format_real(ts) +
                                  " is not a step time in [0, T]");
    }
  }
  if (initial.kind == InitialKind::Soliton && !(initial.c > 0.0)) {
    throw std::invalid_argument("soliton speed c must be positive");
  }
  if (initial.kind == InitialKind::Petviashvili && (m < 2 || !(initial.c > 0.0))) {
    throw std::invalid_argument("petviashvili initial data needs m >= 2 and c > 0");
  }
  if (error_reference == ErrorReference::Exact && !has_exact_solution()) {
    throw std::invalid_argument("error_reference = exact needs soliton data with m = 2");
  }
  if (error_reference == ErrorReference::File && reference_path.empty()) {
    throw std::invalid_argument("error_reference = file needs reference_path");
  }
  if (!(tol_c0 > 0.0) || !(target_c0 > 0.0)) {
    throw std::invalid_argument("tol_c0 and target_c0 must be positive");
  }
  if (!(divergence_threshold > 0.0)) {
    throw std::invalid_argument("divergence_threshold must be positive");
  }
}

int RunConfig::step_count() const {
  const double q = t_final / tau;
  const double n = std::round(q);
  if (std::abs(q - n) > 1e-10 * std::max(1.0, q)) {
    throw std::invalid_argument("T / tau = " + format_real(q) +
                                " is not an integer; partial final steps are not allowed");
  }
  return static_cast<int>(n);
}

StepperConfig RunConfig::stepper() const {
  StepperConfig s;
  s.tau = tau;
  s.fp_tol = fp_tol;
  s.fp_maxiter = fp_maxiter;
  s.fp_anderson = fp_anderson;
  s.scheme = scheme;
  s.stages = stages;
  return s;
}

std::string scheme_label(Scheme s, int stages) {
  switch (s) {
    case Scheme::CN_MC: return "CN-MC";
    case Scheme::CN_EC: return "CN-EC";
    case Scheme::IRK_MC: return "IRK" + std::to_string(2 * stages) + "-MC";
    case Scheme::IRK_EC_SAV: return "IRK" + std::to_string(2 * stages) + "-EC";
    case Scheme::LEAPFROG: return "Leap-Frog";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Tracking

void ErrorTracker::record(double t, double linf_err, const InvariantTriple& current) {
  max_i_ = std::max(max_i_, std::abs(current.integral - initial_.integral));
  max_m_ = std::max(max_m_, std::abs(current.mass - initial_.mass));
  max_e_ = std::max(max_e_, std::abs(current.energy - initial_.energy));
  records_.push_back({t, linf_err, max_i_, max_m_, max_e_});
}

const TraceRecord& ErrorTracker::last() const {
  if (records_.empty()) throw std::logic_error("ErrorTracker::last on an empty trace");
  return records_.back();
}

const PhysicalField* ReferenceSolution::at(double t) const {
  for (const auto& s : snapshots) {
    if (same_time(s.t, t)) return &s.u;
  }
  return nullptr;
}

RunFailure::RunFailure(int step, double t, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + " (t = " + format_real(t) + "): " + what),
      step_(step), t_(t) {}

// ---------------------------------------------------------------------------
// Simulation

PhysicalField make_initial(const RunConfig& cfg, const SpectralGrid& g) {
  switch (cfg.initial.kind) {
    case InitialKind::Soliton: return bo_soliton({cfg.initial.c, cfg.initial.x0}, 0.0, g);
    case InitialKind::Sech2: return sech2_init(cfg.initial.amplitude, g);
    case InitialKind::Petviashvili: {
      PhysicalField q = petviashvili_solve({cfg.m}, cfg.initial.c, {}, g).q;
      for (double& v : q.vals) v *= cfg.initial.scale;
      return q;
    }
    case InitialKind::Zero: return PhysicalField(static_cast<std::size_t>(g.size()));
  }
  throw std::logic_error("make_initial: unhandled kind");
}

namespace {

// One scheme behind a uniform interface; owns the factored solvers.
class SchemeDriver {
 public:
  SchemeDriver(const RunConfig& cfg, const SpectralGrid& g, const PhysicalField& u0)
      : cfg_(cfg), g_(g), p_{cfg.m}, step_cfg_(cfg.stepper()) {
    switch (cfg.scheme) {
      case Scheme::CN_MC:
      case Scheme::CN_EC:
        cn_.emplace(g, p_, step_cfg_, cfg.scheme == Scheme::CN_EC);
        break;
      case Scheme::IRK_MC:
        irk_.emplace(g, p_, step_cfg_, gauss_legendre_tableau(cfg.stages), LinearPart::Mass);
        break;
      case Scheme::IRK_EC_SAV: {
        irk_.emplace(g, p_, step_cfg_, gauss_legendre_tableau(cfg.stages), LinearPart::Energy);
        const double moment = potential_moment(u0, cfg.m, g);
        const double c0 = (moment + cfg.c0 < cfg.tol_c0) ? cfg.target_c0 - moment : cfg.c0;
        sav_ = make_sav_state(u0, cfg.m, g, c0, cfg.tol_c0, cfg.target_c0);
        break;
      }
      case Scheme::LEAPFROG:
        leapfrog_.emplace(g, p_, step_cfg_);
        starter_.emplace(g, p_, step_cfg_, gauss_legendre_tableau(2), LinearPart::Mass);
        break;
    }
    u_ = u0;
  }

  void advance(int step, StepDiagnostics& diag) {
    switch (cfg_.scheme) {
      case Scheme::CN_MC:
      case Scheme::CN_EC: u_ = cn_->step(u_, diag); break;
      case Scheme::IRK_MC: u_ = irk_->step_mc(u_, diag); break;
      case Scheme::IRK_EC_SAV:
        sav_ = irk_->step_ec_sav(sav_, diag);
        u_ = sav_.u;
        break;
      case Scheme::LEAPFROG:
        if (step == 1) {
          prev_ = u_;
          u_ = starter_->step_mc(u_, diag);
        } else {
          PhysicalField next = leapfrog_->step(prev_, u_, &diag.imag_residue);
          prev_ = std::move(u_);
          u_ = std::move(next);
        }
        break;
    }
  }

  const PhysicalField& u() const { return u_; }

  InvariantTriple invariants() const {
    return cfg_.scheme == Scheme::IRK_EC_SAV ? compute_invariants(sav_, cfg_.m, g_)
                                             : compute_invariants(u_, cfg_.m, g_);
  }

 private:
  const RunConfig& cfg_;
  const SpectralGrid& g_;
  ModelParams p_;
  StepperConfig step_cfg_;
  std::optional<CnStepper> cn_;
  std::optional<IrkStepper> irk_;
  std::optional<IrkStepper> starter_;
  std::optional<LeapfrogStepper> leapfrog_;
  SavState sav_;
  PhysicalField u_, prev_;
};

}  // namespace

RunResult run_simulation(const RunConfig& cfg, const ReferenceSolution* reference,
                         const std::vector<double>& extra_samples) {
  cfg.validate();
  const int nsteps = cfg.step_count();
  const SpectralGrid g(cfg.n, cfg.alpha);

  ReferenceSolution file_ref;
  bool use_exact = false;
  if (!reference) {
    switch (cfg.error_reference) {
      case ErrorReference::Auto:
        use_exact = cfg.has_exact_solution();
        if (!use_exact && !cfg.reference_path.empty()) {
          file_ref = read_reference_csv(cfg.reference_path, g);
          reference = &file_ref;
        }
        break;
      case ErrorReference::Exact: use_exact = true; break;
      case ErrorReference::File:
        file_ref = read_reference_csv(cfg.reference_path, g);
        reference = &file_ref;
        break;
      case ErrorReference::None: break;
    }
  }
  auto error_at = [&](double t, const PhysicalField& u) {
    if (use_exact) {
      return kernels::max_abs_diff(u.view(), bo_soliton({cfg.initial.c, cfg.initial.x0}, t, g).view());
    }
    if (reference) {
      if (const PhysicalField* r = reference->at(t)) return kernels::max_abs_diff(u.view(), r->view());
    }
    return kNaN;
  };

  // Snapshot steps, in time order.
  std::map<long long, double> sample_steps;
  for (double ts : cfg.snapshot_times) sample_steps.emplace(step_index(ts, cfg.tau), ts);
  for (double ts : extra_samples) {
    const long long k = step_index(ts, cfg.tau);
    if (k < 0 || k > nsteps) {
      throw std::invalid_argument("sample time " + format_real(ts) + " is not a step time");
    }
    sample_steps.emplace(k, ts);
  }

  RunResult res;
  const PhysicalField u0 = make_initial(cfg, g);
  SchemeDriver driver(cfg, g, u0);
  res.trace = ErrorTracker(driver.invariants());
  res.trace.record(0.0, error_at(0.0, u0), driver.invariants());
  auto take_snapshot = [&](long long k, const PhysicalField& u) {
    if (const auto it = sample_steps.find(k); it != sample_steps.end()) {
      res.snapshots.push_back({it->second, u});
    }
  };
  take_snapshot(0, u0);

  for (int step = 1; step <= nsteps; ++step) {
    const double t = step * cfg.tau;
    StepDiagnostics diag;
    try {
      driver.advance(step, diag);
    } catch (const std::exception& e) {
      throw RunFailure(step, t, e.what());
    }
    res.stats.steps = step;
    res.stats.max_fp_iters = std::max(res.stats.max_fp_iters, diag.fp_iters);
    res.stats.total_fp_iters += diag.fp_iters;
    res.stats.c0_adjustments += diag.c0_adjusted ? 1 : 0;
    res.stats.max_imag_residue = std::max(res.stats.max_imag_residue, diag.imag_residue);

    const double norm = kernels::max_abs(driver.u().view());
    if (!(norm <= cfg.divergence_threshold)) {
      res.diverged = true;
      res.diverged_step = step;
      break;
    }
    res.trace.record(t, error_at(t, driver.u()), driver.invariants());
    take_snapshot(step, driver.u());
  }
  res.final_u = driver.u();

  if (!cfg.trace_path.empty()) emit_csv(res.trace, cfg.trace_path);
  if (!cfg.snapshot_prefix.empty()) {
    for (const auto& s : res.snapshots) {
      if (std::any_of(cfg.snapshot_times.begin(), cfg.snapshot_times.end(),
                      [&](double ts) { return same_time(ts, s.t); })) {
        write_snapshot_csv(snapshot_path(cfg.snapshot_prefix, s.t), g, s.u);
      }
    }
  }
  return res;
}

ReferenceSolution reference_solution(RunConfig cfg, double tau_ref,
                                     const std::vector<double>& sample_times) {
  cfg.tau = tau_ref;
  cfg.error_reference = ErrorReference::None;
  cfg.trace_path.clear();
  std::vector<double> samples = sample_times;
  samples.push_back(0.0);
  samples.push_back(cfg.t_final);
  RunResult run = run_simulation(cfg, nullptr, samples);
  if (run.diverged) {
    throw RunFailure(run.diverged_step, run.diverged_step * tau_ref, "reference run diverged");
  }
  ReferenceSolution ref;
  for (auto& s : run.snapshots) {
    if (!ref.at(s.t)) ref.snapshots.push_back(std::move(s));
  }
  std::sort(ref.snapshots.begin(), ref.snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
  return ref;
}

// ---------------------------------------------------------------------------
// Sweeps

std::optional<double> RateTable::rate(std::size_t label, std::size_t tau_index) const {
  if (tau_index == 0 || label >= errors.size() || tau_index >= errors[label].size()) return {};
  const auto& coarse = errors[label][tau_index - 1];
  const auto& fine = errors[label][tau_index];
  if (!coarse || !fine || *fine == 0.0) return {};
  return ratio(*coarse, *fine);
}

RateTable convergence_sweep(const RunConfig& base, const std::vector<double>& taus,
                            std::vector<SweepEntry> schemes, const SweepOptions& opts) {
  if (taus.size() < 2) throw std::invalid_argument("a sweep needs at least two step sizes");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (std::abs(taus[i - 1] / taus[i] - 2.0) > 1e-9) {
      throw std::invalid_argument("sweep step sizes must halve successively");
    }
  }
  if (schemes.empty()) schemes.push_back({base.scheme, base.stages});

  RateTable table;
  table.taus = taus;
  for (const auto& s : schemes) table.labels.push_back(s.label());
  table.errors.assign(schemes.size(), std::vector<std::optional<double>>(taus.size()));

  // References are only needed without an exact solution.
  const bool exact = base.has_exact_solution() && base.error_reference != ErrorReference::None;
  // Sampled at every coarse step so per-step traces also carry errors.
  std::vector<double> ref_samples;
  {
    RunConfig coarse = base;
    coarse.tau = taus.front();
    for (int k = 1; k <= coarse.step_count(); ++k) ref_samples.push_back(k * taus.front());
  }
  std::optional<ReferenceSolution> ref_mc, ref_ec;
  if (!exact) {
    const bool need_mc = std::any_of(schemes.begin(), schemes.end(),
                                     [](const SweepEntry& s) { return is_mass_conserving(s.scheme); });
    const bool need_ec = std::any_of(schemes.begin(), schemes.end(),
                                     [](const SweepEntry& s) { return !is_mass_conserving(s.scheme); });
    RunConfig rc = base;
    rc.stages = 2;
    rc.snapshot_times.clear();
    rc.snapshot_prefix.clear();
    if (need_mc) {
      rc.scheme = Scheme::IRK_MC;
      ref_mc = reference_solution(rc, opts.tau_ref, ref_samples);
    }
    if (need_ec) {
      rc.scheme = Scheme::IRK_EC_SAV;
      ref_ec = reference_solution(rc, opts.tau_ref, ref_samples);
    }
  }

  const auto njobs = static_cast<long long>(schemes.size() * taus.size());
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
  for (long long job = 0; job < njobs; ++job) {
    const auto si = static_cast<std::size_t>(job) / taus.size();
    const auto ti = static_cast<std::size_t>(job) % taus.size();
    RunConfig rc = base;
    rc.scheme = schemes[si].scheme;
    rc.stages = schemes[si].stages;
    rc.tau = taus[ti];
    rc.snapshot_times.clear();
    rc.snapshot_prefix.clear();
    rc.trace_path.clear();
    if (!opts.trace_dir.empty()) {
      rc.trace_path = opts.trace_dir + "/" + table.labels[si] + "_tau" +
                      std::to_string(static_cast<long long>(std::llround(1.0 / taus[ti]))) + ".csv";
    }
    const ReferenceSolution* ref = nullptr;
    if (!exact) ref = is_mass_conserving(rc.scheme) ? &*ref_mc : &*ref_ec;
    try {
      const RunResult run = run_simulation(rc, ref);
      if (!run.diverged) {
        const double err = run.trace.last().linf_err;
        if (std::isfinite(err)) table.errors[si][ti] = err;
      }
    } catch (const std::exception&) {
      // failed runs stay NA
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << "t,linf_err,I_err,M_err,E_err\n";
  for (const auto& r : records) {
    out << format_real(r.t) << ',' << format_real(r.linf_err) << ',' << format_real(r.I_err) << ','
        << format_real(r.M_err) << ',' << format_real(r.E_err) << '\n';
  }
}

void emit_csv(const ErrorTracker& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  write_trace_csv(out, trace.records());
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,linf_err,I_err,M_err,E_err") {
    throw std::runtime_error("trace csv: unexpected header");
  }
  std::vector<TraceRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = "trace csv line " + std::to_string(lineno);
    if (cells.size() != 5) throw std::runtime_error(where + ": expected 5 columns");
    out.push_back({parse_cell(cells[0], where), parse_cell(cells[1], where),
                   parse_cell(cells[2], where), parse_cell(cells[3], where),
                   parse_cell(cells[4], where)});
  }
  return out;
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_trace_csv(in);
}

void write_snapshot_csv(std::ostream& out, const SpectralGrid& g, const PhysicalField& u) {
  out << "x,u\n";
  const auto x = g.x();
  for (std::size_t i = 1; i < u.size(); ++i) out << format_real(x[i]) << ',' << format_real(u[i]) << '\n';
}

void write_snapshot_csv(const std::string& path, const SpectralGrid& g, const PhysicalField& u) {
  std::ofstream out = open_out(path);
  write_snapshot_csv(out, g, u);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

PhysicalField read_snapshot_csv(const std::string& path, const SpectralGrid& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "x,u") throw std::runtime_error(path + ": expected header x,u");
  PhysicalField u(static_cast<std::size_t>(g.size()));
  const auto x = g.x();
  std::size_t i = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2 || i >= u.size()) throw std::runtime_error(path + ": does not match grid");
    const double xi = parse_cell(cells[0], path);
    if (std::abs(xi - x[i]) > 1e-9 * std::max(1.0, std::abs(x[i]))) {
      throw std::runtime_error(path + ": node " + std::to_string(i) + " does not match grid");
    }
    u[i++] = parse_cell(cells[1], path);
  }
  if (i != u.size()) throw std::runtime_error(path + ": too few rows for grid");
  return u;
}

std::string snapshot_path(const std::string& prefix, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", t);
  return prefix + "_t" + buf + ".csv";
}

void write_reference_csv(const std::string& path, const SpectralGrid& g,
                         const ReferenceSolution& ref) {
  std::ofstream out = open_out(path);
  out << "t,x,u\n";
  const auto x = g.x();
  for (const auto& s : ref.snapshots) {
    for (std::size_t i = 1; i < s.u.size(); ++i) {
      out << format_real(s.t) << ',' << format_real(x[i]) << ',' << format_real(s.u[i]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ReferenceSolution read_reference_csv(const std::string& path, const SpectralGrid& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "t,x,u") throw std::runtime_error(path + ": expected header t,x,u");
  ReferenceSolution ref;
  const auto x = g.x();
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw std::runtime_error(path + ": expected 3 columns");
    const double t = parse_cell(cells[0], path);
    if (i == 0 || i == static_cast<std::size_t>(g.size())) {
      ref.snapshots.push_back({t, PhysicalField(static_cast<std::size_t>(g.size()))});
      i = 1;
    }
    const double xi = parse_cell(cells[1], path);
    if (std::abs(xi - x[i]) > 1e-9 * std::max(1.0, std::abs(x[i]))) {
      throw std::runtime_error(path + ": reference grid does not match the run grid");
    }
    ref.snapshots.back().u[i++] = parse_cell(cells[2], path);
  }
  if (i != 0 && i != static_cast<std::size_t>(g.size())) {
    throw std::runtime_error(path + ": truncated reference block");
  }
  return ref;
}

std::string format_tau(double tau) {
  const double inv = 1.0 / tau;
  const double r = std::round(inv);
  if (std::abs(inv - r) < 1e-9 * r && r >= 1.0) return "1/" + std::to_string(static_cast<long long>(r));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", tau);
  return buf;
}

void write_rate_table_csv(std::ostream& out, const RateTable& table) {
  out << "tau";
  for (const auto& l : table.labels) out << ',' << l << "_error," << l << "_rate";
  out << '\n';
  char buf[40];
  for (std::size_t ti = 0; ti < table.taus.size(); ++ti) {
    out << format_tau(table.taus[ti]);
    for (std::size_t li = 0; li < table.labels.size(); ++li) {
      const auto& e = table.errors[li][ti];
      if (e) {
        std::snprintf(buf, sizeof buf, "%.6e", *e);
        out << ',' << buf;
      } else {
        out << ",NA";
      }
      if (const auto r = table.rate(li, ti)) {
        std::snprintf(buf, sizeof buf, "%.4f", *r);
        out << ',' << buf;
      } else {
        out << ",NA";
      }
    }
    out << '\n';
  }
}

void write_rate_table_csv(const std::string& path, const RateTable& table) {
  std::ofstream out = open_out(path);
  write_rate_table_csv(out, table);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void print_rate_table(std::ostream& out, const RateTable& table) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "tau");
  out << buf;
  for (const auto& l : table.labels) {
    std::snprintf(buf, sizeof buf, " | %-10s %-6s", l.c_str(), "rate");
    out << buf;
  }
  out << '\n';
  for (std::size_t ti = 0; ti < table.taus.size(); ++ti) {
    std::snprintf(buf, sizeof buf, "%-10s", format_tau(table.taus[ti]).c_str());
    out << buf;
    for (std::size_t li = 0; li < table.labels.size(); ++li) {
      const auto& e = table.errors[li][ti];
      const auto r = table.rate(li, ti);
      char err[24], rate[24];
      if (e) std::snprintf(err, sizeof err, "%.2e", *e); else std::snprintf(err, sizeof err, "NA");
      if (r) std::snprintf(rate, sizeof rate, "%.2f", *r); else std::snprintf(rate, sizeof rate, "%s", ti ? "NA" : "");
      std::snprintf(buf, sizeof buf, " | %-10s %-6s", err, rate);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace gbo
