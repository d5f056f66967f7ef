#pragma once

// Experiment driver: run configuration, error tracking, convergence sweeps,
// reference solutions, and CSV input/output.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbo/config.hpp"
#include "gbo/integrators.hpp"
#include "gbo/invariants.hpp"
#include "gbo/spectral_core.hpp"

namespace gbo {

enum class InitialKind { Soliton, Sech2, Petviashvili, Zero };

struct InitialData {
  InitialKind kind = InitialKind::Soliton;
  double c = 2.0;           // soliton / profile speed
  double x0 = 0.0;          // soliton center at t = 0
  double amplitude = -2.0;  // sech^2 amplitude
  double scale = 1.0;       // u0 = scale * Q for Petviashvili profiles
};

/// Where the L-infinity error is measured against.
enum class ErrorReference {
  Auto,   // exact soliton when available, else a reference file if given, else none
  Exact,  // requires soliton data with m = 2
  File,   // requires reference_path
  None,
};

struct RunConfig {
  int n = 1024;
  double alpha = 25.0;
  int m = 2;
  Scheme scheme = Scheme::IRK_MC;
  int stages = 2;
  double tau = 0.05;
  double t_final = 20.0;
  InitialData initial;
  std::vector<double> snapshot_times;
  std::string trace_path;       // empty: no trace file
  std::string snapshot_prefix;  // empty: snapshots kept in memory only
  ErrorReference error_reference = ErrorReference::Auto;
  std::string reference_path;
  double c0 = 0.0;
  double tol_c0 = 5.0;
  double target_c0 = 10.0;
  double fp_tol = 1e-12;
  int fp_maxiter = 200;
  int fp_anderson = 5;
  double divergence_threshold = 1e6;

  /// Reads every recognized key; throws std::invalid_argument on unknown keys
  /// or invalid values.
  static RunConfig from_config(const Config& cfg);
  /// Throws std::invalid_argument when the configuration is inconsistent,
  /// including a step size that does not divide T.
  void validate() const;
  /// round(T / tau).
  int step_count() const;
  StepperConfig stepper() const;
  bool has_exact_solution() const { return initial.kind == InitialKind::Soliton && m == 2; }
};

/// Display name: Leap-Frog, IRK2-MC, IRK4-EC, CN-MC, ...
std::string scheme_label(Scheme s, int stages);

struct TraceRecord {
  double t = 0.0;
  double linf_err = 0.0;  // NaN when no reference exists at t
  double I_err = 0.0;
  double M_err = 0.0;
  double E_err = 0.0;
};

/// Running error quantities. The invariant errors are running maxima of
/// |Q^l - Q^0| over l <= n, so they never decrease.
class ErrorTracker {
 public:
  ErrorTracker() = default;
  explicit ErrorTracker(const InvariantTriple& initial) : initial_(initial) {}

  void record(double t, double linf_err, const InvariantTriple& current);
  const std::vector<TraceRecord>& records() const noexcept { return records_; }
  const InvariantTriple& initial() const noexcept { return initial_; }
  /// Last recorded entry; throws std::logic_error if empty.
  const TraceRecord& last() const;

 private:
  InvariantTriple initial_{};
  double max_i_ = 0.0, max_m_ = 0.0, max_e_ = 0.0;
  std::vector<TraceRecord> records_;
};

struct Snapshot {
  double t = 0.0;
  PhysicalField u;
};

/// Reference trajectory sampled at discrete times.
struct ReferenceSolution {
  std::vector<Snapshot> snapshots;
  /// Field at time t (matched to 1e-9 relative), or nullptr.
  const PhysicalField* at(double t) const;
};

struct RunStats {
  int steps = 0;
  int max_fp_iters = 0;
  long long total_fp_iters = 0;
  int c0_adjustments = 0;
  double max_imag_residue = 0.0;
};

struct RunResult {
  PhysicalField final_u;
  ErrorTracker trace;
  std::vector<Snapshot> snapshots;
  bool diverged = false;     // norm blow-up detected; the run stopped early
  int diverged_step = -1;
  RunStats stats;
};

/// Step failure with its index.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(int step, double t, const std::string& what);
  int step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  int step_;
  double t_;
};

/// Initial field for a configuration on grid g.
PhysicalField make_initial(const RunConfig& cfg, const SpectralGrid& g);

/// Integrates cfg. When `reference` is given it is used for the error
/// regardless of cfg.error_reference. Extra sample times are stored as
/// snapshots alongside cfg.snapshot_times. Throws RunFailure on a solver
/// failure; divergence is reported through RunResult::diverged instead.
RunResult run_simulation(const RunConfig& cfg, const ReferenceSolution* reference = nullptr,
                         const std::vector<double>& extra_samples = {});

/// Runs cfg with step tau_ref and returns its snapshots at t = 0, T and each
/// requested sample time.
ReferenceSolution reference_solution(RunConfig cfg, double tau_ref,
                                     const std::vector<double>& sample_times = {});

struct SweepEntry {
  Scheme scheme = Scheme::IRK_MC;
  int stages = 2;
  std::string label() const { return scheme_label(scheme, stages); }
};

struct SweepOptions {
  double tau_ref = 1.0 / 6400.0;
  bool parallel = true;      // run the (scheme, tau) jobs on OpenMP threads
  std::string trace_dir;     // when set, each run writes <dir>/<label>_tau<k>.csv
};

/// Terminal errors per (scheme, tau) and the ratios error(2 tau) / error(tau).
struct RateTable {
  std::vector<double> taus;
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<double>>> errors;  // [label][tau]

  /// errors[label][i-1] / errors[label][i]; nullopt for i = 0 or missing data.
  std::optional<double> rate(std::size_t label, std::size_t tau_index) const;
  /// Ratio for a pair of errors, as the table defines it.
  static double ratio(double coarse_error, double fine_error) { return coarse_error / fine_error; }
};

/// Sweeps each scheme over taus (decreasing, each half the previous). Errors
/// are terminal L-infinity errors against the exact solution when one exists;
/// otherwise mass-conserving schemes are compared with a two-stage IRK-MC
/// reference and the rest with a two-stage IRK-EC reference, both at
/// opts.tau_ref. Failed or diverged runs are left empty (NA).
RateTable convergence_sweep(const RunConfig& base, const std::vector<double>& taus,
                            std::vector<SweepEntry> schemes = {}, const SweepOptions& opts = {});

// CSV I/O. Reals are written in scientific notation with 17 significant
// digits so that they round-trip exactly.

std::string format_real(double v);
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records);
void emit_csv(const ErrorTracker& trace, const std::string& path);
std::vector<TraceRecord> read_trace_csv(std::istream& in);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

/// `x,u` rows for the finite nodes.
void write_snapshot_csv(std::ostream& out, const SpectralGrid& g, const PhysicalField& u);
void write_snapshot_csv(const std::string& path, const SpectralGrid& g, const PhysicalField& u);
/// Reads values written by write_snapshot_csv back into a field on g; the x
/// column must match the grid nodes.
PhysicalField read_snapshot_csv(const std::string& path, const SpectralGrid& g);
std::string snapshot_path(const std::string& prefix, double t);

/// `t,x,u` rows, one block per snapshot.
void write_reference_csv(const std::string& path, const SpectralGrid& g,
                         const ReferenceSolution& ref);
ReferenceSolution read_reference_csv(const std::string& path, const SpectralGrid& g);

/// Rate table with columns tau, then <label>_error,<label>_rate per scheme;
/// NA marks missing entries.
void write_rate_table_csv(std::ostream& out, const RateTable& table);
void write_rate_table_csv(const std::string& path, const RateTable& table);
/// Human-readable rendering for terminals.
void print_rate_table(std::ostream& out, const RateTable& table);
/// "1/400" when 1/tau is an integer, else the decimal value.
std::string format_tau(double tau);

}  // namespace gbo
