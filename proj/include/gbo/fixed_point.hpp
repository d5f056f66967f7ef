#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbo {

struct FixedPointConfig {
  double tol = 1e-12;
  int maxiter = 200;
  /// Anderson mixing depth; 0 gives the plain iteration X <- stage_map(X).
  int anderson_depth = 0;
};

/// Per-step solver report.
struct StepDiagnostics {
  int fp_iters = 0;
  double fp_residual = 0.0;  // sup norm of the stage-equation residual at the last iterate
  double fp_update = 0.0;    // sup norm of the last update
  bool c0_adjusted = false;
  double imag_residue = 0.0;
};

/// Raised when the iteration does not reach the tolerance.
class FixedPointFailure : public std::runtime_error {
 public:
  FixedPointFailure(const std::string& what, StepDiagnostics diag)
      : std::runtime_error(what), diag_(diag) {}
  const StepDiagnostics& diagnostics() const noexcept { return diag_; }

 private:
  StepDiagnostics diag_;
};

using StageMap = std::function<std::vector<double>(const std::vector<double>&)>;
/// Stage map that also reports the sup norm of the unpreconditioned residual
/// of the equations at its input.
using ResidualStageMap =
    std::function<std::vector<double>(const std::vector<double>&, double& residual)>;

/// Iterates X <- stage_map(X) from guess until the sup-norm update is at most
/// cfg.tol (and, for a ResidualStageMap, the reported residual as well). With anderson_depth > 0 each new iterate is the Anderson
/// (type II) combination of the last few map outputs, which leaves a much
/// smaller error behind when the update criterion is met. Throws
/// FixedPointFailure after cfg.maxiter iterations or when the iterate stops
/// being finite.
std::vector<double> fixed_point_solve(const StageMap& stage_map, std::vector<double> guess,
                                      const FixedPointConfig& cfg, StepDiagnostics& diag);
std::vector<double> fixed_point_solve(const ResidualStageMap& stage_map, std::vector<double> guess,
                                      const FixedPointConfig& cfg, StepDiagnostics& diag);

}  // namespace gbo
