#pragma once

// Time steppers for the semi-discrete gBO system.
//
// Implicit stage equations are solved by a preconditioned fixed-point
// iteration: each sweep evaluates the stage residual and corrects it with the
// inverse of I - tau (A (x) L), where L is the stiff linear dispersive part.
// A = V diag(lambda) V^-1 decouples that inverse into one banded
// coefficient-space solve per stage, so each iteration stays O(N log N).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbo/banded.hpp"
#include "gbo/fixed_point.hpp"
#include "gbo/model.hpp"
#include "gbo/spectral_core.hpp"
#include "gbo/tableau.hpp"

namespace gbo {

enum class Scheme { CN_MC, CN_EC, IRK_MC, IRK_EC_SAV, LEAPFROG };

/// Canonical lowercase name: cn-mc, cn-ec, irk-mc, irk-ec, leapfrog.
std::string to_string(Scheme s);

/// Parses a scheme label. Accepts the canonical names and the order-tagged
/// forms irk2-mc, irk4-ec, ... (IRK2 is the one-stage method, IRK4 the
/// two-stage one); for those, the implied stage count is returned as well.
/// Throws std::invalid_argument on unknown labels.
Scheme parse_scheme(const std::string& label, std::optional<int>* stages = nullptr);

/// Whether a scheme conserves mass (true) or energy (false). Leap-Frog counts
/// as energy-type for reference selection.
bool is_mass_conserving(Scheme s);

struct StepperConfig {
  double tau = 0.05;
  double fp_tol = 1e-12;
  int fp_maxiter = 200;
  int fp_anderson = 5;  // Anderson mixing depth for the stage solve, 0 = plain
  Scheme scheme = Scheme::IRK_MC;
  int stages = 2;

  void validate() const;
  FixedPointConfig fixed_point() const { return {fp_tol, fp_maxiter, fp_anderson}; }
};

/// Which stiff linear operator the stage preconditioner inverts.
enum class LinearPart {
  Mass,    // H S2, the dispersive part of the mass form
  Energy,  // D H D with the inner infinity-node projection, energy/SAV forms
};

/// Applies (I - tau (A (x) L))^-1 to a set of stage residuals.
class StagePreconditioner {
 public:
  StagePreconditioner(const SpectralGrid& g, LinearPart part, double tau,
                      const Eigen::MatrixXd& a);

  int stages() const noexcept { return static_cast<int>(solvers_.size()); }
  /// Overwrites the stage residuals with their corrections.
  void apply(std::vector<PhysicalField>& r, double* imag_residue = nullptr) const;

 private:
  const SpectralGrid* g_;
  Eigen::MatrixXcd v_, v_inv_;
  std::vector<ProjectedBandedSolver> solvers_;
};

/// Solver for (I - scale L) y + mu r = b, r^T y = 0 in coefficient space.
ProjectedBandedSolver make_linear_solver(const SpectralGrid& g, LinearPart part, Complex scale);

/// (b^{m+1} - a^{m+1}) / (b^2 - a^2) with the limit ((m+1)/2) ((a+b)/2)^{m-1}
/// near the removable singularity. Reference form of the CN-EC quotient.
double cn_ec_quotient(double a, double b, int m);

/// (G(b) - G(a)) / (b - a) for G(u) = u^{m+1} / (m (m+1)), evaluated as a
/// polynomial so that it has no singularity. Equals
/// 2/(m(m+1)) * cn_ec_quotient(a, b, m) * (a+b)/2 away from b = +-a.
double discrete_gradient(double a, double b, int m);

/// Crank-Nicolson on the mass form; conserves M_h.
PhysicalField cn_step_mc(const PhysicalField& un, const ModelParams& p, const SpectralGrid& g,
                         const StepperConfig& cfg, StepDiagnostics* diag = nullptr);
/// Crank-Nicolson with the discrete-gradient potential; conserves E_h.
PhysicalField cn_step_ec(const PhysicalField& un, const ModelParams& p, const SpectralGrid& g,
                         const StepperConfig& cfg, StepDiagnostics* diag = nullptr);
/// Symplectic IRK on the mass form; conserves M_h.
PhysicalField irk_step_mc(const PhysicalField& un, const ButcherTableau& tab,
                          const ModelParams& p, const SpectralGrid& g, const StepperConfig& cfg,
                          StepDiagnostics* diag = nullptr);
/// Symplectic IRK on the SAV system; conserves the modified energy.
SavState irk_step_ec_sav(const SavState& sn, const ButcherTableau& tab, const ModelParams& p,
                         const SpectralGrid& g, const StepperConfig& cfg,
                         StepDiagnostics* diag = nullptr);

/// Re-chooses c0 so that the radicand becomes target_c0, keeping v^2 - c0
/// fixed. Runs only when the radicand is below tol_c0 unless force is set.
/// Throws std::domain_error if the new v^2 would be negative.
SavState c0_adjust(SavState s, const ModelParams& p, const SpectralGrid& g, bool force = false,
                   bool* adjusted = nullptr);

/// One Leap-Frog step from levels n-1 and n.
PhysicalField leapfrog_step(const PhysicalField& unm1, const PhysicalField& un,
                            const ModelParams& p, const SpectralGrid& g,
                            const StepperConfig& cfg, double* imag_residue = nullptr);
/// u^1 for Leap-Frog: one two-stage IRK-MC step.
PhysicalField leapfrog_start(const PhysicalField& u0, const ModelParams& p, const SpectralGrid& g,
                             const StepperConfig& cfg, StepDiagnostics* diag = nullptr);

// Reusable steppers: they factor their banded systems once per (grid, tau).

class CnStepper {
 public:
  CnStepper(const SpectralGrid& g, const ModelParams& p, const StepperConfig& cfg, bool energy);
  PhysicalField step(const PhysicalField& un, StepDiagnostics& diag) const;

 private:
  const SpectralGrid* g_;
  ModelParams p_;
  StepperConfig cfg_;
  bool energy_;
  StagePreconditioner prec_;
};

class IrkStepper {
 public:
  IrkStepper(const SpectralGrid& g, const ModelParams& p, const StepperConfig& cfg,
             const ButcherTableau& tab, LinearPart part);
  PhysicalField step_mc(const PhysicalField& un, StepDiagnostics& diag) const;
  /// Adjusts c0 first when needed; on a radicand failure inside the stage
  /// solve, forces an adjustment and retries once.
  SavState step_ec_sav(const SavState& sn, StepDiagnostics& diag) const;

 private:
  SavState solve_sav(const SavState& sn, StepDiagnostics& diag) const;

  const SpectralGrid* g_;
  ModelParams p_;
  StepperConfig cfg_;
  ButcherTableau tab_;
  StagePreconditioner prec_;
};

class LeapfrogStepper {
 public:
  LeapfrogStepper(const SpectralGrid& g, const ModelParams& p, const StepperConfig& cfg);
  PhysicalField step(const PhysicalField& unm1, const PhysicalField& un,
                     double* imag_residue = nullptr) const;

 private:
  const SpectralGrid* g_;
  ModelParams p_;
  double tau_;
  ProjectedBandedSolver solver_;
};

}  // namespace gbo
