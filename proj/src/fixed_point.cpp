#include "gbo/fixed_point.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Dense>

#include "gbo/kernels.hpp"

namespace gbo {

namespace {

using Vec = Eigen::Map<const Eigen::VectorXd>;

// Anderson mixing over the history of (x_k, G(x_k)) pairs.
class AndersonMixer {
 public:
  explicit AndersonMixer(int depth) : depth_(depth) {}

  // Returns the next iterate given x and gx = G(x).
  std::vector<double> next(const std::vector<double>& x, std::vector<double> gx) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd f = Vec(gx.data(), n) - Vec(x.data(), n);
    Eigen::VectorXd g = Vec(gx.data(), n);
    if (has_prev_) {
      df_.push_back(f - f_prev_);
      dg_.push_back(g - g_prev_);
      if (static_cast<int>(df_.size()) > depth_) {
        df_.pop_front();
        dg_.pop_front();
      }
    }
    f_prev_ = f;
    g_prev_ = std::move(g);
    has_prev_ = true;
    if (df_.empty()) return gx;

    const auto k = static_cast<Eigen::Index>(df_.size());
    Eigen::MatrixXd dfm(n, k);
    for (Eigen::Index j = 0; j < k; ++j) dfm.col(j) = df_[static_cast<std::size_t>(j)];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dfm);
    qr.setThreshold(1e-12);
    if (qr.rank() < k) {
      // Nearly dependent history: restart from the plain step.
      df_.clear();
      dg_.clear();
      return gx;
    }
    const Eigen::VectorXd gamma = qr.solve(f);
    Eigen::Map<Eigen::VectorXd> out(gx.data(), n);
    for (Eigen::Index j = 0; j < k; ++j) out -= gamma(j) * dg_[static_cast<std::size_t>(j)];
    return gx;
  }

 private:
  int depth_;
  bool has_prev_ = false;
  Eigen::VectorXd f_prev_, g_prev_;
  std::deque<Eigen::VectorXd> df_, dg_;
};

}  // namespace

std::vector<double> fixed_point_solve(const ResidualStageMap& stage_map, std::vector<double> guess,
                                      const FixedPointConfig& cfg, StepDiagnostics& diag) {
  std::vector<double> x = std::move(guess);
  std::optional<AndersonMixer> mixer;
  if (cfg.anderson_depth > 0) mixer.emplace(cfg.anderson_depth);
  double update = INFINITY;
  for (int it = 1; it <= cfg.maxiter; ++it) {
    double residual = 0.0;
    std::vector<double> next = stage_map(x, residual);
    if (mixer) next = mixer->next(x, std::move(next));
    update = kernels::max_abs_diff(next, x);
    x = std::move(next);
    diag.fp_iters = it;
    diag.fp_update = update;
    diag.fp_residual = residual;
    if (update <= cfg.tol && residual <= cfg.tol) return x;
    if (!std::isfinite(update) || !std::isfinite(residual)) break;
  }
  std::ostringstream msg;
  msg << "fixed-point iteration did not converge after " << diag.fp_iters
      << " iterations (last update " << update << ", residual " << diag.fp_residual
      << ", tolerance " << cfg.tol << "); try a smaller time step";
  throw FixedPointFailure(msg.str(), diag);
}

std::vector<double> fixed_point_solve(const StageMap& stage_map, std::vector<double> guess,
                                      const FixedPointConfig& cfg, StepDiagnostics& diag) {
  // Without a separate residual the update itself is the convergence measure.
  ResidualStageMap wrapped = [&](const std::vector<double>& x, double& residual) {
    std::vector<double> next = stage_map(x);
    residual = kernels::max_abs_diff(next, x);
    return next;
  };
  return fixed_point_solve(wrapped, std::move(guess), cfg, diag);
}

}  // namespace gbo
