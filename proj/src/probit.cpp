// Binary-family pieces of the sampler: the latent-scale sweep and the
// stationary correlation step. Everything else reuses the shared updates.
#include <cmath>
#include <limits>

#include "lsrm/numerics.hpp"
#include "lsrm/sampler.hpp"

namespace lsrm {

namespace {

// Conditional decomposition of a 2x2 covariance: coefficients and residual
// variances for each coordinate given the other.
struct PairCond {
  double c01, c10, v0, v1;
};

PairCond pair_cond(const Eigen::Matrix2d& v) {
  PairCond c;
  c.c01 = v(0, 1) / v(1, 1);
  c.c10 = v(0, 1) / v(0, 0);
  c.v0 = v(0, 0) - v(0, 1) * v(0, 1) / v(1, 1);
  c.v1 = v(1, 1) - v(0, 1) * v(0, 1) / v(0, 0);
  return c;
}

}  // namespace

void GibbsSampler::update_theta(RngStream& rng) {
  if (params_.family != ResponseFamily::kBinary) return;
  const StationaryCovariance& sc = *sigma_gg_;
  const Eigen::Matrix2d phi = sc.phi();
  const Eigen::Matrix2d gamma = sc.gamma();
  const Eigen::Matrix2d ginv = SpdMatrix(Eigen::MatrixXd(gamma)).inverse();

  // Per-position conditional covariances are shared across pairs; only the
  // means move with the sweep.
  Eigen::Matrix2d v_first, v_interior;
  Eigen::Matrix2d b_first;               // mean weight on resid(t+1) at t = 1
  Eigen::Matrix2d b_prev, b_next;        // interior mean weights
  if (T_ > 1) {
    Eigen::Matrix2d s0inv = SpdMatrix(Eigen::MatrixXd(sc.lag(0))).inverse();
    SpdMatrix p1(Eigen::MatrixXd(s0inv + phi.transpose() * ginv * phi));
    v_first = p1.inverse();
    b_first = v_first * phi.transpose() * ginv;
    SpdMatrix pi(Eigen::MatrixXd(ginv + phi.transpose() * ginv * phi));
    v_interior = pi.inverse();
    b_prev = v_interior * ginv * phi;
    b_next = v_interior * phi.transpose() * ginv;
  }
  PairCond c_first{}, c_interior{}, c_last{}, c_single{};
  if (T_ > 1) {
    c_first = pair_cond(v_first);
    c_interior = pair_cond(v_interior);
    c_last = pair_cond(gamma);
  } else {
    c_single = pair_cond(sc.lag(0));
  }

  auto draw_coord = [&](int i, int j, int t, double mean, double var) {
    if (panel_.is_missing(i, j, t))
      return mean + std::sqrt(var) * rng.normal();
    TruncationSide side = panel_.response(i, j, t) > 0.5
                              ? TruncationSide::kRightOfZero
                              : TruncationSide::kLeftOfZero;
    return truncated_normal_sample(mean, var, side, rng);
  };

  for (int i = 0; i < A_; ++i)
    for (int j = i + 1; j < A_; ++j) {
      auto resid = [&](int tt) {
        return Eigen::Vector2d(w_.at(i, j, tt) - cell_mean(i, j, tt),
                               w_.at(j, i, tt) - cell_mean(j, i, tt));
      };
      for (int t = 1; t <= T_; ++t) {
        Eigen::Vector2d mu(cell_mean(i, j, t), cell_mean(j, i, t));
        Eigen::Vector2d m;
        const PairCond* c;
        if (T_ == 1) {
          m = mu;
          c = &c_single;
        } else if (t == 1) {
          m = mu + b_first * resid(2);
          c = &c_first;
        } else if (t == T_) {
          m = mu + phi * resid(T_ - 1);
          c = &c_last;
        } else {
          m = mu + b_prev * resid(t - 1) + b_next * resid(t + 1);
          c = &c_interior;
        }
        double th2 = w_.at(j, i, t);
        double m0 = m[0] + c->c01 * (th2 - m[1]);
        double th1 = draw_coord(i, j, t, m0, c->v0);
        w_.at(i, j, t) = th1;
        double m1 = m[1] + c->c10 * (th1 - m[0]);
        w_.at(j, i, t) = draw_coord(j, i, t, m1, c->v1);
      }
    }
}

StepOutcome GibbsSampler::update_rho(RngStream& rng) {
  if (params_.family != ResponseFamily::kBinary) return {};
  const double cur = params_.rho_gg;
  const double prop =
      cur + rng.uniform(-config_.rho_halfwidth, config_.rho_halfwidth);
  const double phi_g = params_.ar.phi_gg(0, 0);
  const double phi_off = params_.ar.phi_gg(0, 1);
  auto pii = probit_innovation_from(phi_g, phi_off, prop);
  if (!pii)
    return accept_reject(-std::numeric_limits<double>::infinity(), false, rng);
  Eigen::Matrix2d gamma_prop = exchangeable2(pii->gamma_g2, pii->gamma_off);

  double log_ratio = gg_path_loglik(params_.ar.phi_gg, gamma_prop) -
                     gg_path_loglik(params_.ar.phi_gg, current_gamma_gg());
  log_ratio += normal_logpdf(prop, priors_.rho_mean, priors_.rho_var) -
               normal_logpdf(cur, priors_.rho_mean, priors_.rho_var);

  StepOutcome o = accept_reject(log_ratio, false, rng);
  if (o.accepted) {
    params_.rho_gg = prop;
    rebuild_sigma_gg();
  }
  return o;
}

}  // namespace lsrm
