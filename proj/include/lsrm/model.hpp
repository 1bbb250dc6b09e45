#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lsrm/numerics.hpp"
#include "lsrm/panel.hpp"

namespace lsrm {

// First-order VAR coefficients for the two bivariate effect processes. The
// sender/receiver block is a general 2x2; the dyad block is exchangeable
// [[phi_g, phi_gg], [phi_gg, phi_g]].
struct ArCoefficients {
  Eigen::Matrix2d phi_sr = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d phi_gg = Eigen::Matrix2d::Zero();
};

// Innovation covariances. gamma_gg is exchangeable with diagonal gamma_g2 and
// off-diagonal lambda_gg * gamma_g2, |lambda_gg| < 1.
struct InnovationCov {
  Eigen::Matrix2d gamma_sr = Eigen::Matrix2d::Identity();
  double gamma_g2 = 1.0;
  double lambda_gg = 0.0;

  Eigen::Matrix2d gamma_gg() const {
    Eigen::Matrix2d g;
    g << gamma_g2, lambda_gg * gamma_g2, lambda_gg * gamma_g2, gamma_g2;
    return g;
  }
};

inline Eigen::Matrix2d exchangeable2(double diag, double off) {
  Eigen::Matrix2d m;
  m << diag, off, off, diag;
  return m;
}

// True when the spectral radius of phi is < 1.
bool check_stationary(const Eigen::Matrix2d& phi);

// Stationary covariance structure of a bivariate AR(1) path over T waves:
// lag(0) solves the fixed point sigma = phi sigma phi' + gamma, lag(d) =
// lag(0) * (phi')^d, and assembled() is the 2T x 2T block-Toeplitz matrix in
// time-major stacking with block (u, v) = lag(v-u) for v >= u and its
// transpose below the diagonal.
class StationaryCovariance {
 public:
  StationaryCovariance(const Eigen::Matrix2d& phi, const Eigen::Matrix2d& gamma,
                       int horizon);

  int horizon() const { return T_; }
  const Eigen::Matrix2d& phi() const { return phi_; }
  const Eigen::Matrix2d& gamma() const { return gamma_; }
  const Eigen::Matrix2d& lag(int d) const;
  const Eigen::MatrixXd& assembled() const { return assembled_; }

  // SpdMatrix views, built on demand and cached.
  const SpdMatrix& assembled_spd() const;
  const SpdMatrix& lag0_spd() const { return sigma0_spd_; }
  const SpdMatrix& gamma_spd() const { return gamma_spd_; }

  // Log density of a zero-mean stacked path (length 2T), evaluated through
  // the Markov factorization: initial block at lag(0), then one innovation
  // term per transition. Agrees with the dense mvn to rounding.
  double path_logdensity(const Eigen::VectorXd& path) const;

 private:
  int T_;
  Eigen::Matrix2d phi_, gamma_;
  std::vector<Eigen::Matrix2d> lags_;
  Eigen::MatrixXd assembled_;
  SpdMatrix sigma0_spd_, gamma_spd_;
  Eigen::Matrix2d sigma0_inv_, gamma_inv_;
  double sigma0_logdet_, gamma_logdet_;
  mutable std::optional<SpdMatrix> assembled_spd_;
};

// Interleaves a 2 x T matrix of per-wave pairs into the stacked path
// (col1, col2, ...) used throughout: time-major, within-time order preserved.
Eigen::VectorXd stack_path(const Eigen::Matrix2Xd& cols);

// Unit-variance innovation parameters for the binary family: given AR
// coefficients (phi_g, phi_gg) and the stationary within-wave correlation
// rho_gg, the innovation diagonal and off-diagonal that make the stationary
// covariance exactly [[1, rho], [rho, 1]].
struct ProbitInnovation {
  double gamma_g2;
  double gamma_off;
};
// Returns nullopt when the implied innovation matrix is not positive definite
// or the AR pair is nonstationary or |rho| >= 1.
std::optional<ProbitInnovation> probit_innovation_from(double phi_g,
                                                       double phi_gg,
                                                       double rho_gg);

// Reparameterization between the exchangeable innovation pair and the
// sum/difference variances: sigma_a2 = var(a-innovation), sigma_b2 =
// var(b-innovation) with a = g_ij + g_ji, b = g_ij - g_ji.
struct WongPair {
  double sigma_a2;
  double sigma_b2;
};
// (sigma_a2, sigma_b2) -> (gamma_g2, lambda_gg).
void wong_transform(double sigma_a2, double sigma_b2, double* gamma_g2,
                    double* lambda_gg);
// (gamma_g2, lambda_gg) -> (sigma_a2, sigma_b2).
WongPair wong_inverse(double gamma_g2, double lambda_gg);

// Model parameters for one draw. beta has one column per wave (or a single
// column when pooled across waves); sr holds one 2 x T matrix per actor with
// row 0 the sender effect and row 1 the receiver effect.
struct ModelParameters {
  ResponseFamily family = ResponseFamily::kGaussian;
  Eigen::MatrixXd beta;  // p x T, or p x 1 when pooled
  ArCoefficients ar;
  Eigen::Matrix2d gamma_sr = Eigen::Matrix2d::Identity();
  double gamma_g2 = 1.0;   // Gaussian family innovation scale
  double lambda_gg = 0.0;  // Gaussian family innovation correlation
  double rho_gg = 0.0;     // binary family stationary correlation
  std::vector<Eigen::Matrix2Xd> sr;

  InnovationCov innovations() const;  // gamma_gg derived per family
};

// Covariance taxonomy at one lag, derived from the two stationary processes.
struct DerivedCovariances {
  int lag = 0;
  double sigma_s = 0;   // cov(s_t, s_{t+d})
  double sigma_r = 0;   // cov(r_t, r_{t+d})
  double sigma_sr = 0;  // cov(s_t, r_{t+d})
  double sigma_rs = 0;  // cov(r_t, s_{t+d})
  double sigma_g = 0;   // cov(g_ij,t, g_ij,t+d)
  double sigma_gg = 0;  // cov(g_ij,t, g_ji,t+d)

  // Autocovariance of one directed relation at this lag.
  double dyad_autocov() const { return sigma_s + sigma_r + sigma_g; }
  // Cross-covariance between the two directions of a dyad at this lag.
  double reciprocity_cov() const { return sigma_gg + sigma_sr + sigma_rs; }
};

// Lag-d entries of the model covariance taxonomy; d = 0 gives the variances
// and within-wave covariances (sigma_sr == sigma_rs there).
DerivedCovariances derived_covariances(const ArCoefficients& ar,
                                       const Eigen::Matrix2d& gamma_sr,
                                       const Eigen::Matrix2d& gamma_gg, int d);

// Linear predictor field eta(i,j,t) = beta_t' x_ijt (beta shared across t
// when it has a single column). Diagonal entries are left at zero.
DirectedField linear_predictor(const DyadPanel& panel,
                               const Eigen::MatrixXd& beta);

// First-order covariance approximation for a GLM transform of the latent
// scale: cov(y1, y2) ~= cov(theta1, theta2) * h'(eta1) * h'(eta2).
template <typename Deriv>
double glm_covariance_approximation(double cov_theta, double eta1, double eta2,
                                    Deriv&& link_deriv) {
  return cov_theta * link_deriv(eta1) * link_deriv(eta2);
}

// Stacked response / eta paths for an ordered pair: (f(i,j,1), f(j,i,1),
// f(i,j,2), f(j,i,2), ...).
Eigen::VectorXd pair_path(const DirectedField& f, int i, int j);

}  // namespace lsrm
