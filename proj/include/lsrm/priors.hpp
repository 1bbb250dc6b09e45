#pragma once

#include <Eigen/Dense>

#include "lsrm/model.hpp"
#include "lsrm/submodel.hpp"

namespace lsrm {

// Hyperparameters for every block of the model. Normal blocks are isotropic
// (scalar mean expanded over the block, variance times identity), matching
// the diffuse defaults; the inverse-Wishart block takes a full 2x2 scale.
struct PriorSpec {
  // Stacked regression coefficients.
  double beta_mean = 0.0;
  double beta_var = 100.0;
  // AR coefficients, order (phi_s, phi_sr, phi_rs, phi_r); truncated to the
  // stationary region.
  Eigen::Vector4d phi_sr_mean = Eigen::Vector4d::Zero();
  double phi_sr_var = 100.0;
  // Dyad AR pair (phi_g, phi_gg), truncated to the stationary region.
  Eigen::Vector2d phi_gg_mean = Eigen::Vector2d::Zero();
  double phi_gg_var = 100.0;
  // gamma_sr ~ inverse-Wishart with degrees v_sr and prior mean
  // s_sr / (v_sr - 3) when v_sr > 3.
  double v_sr = 4.0;
  Eigen::Matrix2d s_sr = Eigen::Matrix2d::Identity();
  // Dyad innovation scale through the sum/difference variances, each
  // inverse-gamma (Gaussian family; also the scalar residual in M4/M5).
  double alpha_a = 1.0, delta_a = 1.0;
  double alpha_b = 1.0, delta_b = 1.0;
  // Stationary dyad correlation (binary family), truncated to |rho| < 1 and
  // to triples with a positive definite innovation matrix.
  double rho_mean = 0.0;
  double rho_var = 100.0;

  static PriorSpec default_diffuse() { return {}; }
  void validate() const;
};

// Log prior density of one parameter draw. Truncation renormalization
// constants are omitted throughout (they cancel in every acceptance ratio
// this is used in); indicator failures return -infinity. The dyad innovation
// block is evaluated in (sigma_a2, sigma_b2) coordinates.
double log_prior(const ModelParameters& params, const PriorSpec& spec,
                 const ModelStructure& structure);

struct ParameterDims {
  int p = 1;
  int T = 1;
  int A = 2;
  bool pooled_beta = false;
};

// Joint draw from the prior, including the sender/receiver effect paths
// implied by the drawn coefficients. Truncated blocks are drawn by rejection
// from their untruncated versions, jointly where the support couples them.
ModelParameters sample_from_prior(const PriorSpec& spec, ResponseFamily family,
                                  const ModelStructure& structure,
                                  const ParameterDims& dims, RngStream& rng);

// One bivariate stationary AR path over the covariance's horizon: initial
// wave from lag(0), then innovation recursion.
Eigen::Matrix2Xd simulate_ar_path(const StationaryCovariance& cov,
                                  RngStream& rng);

}  // namespace lsrm
