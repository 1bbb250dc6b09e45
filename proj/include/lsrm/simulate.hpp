#pragma once

#include <functional>
#include <vector>

#include "lsrm/model.hpp"
#include "lsrm/priors.hpp"

namespace lsrm {

// Realized random-effect paths: one sender/receiver path per actor and one
// bivariate dyad path per unordered pair, stored directed (g.at(i,j,t)).
struct EffectDraws {
  std::vector<Eigen::Matrix2Xd> sr;
  DirectedField g;
};

// Draws all effect paths from their stationary AR processes. Draw order is
// fixed: actors ascending, then unordered pairs (i < j) in lexicographic
// order, each path initial wave first.
EffectDraws simulate_effects(const ArCoefficients& ar,
                             const Eigen::Matrix2d& gamma_sr,
                             const Eigen::Matrix2d& gamma_gg, int n_actors,
                             int n_times, RngStream& rng);

enum class CovariateKind { kConstantOne, kStandardNormal, kSupplied };

// Everything needed to generate one synthetic panel. beta has one column per
// wave or a single pooled column. For the binary family the dyad innovation
// follows from (phi_gg, rho_gg); gamma_g2 / lambda_gg are ignored there.
struct SimulationDesign {
  int n_actors = 10;
  int n_times = 5;
  ResponseFamily family = ResponseFamily::kGaussian;
  Eigen::MatrixXd beta;  // p x T or p x 1
  ArCoefficients ar;
  Eigen::Matrix2d gamma_sr = Eigen::Matrix2d::Identity();
  double gamma_g2 = 1.0;
  double lambda_gg = 0.0;
  double rho_gg = 0.0;
  double missing_fraction = 0.0;
  std::vector<CovariateKind> covariates;  // size p
  // Required when any covariate is kSupplied; called as (i, j, t, k).
  std::function<double(int, int, int, int)> supplied_covariate;

  int n_covariates() const { return static_cast<int>(beta.rows()); }
  ModelParameters truth_parameters() const;  // without effect paths
  void validate() const;
};

struct SimulatedPanel {
  DyadPanel panel;
  ModelParameters truth;  // includes the realized sr paths
  DirectedField g;        // realized dyad paths
  DirectedField theta;    // latent scale (binary family; empty otherwise)
};

// Generates covariates, effects and responses. Missing entries are masked but
// keep their simulated value in memory; file emission is what drops them.
// Draw order: covariates (actor pair by pair, waves ascending), effects,
// missing mask.
SimulatedPanel simulate_panel(const SimulationDesign& design, RngStream& rng);

// Overwrites the responses of `panel` with a fresh draw given fixed
// parameters (all slots, ignoring the missing mask). Returns the latent field
// used: for the binary family the continuous scale that was thresholded, for
// the Gaussian family the response itself.
DirectedField simulate_response_given(DyadPanel& panel,
                                      const ModelParameters& params,
                                      RngStream& rng);

}  // namespace lsrm
