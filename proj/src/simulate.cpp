#include "lsrm/simulate.hpp"

#include <cmath>

namespace lsrm {

EffectDraws simulate_effects(const ArCoefficients& ar,
                             const Eigen::Matrix2d& gamma_sr,
                             const Eigen::Matrix2d& gamma_gg, int n_actors,
                             int n_times, RngStream& rng) {
  EffectDraws out;
  StationaryCovariance cov_sr(ar.phi_sr, gamma_sr, n_times);
  StationaryCovariance cov_gg(ar.phi_gg, gamma_gg, n_times);
  out.sr.reserve(n_actors);
  for (int i = 0; i < n_actors; ++i)
    out.sr.push_back(simulate_ar_path(cov_sr, rng));
  out.g = DirectedField(n_actors, n_times);
  for (int i = 0; i < n_actors; ++i)
    for (int j = i + 1; j < n_actors; ++j) {
      const Eigen::Matrix2Xd path = simulate_ar_path(cov_gg, rng);
      for (int t = 1; t <= n_times; ++t) {
        out.g.at(i, j, t) = path(0, t - 1);
        out.g.at(j, i, t) = path(1, t - 1);
      }
    }
  return out;
}

ModelParameters SimulationDesign::truth_parameters() const {
  ModelParameters p;
  p.family = family;
  p.beta = beta;
  p.ar = ar;
  p.gamma_sr = gamma_sr;
  p.gamma_g2 = gamma_g2;
  p.lambda_gg = lambda_gg;
  p.rho_gg = rho_gg;
  return p;
}

void SimulationDesign::validate() const {
  if (n_actors < 1 || n_times < 1)
    throw ConfigInvalid("SimulationDesign: need n_actors >= 1, n_times >= 1");
  if (beta.cols() != 1 && beta.cols() != n_times)
    throw ConfigInvalid("SimulationDesign: beta columns must be 1 or n_times");
  if (static_cast<int>(covariates.size()) != n_covariates())
    throw ConfigInvalid(
        "SimulationDesign: one covariate descriptor per beta row required");
  for (const auto kind : covariates)
    if (kind == CovariateKind::kSupplied && !supplied_covariate)
      throw ConfigInvalid(
          "SimulationDesign: supplied covariate without a generator");
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0))
    throw ConfigInvalid("SimulationDesign: missing_fraction outside [0,1)");
  if (!check_stationary(ar.phi_sr) || !check_stationary(ar.phi_gg))
    throw NonstationaryCoefficients("SimulationDesign: AR coefficients");
  if (family == ResponseFamily::kBinary) {
    if (!probit_innovation_from(ar.phi_gg(0, 0), ar.phi_gg(0, 1), rho_gg))
      throw NotPositiveDefinite(
          "SimulationDesign: no PD innovation for (phi_g, phi_gg, rho_gg)");
  } else {
    if (!(gamma_g2 > 0.0) || !(std::fabs(lambda_gg) < 1.0))
      throw NonpositiveVariance("SimulationDesign: dyad innovation invalid");
  }
  SpdMatrix check(gamma_sr);
}

SimulatedPanel simulate_panel(const SimulationDesign& design, RngStream& rng) {
  design.validate();
  const int A = design.n_actors, T = design.n_times, p = design.n_covariates();
  DyadPanel panel(A, T, p, design.family);

  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T; ++t)
        for (int k = 0; k < p; ++k) {
          double v = 0.0;
          switch (design.covariates[k]) {
            case CovariateKind::kConstantOne: v = 1.0; break;
            case CovariateKind::kStandardNormal: v = rng.normal(); break;
            case CovariateKind::kSupplied:
              v = design.supplied_covariate(i, j, t, k);
              break;
          }
          panel.set_covariate(i, j, t, k, v);
        }
    }

  ModelParameters truth = design.truth_parameters();
  const InnovationCov inn = truth.innovations();
  EffectDraws effects = simulate_effects(design.ar, design.gamma_sr,
                                         inn.gamma_gg(), A, T, rng);
  truth.sr = effects.sr;

  const DirectedField eta = linear_predictor(panel, design.beta);
  DirectedField theta(A, T);
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T; ++t) {
        const double lat = eta.at(i, j, t) + effects.sr[i](0, t - 1) +
                           effects.sr[j](1, t - 1) + effects.g.at(i, j, t);
        theta.at(i, j, t) = lat;
        panel.set_response(i, j, t,
                           design.family == ResponseFamily::kBinary
                               ? (lat > 0.0 ? 1.0 : 0.0)
                               : lat);
      }
    }

  if (design.missing_fraction > 0.0) {
    for (int i = 0; i < A; ++i)
      for (int j = 0; j < A; ++j) {
        if (i == j) continue;
        for (int t = 1; t <= T; ++t)
          if (rng.uniform() < design.missing_fraction)
            panel.set_missing(i, j, t, true);
      }
  }

  SimulatedPanel out{std::move(panel), std::move(truth), std::move(effects.g),
                     DirectedField()};
  if (design.family == ResponseFamily::kBinary) out.theta = std::move(theta);
  return out;
}

DirectedField simulate_response_given(DyadPanel& panel,
                                      const ModelParameters& params,
                                      RngStream& rng) {
  const int A = panel.n_actors(), T = panel.n_times();
  if (static_cast<int>(params.sr.size()) != A)
    throw DimensionMismatch("simulate_response_given: sr size != A");
  const InnovationCov inn = params.innovations();
  StationaryCovariance cov_gg(params.ar.phi_gg, inn.gamma_gg(), T);
  const DirectedField eta = linear_predictor(panel, params.beta);
  DirectedField latent(A, T);
  for (int i = 0; i < A; ++i)
    for (int j = i + 1; j < A; ++j) {
      const Eigen::Matrix2Xd g = simulate_ar_path(cov_gg, rng);
      for (int t = 1; t <= T; ++t) {
        latent.at(i, j, t) = eta.at(i, j, t) + params.sr[i](0, t - 1) +
                             params.sr[j](1, t - 1) + g(0, t - 1);
        latent.at(j, i, t) = eta.at(j, i, t) + params.sr[j](0, t - 1) +
                             params.sr[i](1, t - 1) + g(1, t - 1);
      }
    }
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T; ++t)
        panel.set_response(i, j, t,
                           params.family == ResponseFamily::kBinary
                               ? (latent.at(i, j, t) > 0.0 ? 1.0 : 0.0)
                               : latent.at(i, j, t));
    }
  return latent;
}

}  // namespace lsrm
