#pragma once

#include <string>
#include <vector>

#include "lsrm/sampler.hpp"

namespace lsrm {

struct ScalarSummary {
  std::string name;
  long n = 0;
  double mean = 0, sd = 0, median = 0, q025 = 0, q975 = 0, ess = 0;
};

// Quantile with linear interpolation at h = (n - 1) p between order
// statistics (the convention most stats environments default to).
double quantile_type7(std::vector<double> values, double p);

// Effective sample size from the initial positive sequence of paired
// autocovariances. Clamped to [1, n]; a constant sequence reports 1.
double effective_sample_size(const std::vector<double>& values);

ScalarSummary summarize_scalar(const std::string& name,
                               const std::vector<double>& values);

// Per-draw trace of one named scalar. Names:
//   beta.t{t}.k{k}   wave t (1-based), covariate k (0-based)
//   beta.k{k}        pooled-coefficient chains
//   phi_s phi_sr phi_rs phi_r      sender/receiver AR entries
//   phi_g phi_gg                   dyad AR entries
//   gamma_s2 gamma_sr_off gamma_r2 sender/receiver innovation entries
//   gamma_g2 lambda_gg rho_gg      dyad innovation / stationary correlation
//   sr.a{i}.t{t}.s  sr.a{i}.t{t}.r actor i (0-based) effect paths
//   imputed.{idx}                  idx-th missing slot, sweep order
std::vector<double> extract_scalar(const PosteriorChain& chain,
                                   const std::string& name);

// The parameter names a fit of this structure actually samples.
std::vector<std::string> default_scalar_names(const PosteriorChain& chain);

std::vector<ScalarSummary> summarize_chain(const PosteriorChain& chain);

// Stationary covariance taxonomy per draw: sigma_s2, sigma_sr0, rho_sr,
// sigma_r2, sigma_g2, sigma_gg0, rho_gg_stat (within-wave values).
std::vector<std::string> derived_scalar_names();
std::vector<double> derived_scalar(const PosteriorChain& chain,
                                   const std::string& name);
std::vector<ScalarSummary> summarize_derived(const PosteriorChain& chain);

}  // namespace lsrm
