#pragma once

#include <cstdint>
#include <vector>

#include "lsrm/posterior.hpp"
#include "lsrm/sampler.hpp"

namespace lsrm {

struct HoldoutResult {
  Submodel submodel = Submodel::kM1;
  long n_heldout = 0;
  double mse = 0.0;
};

// Copy of the panel with a random `fraction` of its observed cells marked
// missing. The mask stream depends only on mask_seed, so every candidate
// model scores the same held-out set. Optionally reports the masked slots.
DyadPanel mask_observed(const DyadPanel& panel, double fraction,
                        std::uint64_t mask_seed,
                        std::vector<DyadPanel::Slot>* masked = nullptr);

// Fits each candidate on the masked panel and scores the posterior median of
// the imputed value at each held-out cell against the true response.
// Candidate chains get distinct seeds derived from config.seed. Continuous
// responses only.
std::vector<HoldoutResult> holdout_mse(const DyadPanel& panel,
                                       const PriorSpec& priors,
                                       const SamplerConfig& config,
                                       const std::vector<Submodel>& models,
                                       double fraction,
                                       std::uint64_t mask_seed);

}  // namespace lsrm
