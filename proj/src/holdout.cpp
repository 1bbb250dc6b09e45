#include "lsrm/holdout.hpp"

#include "lsrm/errors.hpp"
#include "lsrm/rng.hpp"

namespace lsrm {

DyadPanel mask_observed(const DyadPanel& panel, double fraction,
                        std::uint64_t mask_seed,
                        std::vector<DyadPanel::Slot>* masked) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigInvalid("holdout fraction must lie in (0, 1)");
  DyadPanel out = panel;
  RngStream rng(mask_seed, 0);
  if (masked) masked->clear();
  for (int i = 0; i < panel.n_actors(); ++i)
    for (int j = 0; j < panel.n_actors(); ++j) {
      if (i == j) continue;
      for (int t = 1; t <= panel.n_times(); ++t) {
        if (panel.is_missing(i, j, t)) continue;
        if (rng.uniform() < fraction) {
          out.set_missing(i, j, t, true);
          if (masked) masked->push_back({i, j, t});
        }
      }
    }
  return out;
}

std::vector<HoldoutResult> holdout_mse(const DyadPanel& panel,
                                       const PriorSpec& priors,
                                       const SamplerConfig& config,
                                       const std::vector<Submodel>& models,
                                       double fraction,
                                       std::uint64_t mask_seed) {
  if (panel.family() != ResponseFamily::kGaussian)
    throw ConfigInvalid("holdout scoring needs continuous responses");
  if (models.empty()) throw ConfigInvalid("no candidate models to score");

  DyadPanel masked_panel = mask_observed(panel, fraction, mask_seed);
  if (masked_panel.n_missing() == panel.n_missing())
    throw ConfigInvalid("holdout mask selected no cells");

  std::vector<HoldoutResult> results;
  results.reserve(models.size());
  for (std::size_t idx = 0; idx < models.size(); ++idx) {
    SamplerConfig c = config;
    c.seed = config.seed + idx * 1000003ull;
    ModelStructure structure = ModelStructure::for_submodel(models[idx]);
    PosteriorChain chain =
        run_chain(masked_panel, priors, structure, c, models[idx]);
    if (chain.draws.empty())
      throw EmptyChain("holdout fit kept no posterior draws");

    HoldoutResult r;
    r.submodel = models[idx];
    double sse = 0.0;
    std::vector<double> trace;
    trace.reserve(chain.draws.size());
    for (std::size_t s = 0; s < chain.missing_slots.size(); ++s) {
      const auto& slot = chain.missing_slots[s];
      if (panel.is_missing(slot.i, slot.j, slot.t)) continue;  // was missing
      trace.clear();
      for (const auto& d : chain.draws) trace.push_back(d.imputed[s]);
      double pred = quantile_type7(trace, 0.5);
      double err = pred - panel.response(slot.i, slot.j, slot.t);
      sse += err * err;
      ++r.n_heldout;
    }
    if (r.n_heldout == 0) throw ConfigInvalid("holdout mask selected no cells");
    r.mse = sse / r.n_heldout;
    results.push_back(r);
  }
  return results;
}

}  // namespace lsrm
