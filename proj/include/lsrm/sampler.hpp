#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lsrm/model.hpp"
#include "lsrm/priors.hpp"
#include "lsrm/submodel.hpp"

namespace lsrm {

struct SamplerConfig {
  long total_scans = 55000;
  long burn_in = 10000;
  long thin = 20;
  // For the AR and innovation updates: probability of proposing from the
  // semi-conjugate working form instead of a symmetric random walk.
  double gibbs_probability = 0.5;
  double rw_step_phi = 0.05;
  // Log-scale jitter for variance components; correlation-like coordinates
  // move at half this step.
  double rw_step_gamma = 0.10;
  // Half width of the uniform proposal for the stationary dyad correlation
  // (binary family).
  double rho_halfwidth = 0.10;
  bool pooled_beta = false;
  bool save_theta = false;
  std::uint64_t seed = 1;

  void validate() const;
};

// Result of one Metropolis step. attempted == false when the component is
// not part of the submodel; used_gibbs records which proposal family the
// alternation picked (conjugate exact updates report used_gibbs = true and
// accepted = true).
struct StepOutcome {
  bool attempted = false;
  bool used_gibbs = false;
  bool accepted = false;
};

struct AcceptanceSummary {
  long attempts = 0;
  long accepts = 0;
  long gibbs_proposals = 0;
  double rate() const { return attempts ? double(accepts) / attempts : 0.0; }
  void add(const StepOutcome& o) {
    if (!o.attempted) return;
    ++attempts;
    accepts += o.accepted;
    gibbs_proposals += o.used_gibbs;
  }
};

struct ChainDraw {
  long scan = 0;
  ModelParameters params;
  // Values at the panel's missing slots, in missing_slots() order. Binary
  // family: thresholded latent values.
  std::vector<double> imputed;
  // Latent scale, (i,j,t) lexicographic over i != j; only populated for
  // binary chains run with save_theta.
  std::vector<double> theta;
  StepOutcome out_phi_sr, out_phi_gg, out_gamma_sr, out_gamma_gg, out_rho;
};

struct PosteriorChain {
  ResponseFamily family = ResponseFamily::kGaussian;
  Submodel submodel = Submodel::kM1;
  ModelStructure structure;
  SamplerConfig config;
  int A = 0, T = 0, p = 0;       // p = effective covariate count of the fit
  std::uint64_t panel_fingerprint = 0;
  std::vector<DyadPanel::Slot> missing_slots;
  std::vector<std::string> actor_labels;
  std::vector<std::string> covariate_names;
  std::vector<ChainDraw> draws;
  AcceptanceSummary acc_phi_sr, acc_phi_gg, acc_gamma_sr, acc_gamma_gg, acc_rho;

  int beta_cols() const { return config.pooled_beta ? 1 : T; }
};

// Order-insensitive content hash of a panel (dimensions, labels, responses,
// mask, covariates); ties a chain to the data it was fit on.
std::uint64_t panel_fingerprint(const DyadPanel& panel);

// Metropolis-within-Gibbs sampler over (beta, sr, phi_sr, phi_gg, gamma_sr,
// dyad innovation, missing responses). Runs on a working response field: the
// observed panel responses for the Gaussian family, the latent scale for the
// binary family (which shares every update below through this class).
class GibbsSampler {
 public:
  GibbsSampler(const DyadPanel& panel, const PriorSpec& priors,
               const ModelStructure& structure, const SamplerConfig& config);

  const DyadPanel& panel() const { return panel_; }
  const ModelStructure& structure() const { return structure_; }
  const ModelParameters& state() const { return params_; }
  const DirectedField& response_field() const { return w_; }
  int stacked_beta_dim() const { return k_; }
  int effective_covariates() const { return p_eff_; }

  // Replaces the parameter state (rebuilds covariance caches).
  void set_state(const ModelParameters& params);
  // Replaces the working response field (e.g. a fresh simulated response).
  void set_response_field(const DirectedField& w);
  // Replaces the working response field and, for the binary family, rewrites
  // the panel's observed responses to the signs of the field. Lets a
  // simulation harness cycle fresh responses through a fixed sampler.
  void refresh_observations(const DirectedField& w);
  // Least-squares start: beta from the observed responses ignoring random
  // effects, effects at zero, AR coefficients at zero, innovation scales from
  // the residual variance; missing slots filled with their fitted mean.
  void default_initialize();

  // One full Gaussian-family scan (steps: beta, sr, phi_sr, phi_gg, gamma_sr,
  // dyad innovation, missing data).
  void scan(RngStream& rng);
  const ChainDraw& last_outcomes() const { return last_; }

  // Individual updates; public so harnesses can drive them directly.
  void update_beta(RngStream& rng);
  void update_sr(RngStream& rng);
  StepOutcome update_phi_sr(RngStream& rng);
  StepOutcome update_phi_gg(RngStream& rng);
  StepOutcome update_gamma_sr(RngStream& rng);
  StepOutcome update_gamma_gg(RngStream& rng);
  void update_missing(RngStream& rng);

  // Binary-family extras, used by the probit driver.
  void update_theta(RngStream& rng);
  StepOutcome update_rho(RngStream& rng);

  // Conditional mean and covariance of the dyad pair at wave t given the
  // rest of its path (the missing-data full conditional); exposed for the
  // brute-force comparison tests.
  void missing_conditional(int i, int j, int t, Eigen::Vector2d* mean,
                           Eigen::Matrix2d* cov) const;

  // Snapshot of the current state as a chain draw (scan number filled by the
  // caller).
  ChainDraw snapshot(long scan_index) const;

  // Mean of the working response for (i, j, t): linear predictor plus
  // sender/receiver effects.
  double cell_mean(int i, int j, int t) const;

  // Sum over actors (or pairs) of the stationary AR path log density under
  // the given coefficients; used by the Metropolis ratios and tests.
  double sr_path_loglik(const Eigen::Matrix2d& phi,
                        const Eigen::Matrix2d& gamma) const;
  double gg_path_loglik(const Eigen::Matrix2d& phi,
                        const Eigen::Matrix2d& gamma) const;

  // Current dyad innovation matrix (derived from rho for the binary family).
  Eigen::Matrix2d current_gamma_gg() const;

 private:
  void rebuild_sigma_sr();
  void rebuild_sigma_gg();
  void refresh_eta();
  Eigen::VectorXd residual_pair_path(int i, int j) const;
  // (w - eta) for the ordered pair, with actor j's sender/receiver
  // contributions removed; what remains is actor i's path plus dyad noise.
  Eigen::VectorXd sr_partner_residual(int i, int j) const;
  double xeff(int i, int j, int t, int k) const;
  void update_sr_constant(RngStream& rng);
  StepOutcome accept_reject(double log_ratio, bool used_gibbs, RngStream& rng);

  DyadPanel panel_;
  PriorSpec priors_;
  ModelStructure structure_;
  SamplerConfig config_;
  int A_, T_, p_eff_, k_;
  std::vector<DyadPanel::Slot> missing_slots_;

  ModelParameters params_;
  DirectedField w_;
  DirectedField eta_;
  // Per-pair stacked design matrices (2T x k), pair order (i < j) lex.
  std::vector<Eigen::MatrixXd> xpair_;
  std::optional<StationaryCovariance> sigma_sr_;
  std::optional<StationaryCovariance> sigma_gg_;
  ChainDraw last_;
};

PosteriorChain run_chain(const DyadPanel& panel, const PriorSpec& priors,
                         const ModelStructure& structure,
                         const SamplerConfig& config,
                         Submodel submodel = Submodel::kM1);

}  // namespace lsrm
