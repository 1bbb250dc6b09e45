#include "lsrm/sampler.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "lsrm/numerics.hpp"

namespace lsrm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t fnv_step(std::uint64_t h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv_double(std::uint64_t h, double x) {
  return fnv_step(h, std::bit_cast<std::uint64_t>(x));
}

std::uint64_t fnv_string(std::uint64_t h, const std::string& s) {
  h = fnv_step(h, s.size());
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void SamplerConfig::validate() const {
  if (total_scans < 0) throw ConfigInvalid("total_scans must be >= 0");
  if (burn_in < 0) throw ConfigInvalid("burn_in must be >= 0");
  if (thin < 1) throw ConfigInvalid("thin must be >= 1");
  if (!(gibbs_probability >= 0.0 && gibbs_probability <= 1.0))
    throw ConfigInvalid("gibbs_probability must lie in [0, 1]");
  if (!(rw_step_phi > 0.0)) throw ConfigInvalid("rw_step_phi must be > 0");
  if (!(rw_step_gamma > 0.0)) throw ConfigInvalid("rw_step_gamma must be > 0");
  if (!(rho_halfwidth > 0.0)) throw ConfigInvalid("rho_halfwidth must be > 0");
}

std::uint64_t panel_fingerprint(const DyadPanel& panel) {
  std::uint64_t h = 1469598103934665603ull;
  h = fnv_step(h, static_cast<std::uint64_t>(panel.n_actors()));
  h = fnv_step(h, static_cast<std::uint64_t>(panel.n_times()));
  h = fnv_step(h, static_cast<std::uint64_t>(panel.n_covariates()));
  h = fnv_step(h, panel.family() == ResponseFamily::kBinary ? 1 : 0);
  for (const auto& s : panel.actor_labels()) h = fnv_string(h, s);
  for (const auto& s : panel.covariate_names()) h = fnv_string(h, s);
  for (int i = 0; i < panel.n_actors(); ++i)
    for (int j = 0; j < panel.n_actors(); ++j) {
      if (i == j) continue;
      for (int t = 1; t <= panel.n_times(); ++t) {
        if (panel.is_missing(i, j, t)) {
          h = fnv_step(h, 0x6d697373696e6721ull);
        } else {
          h = fnv_double(h, panel.response(i, j, t));
        }
        for (int k = 0; k < panel.n_covariates(); ++k)
          h = fnv_double(h, panel.covariate(i, j, t, k));
      }
    }
  return h;
}

GibbsSampler::GibbsSampler(const DyadPanel& panel, const PriorSpec& priors,
                           const ModelStructure& structure,
                           const SamplerConfig& config)
    : panel_(panel),
      priors_(priors),
      structure_(structure),
      config_(config),
      A_(panel.n_actors()),
      T_(panel.n_times()),
      p_eff_(structure.intercept_only ? 1 : panel.n_covariates()),
      k_(p_eff_ * (config.pooled_beta ? 1 : panel.n_times())),
      missing_slots_(panel.missing_slots()),
      w_(panel.n_actors(), panel.n_times()),
      eta_(panel.n_actors(), panel.n_times()) {
  panel_.validate();
  priors_.validate();
  config_.validate();
  if (!structure_.intercept_only && panel_.n_covariates() < 1)
    throw ConfigInvalid("fit needs covariates or an intercept-only mean");
  if (panel_.family() == ResponseFamily::kBinary &&
      structure_.gg != ModelStructure::Gg::kAr1)
    throw ConfigInvalid(
        "binary responses require the full dyad AR covariance structure");

  params_.family = panel_.family();
  params_.beta = Eigen::MatrixXd::Zero(p_eff_, config_.pooled_beta ? 1 : T_);
  params_.sr.assign(A_, Eigen::Matrix2Xd::Zero(2, T_));

  if (panel_.family() == ResponseFamily::kGaussian) {
    for (int i = 0; i < A_; ++i)
      for (int j = 0; j < A_; ++j) {
        if (i == j) continue;
        for (int t = 1; t <= T_; ++t)
          w_.at(i, j, t) = panel_.is_missing(i, j, t) ? 0.0
                                                      : panel_.response(i, j, t);
      }
  }

  xpair_.reserve(static_cast<std::size_t>(A_) * (A_ - 1) / 2);
  for (int i = 0; i < A_; ++i)
    for (int j = i + 1; j < A_; ++j) {
      Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2 * T_, k_);
      for (int t = 1; t <= T_; ++t)
        for (int k = 0; k < p_eff_; ++k) {
          int c = config_.pooled_beta ? k : (t - 1) * p_eff_ + k;
          x(2 * (t - 1), c) = xeff(i, j, t, k);
          x(2 * (t - 1) + 1, c) = xeff(j, i, t, k);
        }
      xpair_.push_back(std::move(x));
    }

  rebuild_sigma_sr();
  rebuild_sigma_gg();
  refresh_eta();
}

double GibbsSampler::xeff(int i, int j, int t, int k) const {
  return structure_.intercept_only ? 1.0 : panel_.covariate(i, j, t, k);
}

void GibbsSampler::refresh_eta() {
  for (int i = 0; i < A_; ++i)
    for (int j = 0; j < A_; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T_; ++t) {
        int col = config_.pooled_beta ? 0 : t - 1;
        double e = 0.0;
        for (int k = 0; k < p_eff_; ++k)
          e += xeff(i, j, t, k) * params_.beta(k, col);
        eta_.at(i, j, t) = e;
      }
    }
}

double GibbsSampler::cell_mean(int i, int j, int t) const {
  return eta_.at(i, j, t) + params_.sr[i](0, t - 1) + params_.sr[j](1, t - 1);
}

Eigen::VectorXd GibbsSampler::residual_pair_path(int i, int j) const {
  Eigen::VectorXd v(2 * T_);
  for (int t = 1; t <= T_; ++t) {
    v[2 * (t - 1)] = w_.at(i, j, t) - cell_mean(i, j, t);
    v[2 * (t - 1) + 1] = w_.at(j, i, t) - cell_mean(j, i, t);
  }
  return v;
}

Eigen::VectorXd GibbsSampler::sr_partner_residual(int i, int j) const {
  Eigen::VectorXd v(2 * T_);
  for (int t = 1; t <= T_; ++t) {
    v[2 * (t - 1)] = w_.at(i, j, t) - eta_.at(i, j, t) - params_.sr[j](1, t - 1);
    v[2 * (t - 1) + 1] =
        w_.at(j, i, t) - eta_.at(j, i, t) - params_.sr[j](0, t - 1);
  }
  return v;
}

Eigen::Matrix2d GibbsSampler::current_gamma_gg() const {
  return params_.innovations().gamma_gg();
}

void GibbsSampler::rebuild_sigma_sr() {
  if (structure_.sr == ModelStructure::Sr::kAr1 ||
      structure_.sr == ModelStructure::Sr::kIid) {
    sigma_sr_.emplace(params_.ar.phi_sr, params_.gamma_sr, T_);
  } else {
    sigma_sr_.reset();
  }
}

void GibbsSampler::rebuild_sigma_gg() {
  sigma_gg_.emplace(params_.ar.phi_gg, current_gamma_gg(), T_);
}

void GibbsSampler::set_state(const ModelParameters& params) {
  if (params.family != panel_.family())
    throw ConfigInvalid("state family does not match the panel");
  if (params.beta.rows() != p_eff_ ||
      params.beta.cols() != (config_.pooled_beta ? 1 : T_))
    throw DimensionMismatch("beta shape does not match the fit layout");
  if (static_cast<int>(params.sr.size()) != A_)
    throw DimensionMismatch("sender/receiver effect count != actors");
  for (const auto& m : params.sr)
    if (m.cols() != T_)
      throw DimensionMismatch("sender/receiver path length != waves");
  params_ = params;
  rebuild_sigma_sr();
  rebuild_sigma_gg();
  refresh_eta();
}

void GibbsSampler::set_response_field(const DirectedField& w) {
  if (w.A != A_ || w.T != T_)
    throw DimensionMismatch("response field dimensions do not match the panel");
  w_ = w;
}

void GibbsSampler::refresh_observations(const DirectedField& w) {
  set_response_field(w);
  if (panel_.family() != ResponseFamily::kBinary) return;
  for (int i = 0; i < A_; ++i)
    for (int j = 0; j < A_; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T_; ++t) {
        if (panel_.is_missing(i, j, t)) continue;
        panel_.set_response(i, j, t, w.at(i, j, t) > 0.0 ? 1.0 : 0.0);
      }
    }
}

void GibbsSampler::default_initialize() {
  params_.ar = ArCoefficients{};
  params_.gamma_sr = Eigen::Matrix2d::Identity();
  params_.gamma_g2 = 1.0;
  params_.lambda_gg = 0.0;
  params_.rho_gg = 0.0;
  params_.sr.assign(A_, Eigen::Matrix2Xd::Zero(2, T_));
  params_.beta.setZero();

  if (panel_.family() == ResponseFamily::kGaussian) {
    Eigen::MatrixXd xtx = 1e-6 * Eigen::MatrixXd::Identity(k_, k_);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(k_);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(k_);
    for (int i = 0; i < A_; ++i)
      for (int j = 0; j < A_; ++j) {
        if (i == j) continue;
        for (int t = 1; t <= T_; ++t) {
          if (panel_.is_missing(i, j, t)) continue;
          row.setZero();
          for (int k = 0; k < p_eff_; ++k) {
            int c = config_.pooled_beta ? k : (t - 1) * p_eff_ + k;
            row[c] = xeff(i, j, t, k);
          }
          xtx.noalias() += row * row.transpose();
          xty.noalias() += row * panel_.response(i, j, t);
        }
      }
    Eigen::VectorXd bhat = xtx.ldlt().solve(xty);
    for (int t = 1; t <= (config_.pooled_beta ? 1 : T_); ++t)
      for (int k = 0; k < p_eff_; ++k)
        params_.beta(k, t - 1) = bhat[(t - 1) * p_eff_ + k];
    refresh_eta();

    double ss = 0.0;
    long n = 0;
    for (int i = 0; i < A_; ++i)
      for (int j = 0; j < A_; ++j) {
        if (i == j) continue;
        for (int t = 1; t <= T_; ++t) {
          if (panel_.is_missing(i, j, t)) {
            w_.at(i, j, t) = eta_.at(i, j, t);
            continue;
          }
          double r = panel_.response(i, j, t) - eta_.at(i, j, t);
          w_.at(i, j, t) = panel_.response(i, j, t);
          ss += r * r;
          ++n;
        }
      }
    double vhat = std::max(n > 0 ? ss / n : 1.0, 1e-6);
    params_.gamma_sr = (vhat / 4.0) * Eigen::Matrix2d::Identity();
    params_.gamma_g2 = vhat / 2.0;
  } else {
    refresh_eta();
    const double m = 0.7978845608028654;  // E|N(0,1)|
    for (int i = 0; i < A_; ++i)
      for (int j = 0; j < A_; ++j) {
        if (i == j) continue;
        for (int t = 1; t <= T_; ++t) {
          if (panel_.is_missing(i, j, t)) {
            w_.at(i, j, t) = 0.0;
          } else {
            w_.at(i, j, t) = panel_.response(i, j, t) > 0.5 ? m : -m;
          }
        }
      }
  }

  rebuild_sigma_sr();
  rebuild_sigma_gg();
}

void GibbsSampler::update_beta(RngStream& rng) {
  const SpdMatrix& sgg = sigma_gg_->assembled_spd();
  Eigen::MatrixXd prec =
      Eigen::MatrixXd::Identity(k_, k_) / priors_.beta_var;
  Eigen::VectorXd lin =
      Eigen::VectorXd::Constant(k_, priors_.beta_mean / priors_.beta_var);
  Eigen::VectorXd b(2 * T_);
  std::size_t pidx = 0;
  for (int i = 0; i < A_; ++i)
    for (int j = i + 1; j < A_; ++j, ++pidx) {
      for (int t = 1; t <= T_; ++t) {
        b[2 * (t - 1)] = w_.at(i, j, t) - params_.sr[i](0, t - 1) -
                         params_.sr[j](1, t - 1);
        b[2 * (t - 1) + 1] = w_.at(j, i, t) - params_.sr[j](0, t - 1) -
                             params_.sr[i](1, t - 1);
      }
      Eigen::MatrixXd sx = sgg.solve(xpair_[pidx]);
      prec.noalias() += xpair_[pidx].transpose() * sx;
      lin.noalias() += sx.transpose() * b;
    }
  Eigen::VectorXd draw = mvn_sample_from_precision(SpdMatrix(prec), lin, rng);
  for (int c = 0; c < params_.beta.cols(); ++c)
    for (int k = 0; k < p_eff_; ++k)
      params_.beta(k, c) = draw[c * p_eff_ + k];
  refresh_eta();
}

void GibbsSampler::update_sr(RngStream& rng) {
  if (!structure_.sr_present()) return;
  if (structure_.sr == ModelStructure::Sr::kConstant) {
    update_sr_constant(rng);
    return;
  }
  const Eigen::MatrixXd sgg_inv = sigma_gg_->assembled_spd().inverse();
  const Eigen::MatrixXd ssr_inv = sigma_sr_->assembled_spd().inverse();
  SpdMatrix prec((A_ - 1) * sgg_inv + ssr_inv);
  for (int i = 0; i < A_; ++i) {
    Eigen::VectorXd bsum = Eigen::VectorXd::Zero(2 * T_);
    for (int j = 0; j < A_; ++j)
      if (j != i) bsum += sr_partner_residual(i, j);
    Eigen::VectorXd u = mvn_sample_from_precision(prec, sgg_inv * bsum, rng);
    for (int t = 1; t <= T_; ++t) {
      params_.sr[i](0, t - 1) = u[2 * (t - 1)];
      params_.sr[i](1, t - 1) = u[2 * (t - 1) + 1];
    }
  }
}

void GibbsSampler::update_sr_constant(RngStream& rng) {
  const SpdMatrix& sgg = sigma_gg_->assembled_spd();
  Eigen::MatrixXd rep = Eigen::MatrixXd::Zero(2 * T_, 2);
  for (int t = 0; t < T_; ++t) {
    rep(2 * t, 0) = 1.0;
    rep(2 * t + 1, 1) = 1.0;
  }
  Eigen::MatrixXd srep = sgg.solve(rep);  // sigma^-1 R
  Eigen::Matrix2d quad = rep.transpose() * srep;
  Eigen::Matrix2d gsr_inv = SpdMatrix(params_.gamma_sr).inverse();
  SpdMatrix prec(Eigen::MatrixXd((A_ - 1) * quad + gsr_inv));
  for (int i = 0; i < A_; ++i) {
    Eigen::VectorXd bsum = Eigen::VectorXd::Zero(2 * T_);
    for (int j = 0; j < A_; ++j)
      if (j != i) bsum += sr_partner_residual(i, j);
    Eigen::VectorXd u =
        mvn_sample_from_precision(prec, srep.transpose() * bsum, rng);
    params_.sr[i].colwise() = Eigen::Vector2d(u[0], u[1]);
  }
}

double GibbsSampler::sr_path_loglik(const Eigen::Matrix2d& phi,
                                    const Eigen::Matrix2d& gamma) const {
  StationaryCovariance cov(phi, gamma, T_);
  double ll = 0.0;
  for (int i = 0; i < A_; ++i) ll += cov.path_logdensity(stack_path(params_.sr[i]));
  return ll;
}

double GibbsSampler::gg_path_loglik(const Eigen::Matrix2d& phi,
                                    const Eigen::Matrix2d& gamma) const {
  StationaryCovariance cov(phi, gamma, T_);
  double ll = 0.0;
  for (int i = 0; i < A_; ++i)
    for (int j = i + 1; j < A_; ++j)
      ll += cov.path_logdensity(residual_pair_path(i, j));
  return ll;
}

StepOutcome GibbsSampler::accept_reject(double log_ratio, bool used_gibbs,
                                        RngStream& rng) {
  StepOutcome o;
  o.attempted = true;
  o.used_gibbs = used_gibbs;
  o.accepted = std::log(rng.uniform()) < log_ratio;
  return o;
}

StepOutcome GibbsSampler::update_phi_sr(RngStream& rng) {
  if (!structure_.phi_sr_free()) return {};
  const bool gibbs = rng.uniform() < config_.gibbs_probability;
  const Eigen::Matrix2d gamma = params_.gamma_sr;
  const Eigen::Matrix2d phi_cur = params_.ar.phi_sr;
  Eigen::Vector4d th_cur(phi_cur(0, 0), phi_cur(0, 1), phi_cur(1, 0),
                         phi_cur(1, 1));
  Eigen::Vector4d th_prop;
  double log_ratio = 0.0;

  if (gibbs) {
    Eigen::Matrix2d ginv = SpdMatrix(Eigen::MatrixXd(gamma)).inverse();
    Eigen::Matrix4d wprec =
        Eigen::Matrix4d::Identity() / priors_.phi_sr_var;
    Eigen::Vector4d wlin = priors_.phi_sr_mean / priors_.phi_sr_var;
    Eigen::Matrix<double, 2, 4> z;
    for (int i = 0; i < A_; ++i)
      for (int t = 2; t <= T_; ++t) {
        double s0 = params_.sr[i](0, t - 2);
        double r0 = params_.sr[i](1, t - 2);
        z << s0, r0, 0, 0, 0, 0, s0, r0;
        wprec.noalias() += z.transpose() * ginv * z;
        wlin.noalias() += z.transpose() * ginv * params_.sr[i].col(t - 1);
      }
    SpdMatrix pspd((Eigen::MatrixXd(wprec)));
    th_prop = mvn_sample_from_precision(pspd, wlin, rng);
    Eigen::VectorXd m = pspd.solve(Eigen::VectorXd(wlin));
    log_ratio += mvn_logpdf_precision(th_cur, m, pspd) -
                 mvn_logpdf_precision(th_prop, m, pspd);
  } else {
    for (int k = 0; k < 4; ++k)
      th_prop[k] = th_cur[k] + config_.rw_step_phi * rng.normal();
  }

  Eigen::Matrix2d phi_prop;
  phi_prop << th_prop[0], th_prop[1], th_prop[2], th_prop[3];
  if (!check_stationary(phi_prop)) return accept_reject(kNegInf, gibbs, rng);

  for (int k = 0; k < 4; ++k)
    log_ratio +=
        normal_logpdf(th_prop[k], priors_.phi_sr_mean[k], priors_.phi_sr_var) -
        normal_logpdf(th_cur[k], priors_.phi_sr_mean[k], priors_.phi_sr_var);
  log_ratio += sr_path_loglik(phi_prop, gamma) - sr_path_loglik(phi_cur, gamma);

  StepOutcome o = accept_reject(log_ratio, gibbs, rng);
  if (o.accepted) {
    params_.ar.phi_sr = phi_prop;
    rebuild_sigma_sr();
  }
  return o;
}

StepOutcome GibbsSampler::update_phi_gg(RngStream& rng) {
  if (!structure_.phi_gg_free()) return {};
  const bool offdiag = structure_.phi_gg_offdiag_free();
  const int nf = offdiag ? 2 : 1;
  const bool binary = params_.family == ResponseFamily::kBinary;
  const bool gibbs = rng.uniform() < config_.gibbs_probability;
  const Eigen::Matrix2d gamma_cur = current_gamma_gg();

  Eigen::VectorXd th_cur(nf);
  th_cur[0] = params_.ar.phi_gg(0, 0);
  if (offdiag) th_cur[1] = params_.ar.phi_gg(0, 1);
  Eigen::VectorXd th_prop(nf);
  double log_ratio = 0.0;

  // Working regression of each wave on the previous one under a given
  // innovation matrix; returns the posterior-form precision and linear term.
  auto working = [&](const Eigen::Matrix2d& g, Eigen::MatrixXd* prec,
                     Eigen::VectorXd* lin) {
    Eigen::Matrix2d ginv = SpdMatrix(Eigen::MatrixXd(g)).inverse();
    *prec = Eigen::MatrixXd::Identity(nf, nf) / priors_.phi_gg_var;
    *lin = Eigen::VectorXd::Zero(nf);
    for (int k = 0; k < nf; ++k)
      (*lin)[k] = priors_.phi_gg_mean[k] / priors_.phi_gg_var;
    Eigen::MatrixXd z(2, nf);
    for (int i = 0; i < A_; ++i)
      for (int j = i + 1; j < A_; ++j) {
        Eigen::VectorXd res = residual_pair_path(i, j);
        for (int t = 2; t <= T_; ++t) {
          double a = res[2 * (t - 2)];
          double b = res[2 * (t - 2) + 1];
          z(0, 0) = a;
          z(1, 0) = b;
          if (offdiag) {
            z(0, 1) = b;
            z(1, 1) = a;
          }
          prec->noalias() += z.transpose() * ginv * z;
          lin->noalias() += z.transpose() * ginv * res.segment(2 * (t - 1), 2);
        }
      }
  };

  double logq_fwd = 0.0, logq_rev = 0.0;
  if (gibbs) {
    Eigen::MatrixXd wprec;
    Eigen::VectorXd wlin;
    working(gamma_cur, &wprec, &wlin);
    SpdMatrix pf(wprec);
    th_prop = mvn_sample_from_precision(pf, wlin, rng);
    Eigen::VectorXd mf = pf.solve(wlin);
    logq_fwd = mvn_logpdf_precision(th_prop, mf, pf);
    logq_rev = mvn_logpdf_precision(th_cur, mf, pf);  // replaced below if binary
    if (binary) {
      double g2, off;
      auto pii = probit_innovation_from(th_prop[0],
                                        offdiag ? th_prop[1] : 0.0,
                                        params_.rho_gg);
      if (!pii) return accept_reject(kNegInf, gibbs, rng);
      g2 = pii->gamma_g2;
      off = pii->gamma_off;
      Eigen::MatrixXd rprec;
      Eigen::VectorXd rlin;
      working(exchangeable2(g2, off), &rprec, &rlin);
      SpdMatrix pr(rprec);
      logq_rev = mvn_logpdf_precision(th_cur, pr.solve(rlin), pr);
    }
  } else {
    for (int k = 0; k < nf; ++k)
      th_prop[k] = th_cur[k] + config_.rw_step_phi * rng.normal();
  }

  Eigen::Matrix2d phi_prop =
      exchangeable2(th_prop[0], offdiag ? th_prop[1] : 0.0);
  if (!check_stationary(phi_prop)) return accept_reject(kNegInf, gibbs, rng);

  Eigen::Matrix2d gamma_prop = gamma_cur;
  if (binary) {
    auto pii = probit_innovation_from(th_prop[0], offdiag ? th_prop[1] : 0.0,
                                      params_.rho_gg);
    if (!pii) return accept_reject(kNegInf, gibbs, rng);
    gamma_prop = exchangeable2(pii->gamma_g2, pii->gamma_off);
  }

  if (gibbs) log_ratio += logq_rev - logq_fwd;
  for (int k = 0; k < nf; ++k)
    log_ratio +=
        normal_logpdf(th_prop[k], priors_.phi_gg_mean[k], priors_.phi_gg_var) -
        normal_logpdf(th_cur[k], priors_.phi_gg_mean[k], priors_.phi_gg_var);
  log_ratio += gg_path_loglik(phi_prop, gamma_prop) -
               gg_path_loglik(params_.ar.phi_gg, gamma_cur);

  StepOutcome o = accept_reject(log_ratio, gibbs, rng);
  if (o.accepted) {
    params_.ar.phi_gg = phi_prop;
    rebuild_sigma_gg();
  }
  return o;
}

StepOutcome GibbsSampler::update_gamma_sr(RngStream& rng) {
  if (!structure_.sr_present()) return {};

  if (structure_.sr == ModelStructure::Sr::kConstant) {
    // Static effects make this block conjugate: exact draw, no ratio.
    Eigen::Matrix2d ss = Eigen::Matrix2d::Zero();
    for (int i = 0; i < A_; ++i) {
      Eigen::Vector2d e = params_.sr[i].col(0);
      ss.noalias() += e * e.transpose();
    }
    SpdMatrix scale(SpdMatrix(Eigen::MatrixXd(priors_.s_sr + ss)).inverse());
    params_.gamma_sr = inverse_wishart_sample(priors_.v_sr + A_, scale, rng);
    StepOutcome o;
    o.attempted = o.used_gibbs = o.accepted = true;
    return o;
  }

  const bool gibbs = rng.uniform() < config_.gibbs_probability;
  const Eigen::Matrix2d phi = params_.ar.phi_sr;
  const Eigen::Matrix2d cur = params_.gamma_sr;
  const int t_start = structure_.phi_sr_free() ? 2 : 1;
  Eigen::Matrix2d prop;
  double log_ratio = 0.0;

  if (gibbs) {
    Eigen::Matrix2d ssum = Eigen::Matrix2d::Zero();
    for (int i = 0; i < A_; ++i)
      for (int t = t_start; t <= T_; ++t) {
        Eigen::Vector2d prev = Eigen::Vector2d::Zero();
        if (t > 1) prev = params_.sr[i].col(t - 2);
        Eigen::Vector2d eps = params_.sr[i].col(t - 1) - phi * prev;
        ssum.noalias() += eps * eps.transpose();
      }
    double df = double(A_) * (T_ - t_start + 1) + priors_.v_sr;
    SpdMatrix scale(SpdMatrix(Eigen::MatrixXd(priors_.s_sr + ssum)).inverse());
    prop = inverse_wishart_sample(df, scale, rng);
    log_ratio += inverse_wishart_logpdf(SpdMatrix(Eigen::MatrixXd(cur)), df, scale) -
                 inverse_wishart_logpdf(SpdMatrix(Eigen::MatrixXd(prop)), df, scale);
  } else {
    double gs2 = cur(0, 0), gr2 = cur(1, 1);
    double rho = cur(0, 1) / std::sqrt(gs2 * gr2);
    double gs2p = gs2 * std::exp(config_.rw_step_gamma * rng.normal());
    double gr2p = gr2 * std::exp(config_.rw_step_gamma * rng.normal());
    double rhop = rho + 0.5 * config_.rw_step_gamma * rng.normal();
    if (!(std::abs(rhop) < 1.0)) return accept_reject(kNegInf, gibbs, rng);
    prop = Eigen::Matrix2d();
    prop << gs2p, rhop * std::sqrt(gs2p * gr2p), rhop * std::sqrt(gs2p * gr2p),
        gr2p;
    log_ratio += 1.5 * (std::log(gs2p * gr2p) - std::log(gs2 * gr2));
  }

  SpdMatrix prior_scale(SpdMatrix(Eigen::MatrixXd(priors_.s_sr)).inverse());
  log_ratio +=
      inverse_wishart_logpdf(SpdMatrix(Eigen::MatrixXd(prop)), priors_.v_sr,
                             prior_scale) -
      inverse_wishart_logpdf(SpdMatrix(Eigen::MatrixXd(cur)), priors_.v_sr,
                             prior_scale);
  log_ratio += sr_path_loglik(phi, prop) - sr_path_loglik(phi, cur);

  StepOutcome o = accept_reject(log_ratio, gibbs, rng);
  if (o.accepted) {
    params_.gamma_sr = prop;
    rebuild_sigma_sr();
  }
  return o;
}

StepOutcome GibbsSampler::update_gamma_gg(RngStream& rng) {
  if (params_.family == ResponseFamily::kBinary) return {};
  const bool gibbs = rng.uniform() < config_.gibbs_probability;
  const int t_start = structure_.phi_gg_free() ? 2 : 1;
  const double phi_g = params_.ar.phi_gg(0, 0);
  const double phi_off = params_.ar.phi_gg(0, 1);

  if (structure_.lambda_free()) {
    // Sum/difference coordinates decouple the pair into two scalar AR paths.
    const double phi_a = phi_g + phi_off;
    const double phi_b = phi_g - phi_off;
    double ssa = 0.0, ssb = 0.0;
    long n_terms = 0;
    for (int i = 0; i < A_; ++i)
      for (int j = i + 1; j < A_; ++j) {
        Eigen::VectorXd res = residual_pair_path(i, j);
        for (int t = t_start; t <= T_; ++t) {
          double at = res[2 * (t - 1)] + res[2 * (t - 1) + 1];
          double bt = res[2 * (t - 1)] - res[2 * (t - 1) + 1];
          double ap = 0.0, bp = 0.0;
          if (t > 1) {
            ap = res[2 * (t - 2)] + res[2 * (t - 2) + 1];
            bp = res[2 * (t - 2)] - res[2 * (t - 2) + 1];
          }
          double ea = at - phi_a * ap;
          double eb = bt - phi_b * bp;
          ssa += ea * ea;
          ssb += eb * eb;
          ++n_terms;
        }
      }

    WongPair cur = wong_inverse(params_.gamma_g2, params_.lambda_gg);
    double sa_p, sb_p;
    double log_ratio = 0.0;
    if (gibbs) {
      double shape_a = 0.5 * n_terms + priors_.alpha_a;
      double rate_a = 0.5 * ssa + priors_.delta_a;
      double shape_b = 0.5 * n_terms + priors_.alpha_b;
      double rate_b = 0.5 * ssb + priors_.delta_b;
      sa_p = inverse_gamma_sample(shape_a, rate_a, rng);
      sb_p = inverse_gamma_sample(shape_b, rate_b, rng);
      log_ratio += inverse_gamma_logpdf(cur.sigma_a2, shape_a, rate_a) +
                   inverse_gamma_logpdf(cur.sigma_b2, shape_b, rate_b) -
                   inverse_gamma_logpdf(sa_p, shape_a, rate_a) -
                   inverse_gamma_logpdf(sb_p, shape_b, rate_b);
    } else {
      sa_p = cur.sigma_a2 * std::exp(config_.rw_step_gamma * rng.normal());
      sb_p = cur.sigma_b2 * std::exp(config_.rw_step_gamma * rng.normal());
      log_ratio += std::log(sa_p) + std::log(sb_p) - std::log(cur.sigma_a2) -
                   std::log(cur.sigma_b2);
    }

    double g2p, lp;
    wong_transform(sa_p, sb_p, &g2p, &lp);
    log_ratio += inverse_gamma_logpdf(sa_p, priors_.alpha_a, priors_.delta_a) +
                 inverse_gamma_logpdf(sb_p, priors_.alpha_b, priors_.delta_b) -
                 inverse_gamma_logpdf(cur.sigma_a2, priors_.alpha_a, priors_.delta_a) -
                 inverse_gamma_logpdf(cur.sigma_b2, priors_.alpha_b, priors_.delta_b);
    log_ratio += gg_path_loglik(params_.ar.phi_gg, exchangeable2(g2p, lp * g2p)) -
                 gg_path_loglik(params_.ar.phi_gg,
                                exchangeable2(params_.gamma_g2,
                                              params_.lambda_gg * params_.gamma_g2));

    StepOutcome o = accept_reject(log_ratio, gibbs, rng);
    if (o.accepted) {
      params_.gamma_g2 = g2p;
      params_.lambda_gg = lp;
      rebuild_sigma_gg();
    }
    return o;
  }

  // Scalar residual scale; both directions share one AR(1) innovation
  // variance and the off-diagonal is frozen at zero.
  double ss = 0.0;
  long m = 0;
  for (int i = 0; i < A_; ++i)
    for (int j = i + 1; j < A_; ++j) {
      Eigen::VectorXd res = residual_pair_path(i, j);
      for (int t = t_start; t <= T_; ++t) {
        double p1 = t > 1 ? res[2 * (t - 2)] : 0.0;
        double p2 = t > 1 ? res[2 * (t - 2) + 1] : 0.0;
        double e1 = res[2 * (t - 1)] - phi_g * p1;
        double e2 = res[2 * (t - 1) + 1] - phi_g * p2;
        ss += e1 * e1 + e2 * e2;
        m += 2;
      }
    }

  const double cur_g2 = params_.gamma_g2;
  double prop_g2;
  double log_ratio = 0.0;
  if (gibbs) {
    double shape = 0.5 * m + priors_.alpha_a;
    double rate = 0.5 * ss + priors_.delta_a;
    prop_g2 = inverse_gamma_sample(shape, rate, rng);
    log_ratio += inverse_gamma_logpdf(cur_g2, shape, rate) -
                 inverse_gamma_logpdf(prop_g2, shape, rate);
  } else {
    prop_g2 = cur_g2 * std::exp(config_.rw_step_gamma * rng.normal());
    log_ratio += std::log(prop_g2) - std::log(cur_g2);
  }
  log_ratio += inverse_gamma_logpdf(prop_g2, priors_.alpha_a, priors_.delta_a) -
               inverse_gamma_logpdf(cur_g2, priors_.alpha_a, priors_.delta_a);
  log_ratio += gg_path_loglik(params_.ar.phi_gg, exchangeable2(prop_g2, 0.0)) -
               gg_path_loglik(params_.ar.phi_gg, exchangeable2(cur_g2, 0.0));

  StepOutcome o = accept_reject(log_ratio, gibbs, rng);
  if (o.accepted) {
    params_.gamma_g2 = prop_g2;
    rebuild_sigma_gg();
  }
  return o;
}

void GibbsSampler::missing_conditional(int i, int j, int t,
                                       Eigen::Vector2d* mean,
                                       Eigen::Matrix2d* cov) const {
  const StationaryCovariance& sc = *sigma_gg_;
  const Eigen::Matrix2d phi = sc.phi();
  Eigen::Vector2d mu(cell_mean(i, j, t), cell_mean(j, i, t));
  auto resid = [&](int tt) {
    return Eigen::Vector2d(w_.at(i, j, tt) - cell_mean(i, j, tt),
                           w_.at(j, i, tt) - cell_mean(j, i, tt));
  };
  if (T_ == 1) {
    *mean = mu;
    *cov = sc.lag(0);
    return;
  }
  if (t == T_) {
    *mean = mu + phi * resid(T_ - 1);
    *cov = sc.gamma();
    return;
  }
  const Eigen::Matrix2d ginv = SpdMatrix(Eigen::MatrixXd(sc.gamma())).inverse();
  Eigen::Matrix2d prec;
  Eigen::Vector2d lin;
  if (t == 1) {
    Eigen::Matrix2d s0inv = SpdMatrix(Eigen::MatrixXd(sc.lag(0))).inverse();
    prec = s0inv + phi.transpose() * ginv * phi;
    lin = phi.transpose() * ginv * resid(2);
  } else {
    prec = ginv + phi.transpose() * ginv * phi;
    lin = ginv * (phi * resid(t - 1)) + phi.transpose() * ginv * resid(t + 1);
  }
  SpdMatrix pspd((Eigen::MatrixXd(prec)));
  *cov = pspd.inverse();
  *mean = mu + Eigen::Vector2d(pspd.solve(Eigen::VectorXd(lin)));
}

void GibbsSampler::update_missing(RngStream& rng) {
  if (params_.family == ResponseFamily::kBinary) return;
  if (missing_slots_.empty()) return;
  for (int i = 0; i < A_; ++i)
    for (int j = i + 1; j < A_; ++j)
      for (int t = 1; t <= T_; ++t) {
        bool m1 = panel_.is_missing(i, j, t);
        bool m2 = panel_.is_missing(j, i, t);
        if (!m1 && !m2) continue;
        Eigen::Vector2d mean;
        Eigen::Matrix2d cov;
        missing_conditional(i, j, t, &mean, &cov);
        if (m1 && m2) {
          Eigen::Matrix2d l = cholesky(cov);
          Eigen::Vector2d z(rng.normal(), rng.normal());
          Eigen::Vector2d draw = mean + l * z;
          w_.at(i, j, t) = draw[0];
          w_.at(j, i, t) = draw[1];
        } else if (m1) {
          double mcond = mean[0] + cov(0, 1) / cov(1, 1) *
                                       (w_.at(j, i, t) - mean[1]);
          double vcond = cov(0, 0) - cov(0, 1) * cov(0, 1) / cov(1, 1);
          w_.at(i, j, t) = mcond + std::sqrt(vcond) * rng.normal();
        } else {
          double mcond = mean[1] + cov(0, 1) / cov(0, 0) *
                                       (w_.at(i, j, t) - mean[0]);
          double vcond = cov(1, 1) - cov(0, 1) * cov(0, 1) / cov(0, 0);
          w_.at(j, i, t) = mcond + std::sqrt(vcond) * rng.normal();
        }
      }
}

void GibbsSampler::scan(RngStream& rng) {
  last_ = ChainDraw{};
  if (params_.family == ResponseFamily::kBinary) update_theta(rng);
  update_beta(rng);
  update_sr(rng);
  last_.out_phi_sr = update_phi_sr(rng);
  last_.out_phi_gg = update_phi_gg(rng);
  last_.out_gamma_sr = update_gamma_sr(rng);
  if (params_.family == ResponseFamily::kGaussian) {
    last_.out_gamma_gg = update_gamma_gg(rng);
    update_missing(rng);
  } else {
    last_.out_rho = update_rho(rng);
  }
}

ChainDraw GibbsSampler::snapshot(long scan_index) const {
  ChainDraw d = last_;
  d.scan = scan_index;
  d.params = params_;
  d.imputed.clear();
  d.imputed.reserve(missing_slots_.size());
  const bool binary = params_.family == ResponseFamily::kBinary;
  for (const auto& s : missing_slots_) {
    double v = w_.at(s.i, s.j, s.t);
    d.imputed.push_back(binary ? (v > 0.0 ? 1.0 : 0.0) : v);
  }
  if (binary && config_.save_theta) {
    d.theta.reserve(static_cast<std::size_t>(panel_.n_dyads()) * T_);
    for (int i = 0; i < A_; ++i)
      for (int j = 0; j < A_; ++j) {
        if (i == j) continue;
        for (int t = 1; t <= T_; ++t) d.theta.push_back(w_.at(i, j, t));
      }
  }
  return d;
}

PosteriorChain run_chain(const DyadPanel& panel, const PriorSpec& priors,
                         const ModelStructure& structure,
                         const SamplerConfig& config, Submodel submodel) {
  GibbsSampler sampler(panel, priors, structure, config);
  sampler.default_initialize();
  RngStream rng(config.seed, 0);

  PosteriorChain chain;
  chain.family = panel.family();
  chain.submodel = submodel;
  chain.structure = structure;
  chain.config = config;
  chain.A = panel.n_actors();
  chain.T = panel.n_times();
  chain.p = sampler.effective_covariates();
  chain.panel_fingerprint = panel_fingerprint(panel);
  chain.missing_slots = panel.missing_slots();
  chain.actor_labels = panel.actor_labels();
  if (structure.intercept_only) {
    chain.covariate_names = {"intercept"};
  } else {
    chain.covariate_names = panel.covariate_names();
  }

  long expected = 0;
  if (config.total_scans > config.burn_in)
    expected = (config.total_scans - config.burn_in) / config.thin;
  chain.draws.reserve(expected);

  for (long it = 1; it <= config.total_scans; ++it) {
    sampler.scan(rng);
    const ChainDraw& o = sampler.last_outcomes();
    chain.acc_phi_sr.add(o.out_phi_sr);
    chain.acc_phi_gg.add(o.out_phi_gg);
    chain.acc_gamma_sr.add(o.out_gamma_sr);
    chain.acc_gamma_gg.add(o.out_gamma_gg);
    chain.acc_rho.add(o.out_rho);
    if (it > config.burn_in && (it - config.burn_in) % config.thin == 0)
      chain.draws.push_back(sampler.snapshot(it));
  }
  return chain;
}

}  // namespace lsrm
