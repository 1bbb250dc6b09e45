#include "lsrm/priors.hpp"

#include <cmath>
#include <limits>

namespace lsrm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long kMaxRejection = 100000000L;

double iso_normal_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                         double var) {
  double lp = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    lp += normal_logpdf(x[k], mean[k], var);
  return lp;
}

}  // namespace

Submodel submodel_from_string(const std::string& s) {
  if (s == "M1") return Submodel::kM1;
  if (s == "M2") return Submodel::kM2;
  if (s == "M3") return Submodel::kM3;
  if (s == "M4") return Submodel::kM4;
  if (s == "M5") return Submodel::kM5;
  throw ConfigInvalid("unknown model '" + s + "', expected M1..M5");
}

std::string submodel_name(Submodel m) {
  switch (m) {
    case Submodel::kM1: return "M1";
    case Submodel::kM2: return "M2";
    case Submodel::kM3: return "M3";
    case Submodel::kM4: return "M4";
    case Submodel::kM5: return "M5";
  }
  return "?";
}

ModelStructure ModelStructure::for_submodel(Submodel m, bool m3_iid_effects) {
  ModelStructure st;
  switch (m) {
    case Submodel::kM1:
      break;
    case Submodel::kM2:
      st.intercept_only = true;
      break;
    case Submodel::kM3:
      st.sr = m3_iid_effects ? Sr::kIid : Sr::kConstant;
      st.gg = Gg::kIid;
      break;
    case Submodel::kM4:
      st.sr = Sr::kNone;
      st.gg = Gg::kScalarAr1;
      break;
    case Submodel::kM5:
      st.sr = Sr::kNone;
      st.gg = Gg::kScalarIid;
      break;
  }
  return st;
}

void PriorSpec::validate() const {
  if (!(beta_var > 0.0) || !(phi_sr_var > 0.0) || !(phi_gg_var > 0.0) ||
      !(rho_var > 0.0))
    throw NonpositiveHyperparameter("PriorSpec: normal variances must be > 0");
  if (!(v_sr > 1.0))
    throw InvalidDegreesOfFreedom("PriorSpec: v_sr must exceed dim - 1 = 1");
  if (!(alpha_a > 0.0) || !(delta_a > 0.0) || !(alpha_b > 0.0) ||
      !(delta_b > 0.0))
    throw NonpositiveHyperparameter(
        "PriorSpec: inverse-gamma hyperparameters must be > 0");
  SpdMatrix check(s_sr);  // throws NotPositiveDefinite when s_sr is not PD
}

double log_prior(const ModelParameters& params, const PriorSpec& spec,
                 const ModelStructure& structure) {
  double lp = 0.0;

  for (Eigen::Index c = 0; c < params.beta.cols(); ++c)
    for (Eigen::Index r = 0; r < params.beta.rows(); ++r)
      lp += normal_logpdf(params.beta(r, c), spec.beta_mean, spec.beta_var);

  if (structure.phi_sr_free()) {
    if (!check_stationary(params.ar.phi_sr)) return kNegInf;
    const Eigen::Matrix2d& f = params.ar.phi_sr;
    Eigen::Vector4d v(f(0, 0), f(0, 1), f(1, 0), f(1, 1));
    lp += iso_normal_logpdf(v, spec.phi_sr_mean, spec.phi_sr_var);
  }

  if (structure.phi_gg_free()) {
    const double phi_g = params.ar.phi_gg(0, 0);
    const double phi_gg = params.ar.phi_gg(0, 1);
    if (structure.phi_gg_offdiag_free()) {
      if (!check_stationary(params.ar.phi_gg)) return kNegInf;
      lp += normal_logpdf(phi_g, spec.phi_gg_mean[0], spec.phi_gg_var);
      lp += normal_logpdf(phi_gg, spec.phi_gg_mean[1], spec.phi_gg_var);
    } else {
      if (!(std::fabs(phi_g) < 1.0)) return kNegInf;
      lp += normal_logpdf(phi_g, spec.phi_gg_mean[0], spec.phi_gg_var);
    }
  }

  if (structure.sr_present()) {
    try {
      SpdMatrix g(params.gamma_sr);
      SpdMatrix scale(SpdMatrix(spec.s_sr).inverse());
      lp += inverse_wishart_logpdf(g, spec.v_sr, scale);
    } catch (const NotPositiveDefinite&) {
      return kNegInf;
    }
  }

  if (params.family == ResponseFamily::kBinary) {
    if (!probit_innovation_from(params.ar.phi_gg(0, 0), params.ar.phi_gg(0, 1),
                                params.rho_gg))
      return kNegInf;
    lp += normal_logpdf(params.rho_gg, spec.rho_mean, spec.rho_var);
  } else if (structure.lambda_free()) {
    if (!(params.gamma_g2 > 0.0) || !(std::fabs(params.lambda_gg) < 1.0))
      return kNegInf;
    const WongPair w = wong_inverse(params.gamma_g2, params.lambda_gg);
    lp += inverse_gamma_logpdf(w.sigma_a2, spec.alpha_a, spec.delta_a);
    lp += inverse_gamma_logpdf(w.sigma_b2, spec.alpha_b, spec.delta_b);
  } else {
    if (!(params.gamma_g2 > 0.0)) return kNegInf;
    lp += inverse_gamma_logpdf(params.gamma_g2, spec.alpha_a, spec.delta_a);
  }

  return lp;
}

Eigen::Matrix2Xd simulate_ar_path(const StationaryCovariance& cov,
                                  RngStream& rng) {
  const int T = cov.horizon();
  const Eigen::Matrix2d l0 = cov.lag0_spd().chol_lower();
  const Eigen::Matrix2d lg = cov.gamma_spd().chol_lower();
  Eigen::Matrix2Xd path(2, T);
  Eigen::Vector2d z(rng.normal(), rng.normal());
  path.col(0) = l0 * z;
  for (int t = 1; t < T; ++t) {
    z = Eigen::Vector2d(rng.normal(), rng.normal());
    path.col(t) = cov.phi() * path.col(t - 1) + lg * z;
  }
  return path;
}

ModelParameters sample_from_prior(const PriorSpec& spec, ResponseFamily family,
                                  const ModelStructure& structure,
                                  const ParameterDims& dims, RngStream& rng) {
  spec.validate();
  ModelParameters p;
  p.family = family;
  const int cols = dims.pooled_beta ? 1 : dims.T;
  p.beta.resize(dims.p, cols);
  const double beta_sd = std::sqrt(spec.beta_var);
  for (int c = 0; c < cols; ++c)
    for (int k = 0; k < dims.p; ++k)
      p.beta(k, c) = spec.beta_mean + beta_sd * rng.normal();

  if (structure.phi_sr_free()) {
    const double sd = std::sqrt(spec.phi_sr_var);
    for (long it = 0;; ++it) {
      if (it > kMaxRejection)
        throw Error("sample_from_prior: stationary phi_sr rejection stalled");
      Eigen::Matrix2d f;
      f << spec.phi_sr_mean[0] + sd * rng.normal(),
          spec.phi_sr_mean[1] + sd * rng.normal(),
          spec.phi_sr_mean[2] + sd * rng.normal(),
          spec.phi_sr_mean[3] + sd * rng.normal();
      if (check_stationary(f)) {
        p.ar.phi_sr = f;
        break;
      }
    }
  }

  const double gsd = std::sqrt(spec.phi_gg_var);
  const double rsd = std::sqrt(spec.rho_var);
  if (family == ResponseFamily::kBinary) {
    // (phi_g, phi_gg, rho_gg) share one support set; reject jointly.
    for (long it = 0;; ++it) {
      if (it > kMaxRejection)
        throw Error("sample_from_prior: probit innovation rejection stalled");
      const double phi_g = spec.phi_gg_mean[0] + gsd * rng.normal();
      const double phi_gg = spec.phi_gg_mean[1] + gsd * rng.normal();
      const double rho = spec.rho_mean + rsd * rng.normal();
      if (probit_innovation_from(phi_g, phi_gg, rho)) {
        p.ar.phi_gg = exchangeable2(phi_g, phi_gg);
        p.rho_gg = rho;
        break;
      }
    }
  } else if (structure.phi_gg_free()) {
    for (long it = 0;; ++it) {
      if (it > kMaxRejection)
        throw Error("sample_from_prior: stationary phi_gg rejection stalled");
      const double phi_g = spec.phi_gg_mean[0] + gsd * rng.normal();
      const double phi_gg = structure.phi_gg_offdiag_free()
                                ? spec.phi_gg_mean[1] + gsd * rng.normal()
                                : 0.0;
      const Eigen::Matrix2d f = exchangeable2(phi_g, phi_gg);
      if (structure.phi_gg_offdiag_free() ? check_stationary(f)
                                          : std::fabs(phi_g) < 1.0) {
        p.ar.phi_gg = f;
        break;
      }
    }
  }

  if (structure.sr_present()) {
    SpdMatrix scale(SpdMatrix(spec.s_sr).inverse());
    p.gamma_sr = inverse_wishart_sample(spec.v_sr, scale, rng);
  }

  if (family == ResponseFamily::kGaussian) {
    if (structure.lambda_free()) {
      const double sa = inverse_gamma_sample(spec.alpha_a, spec.delta_a, rng);
      const double sb = inverse_gamma_sample(spec.alpha_b, spec.delta_b, rng);
      wong_transform(sa, sb, &p.gamma_g2, &p.lambda_gg);
    } else {
      p.gamma_g2 = inverse_gamma_sample(spec.alpha_a, spec.delta_a, rng);
      p.lambda_gg = 0.0;
    }
  }

  p.sr.assign(dims.A, Eigen::Matrix2Xd::Zero(2, dims.T));
  if (structure.sr == ModelStructure::Sr::kAr1) {
    StationaryCovariance cov(p.ar.phi_sr, p.gamma_sr, dims.T);
    for (int i = 0; i < dims.A; ++i) p.sr[i] = simulate_ar_path(cov, rng);
  } else if (structure.sr == ModelStructure::Sr::kIid) {
    const Eigen::Matrix2d l = SpdMatrix(p.gamma_sr).chol_lower();
    for (int i = 0; i < dims.A; ++i)
      for (int t = 0; t < dims.T; ++t)
        p.sr[i].col(t) = l * Eigen::Vector2d(rng.normal(), rng.normal());
  } else if (structure.sr == ModelStructure::Sr::kConstant) {
    const Eigen::Matrix2d l = SpdMatrix(p.gamma_sr).chol_lower();
    for (int i = 0; i < dims.A; ++i) {
      const Eigen::Vector2d e = l * Eigen::Vector2d(rng.normal(), rng.normal());
      p.sr[i].colwise() = e;
    }
  }

  return p;
}

}  // namespace lsrm
