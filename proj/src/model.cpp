#include "lsrm/model.hpp"

#include <cmath>

namespace lsrm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::Matrix2d inverse2(const Eigen::Matrix2d& m, double* logdet) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (!(det > 0.0) || !(m(0, 0) > 0.0))
    throw NotPositiveDefinite("2x2 matrix is not positive definite");
  *logdet = std::log(det);
  Eigen::Matrix2d inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

double quad2(const Eigen::Matrix2d& minv, double a, double b) {
  return minv(0, 0) * a * a + (minv(0, 1) + minv(1, 0)) * a * b +
         minv(1, 1) * b * b;
}

}  // namespace

bool check_stationary(const Eigen::Matrix2d& phi) {
  const double tr = phi(0, 0) + phi(1, 1);
  const double det = phi(0, 0) * phi(1, 1) - phi(0, 1) * phi(1, 0);
  const double disc = tr * tr - 4.0 * det;
  double radius;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    radius = std::max(std::fabs(0.5 * (tr + root)), std::fabs(0.5 * (tr - root)));
  } else {
    radius = std::sqrt(det);  // complex conjugate pair, |lambda|^2 = det
  }
  return radius < 1.0;
}

StationaryCovariance::StationaryCovariance(const Eigen::Matrix2d& phi,
                                           const Eigen::Matrix2d& gamma,
                                           int horizon)
    : T_(horizon),
      phi_(phi),
      gamma_(gamma),
      sigma0_spd_(solve_discrete_lyapunov(phi, gamma)),
      gamma_spd_(gamma) {
  if (T_ < 1) throw DimensionMismatch("StationaryCovariance: horizon < 1");
  const Eigen::Matrix2d sigma0 = sigma0_spd_.matrix();
  lags_.resize(T_);
  Eigen::Matrix2d power = Eigen::Matrix2d::Identity();  // (phi')^d
  for (int d = 0; d < T_; ++d) {
    lags_[d] = sigma0 * power;
    power = power * phi_.transpose();
  }
  assembled_.resize(2 * T_, 2 * T_);
  for (int u = 0; u < T_; ++u)
    for (int v = 0; v < T_; ++v) {
      const Eigen::Matrix2d blk =
          v >= u ? lags_[v - u] : Eigen::Matrix2d(lags_[u - v].transpose());
      assembled_.block<2, 2>(2 * u, 2 * v) = blk;
    }
  sigma0_inv_ = inverse2(sigma0, &sigma0_logdet_);
  gamma_inv_ = inverse2(gamma_, &gamma_logdet_);
}

const Eigen::Matrix2d& StationaryCovariance::lag(int d) const {
  if (d < 0 || d >= T_)
    throw DimensionMismatch("StationaryCovariance: lag outside 0..T-1");
  return lags_[d];
}

const SpdMatrix& StationaryCovariance::assembled_spd() const {
  if (!assembled_spd_) assembled_spd_.emplace(assembled_);
  return *assembled_spd_;
}

double StationaryCovariance::path_logdensity(const Eigen::VectorXd& path) const {
  if (path.size() != 2 * T_)
    throw DimensionMismatch("path_logdensity: path length != 2T");
  double ll = -0.5 * (2.0 * kLog2Pi + sigma0_logdet_ +
                      quad2(sigma0_inv_, path[0], path[1]));
  for (int t = 1; t < T_; ++t) {
    const double e0 = path[2 * t] - phi_(0, 0) * path[2 * t - 2] -
                      phi_(0, 1) * path[2 * t - 1];
    const double e1 = path[2 * t + 1] - phi_(1, 0) * path[2 * t - 2] -
                      phi_(1, 1) * path[2 * t - 1];
    ll += -0.5 * (2.0 * kLog2Pi + gamma_logdet_ + quad2(gamma_inv_, e0, e1));
  }
  return ll;
}

Eigen::VectorXd stack_path(const Eigen::Matrix2Xd& cols) {
  Eigen::VectorXd out(2 * cols.cols());
  for (Eigen::Index t = 0; t < cols.cols(); ++t) {
    out[2 * t] = cols(0, t);
    out[2 * t + 1] = cols(1, t);
  }
  return out;
}

std::optional<ProbitInnovation> probit_innovation_from(double phi_g,
                                                       double phi_gg,
                                                       double rho_gg) {
  if (!(std::fabs(rho_gg) < 1.0)) return std::nullopt;
  if (!check_stationary(exchangeable2(phi_g, phi_gg))) return std::nullopt;
  const double g2 =
      1.0 - phi_g * phi_g - phi_gg * phi_gg - 2.0 * rho_gg * phi_g * phi_gg;
  const double off = rho_gg - 2.0 * phi_g * phi_gg - rho_gg * phi_g * phi_g -
                     rho_gg * phi_gg * phi_gg;
  if (!(g2 > 0.0) || !(std::fabs(off) < g2)) return std::nullopt;
  return ProbitInnovation{g2, off};
}

void wong_transform(double sigma_a2, double sigma_b2, double* gamma_g2,
                    double* lambda_gg) {
  if (!(sigma_a2 > 0.0) || !(sigma_b2 > 0.0))
    throw NonpositiveVariance("wong_transform: variances must be > 0");
  *gamma_g2 = 0.25 * (sigma_a2 + sigma_b2);
  *lambda_gg = (sigma_a2 - sigma_b2) / (sigma_a2 + sigma_b2);
}

WongPair wong_inverse(double gamma_g2, double lambda_gg) {
  if (!(gamma_g2 > 0.0))
    throw NonpositiveVariance("wong_inverse: gamma_g2 must be > 0");
  if (!(std::fabs(lambda_gg) < 1.0))
    throw NonpositiveVariance("wong_inverse: |lambda_gg| must be < 1");
  return {2.0 * gamma_g2 * (1.0 + lambda_gg), 2.0 * gamma_g2 * (1.0 - lambda_gg)};
}

InnovationCov ModelParameters::innovations() const {
  InnovationCov inn;
  inn.gamma_sr = gamma_sr;
  if (family == ResponseFamily::kBinary) {
    const auto pi =
        probit_innovation_from(ar.phi_gg(0, 0), ar.phi_gg(0, 1), rho_gg);
    if (!pi)
      throw NotPositiveDefinite(
          "ModelParameters: (phi_g, phi_gg, rho_gg) has no PD innovation");
    inn.gamma_g2 = pi->gamma_g2;
    inn.lambda_gg = pi->gamma_off / pi->gamma_g2;
  } else {
    inn.gamma_g2 = gamma_g2;
    inn.lambda_gg = lambda_gg;
  }
  return inn;
}

DerivedCovariances derived_covariances(const ArCoefficients& ar,
                                       const Eigen::Matrix2d& gamma_sr,
                                       const Eigen::Matrix2d& gamma_gg, int d) {
  if (d < 0) throw DimensionMismatch("derived_covariances: lag < 0");
  StationaryCovariance sr(ar.phi_sr, gamma_sr, d + 1);
  StationaryCovariance gg(ar.phi_gg, gamma_gg, d + 1);
  DerivedCovariances out;
  out.lag = d;
  const Eigen::Matrix2d& s = sr.lag(d);
  const Eigen::Matrix2d& g = gg.lag(d);
  out.sigma_s = s(0, 0);
  out.sigma_r = s(1, 1);
  out.sigma_sr = s(0, 1);  // cov(s_t, r_{t+d})
  out.sigma_rs = s(1, 0);  // cov(r_t, s_{t+d})
  out.sigma_g = g(0, 0);
  out.sigma_gg = g(0, 1);
  return out;
}

DirectedField linear_predictor(const DyadPanel& panel,
                               const Eigen::MatrixXd& beta) {
  const int A = panel.n_actors(), T = panel.n_times(), p = panel.n_covariates();
  if (beta.rows() != p)
    throw DimensionMismatch("linear_predictor: beta rows != p");
  if (beta.cols() != 1 && beta.cols() != T)
    throw DimensionMismatch("linear_predictor: beta cols != 1 and != T");
  const bool pooled = beta.cols() == 1;
  DirectedField eta(A, T);
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T; ++t) {
        double v = 0.0;
        const int c = pooled ? 0 : t - 1;
        for (int k = 0; k < p; ++k)
          v += beta(k, c) * panel.covariate(i, j, t, k);
        eta.at(i, j, t) = v;
      }
    }
  return eta;
}

Eigen::VectorXd pair_path(const DirectedField& f, int i, int j) {
  Eigen::VectorXd out(2 * f.T);
  for (int t = 1; t <= f.T; ++t) {
    out[2 * (t - 1)] = f.at(i, j, t);
    out[2 * (t - 1) + 1] = f.at(j, i, t);
  }
  return out;
}

}  // namespace lsrm
