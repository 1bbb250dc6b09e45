#include "lsrm/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lsrm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double spectral_radius(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

// log of the multivariate gamma function.
double lmgamma(int dim, double a) {
  double out = 0.25 * dim * (dim - 1) * std::log(M_PI);
  for (int j = 1; j <= dim; ++j) out += std::lgamma(a + 0.5 * (1 - j));
  return out;
}

// Standard normal conditioned on Z > a.
double std_truncated_lower(double a, RngStream& rng) {
  if (a <= 5.0) {
    // Work in the upper tail so normal_quantile sees small arguments, which
    // keeps the draw accurate however far a sits below zero.
    const double tail = 0.5 * std::erfc(a * M_SQRT1_2);
    const double s = tail * rng.uniform();
    return -normal_quantile(s);
  }
  // Exponential rejection (rate tuned to the cut) for deep tails.
  const double lam = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(rng.uniform()) / lam;
    const double d = z - lam;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
  }
}

}  // namespace

SpdMatrix::SpdMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw DimensionMismatch("SpdMatrix: matrix is not square");
  const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw NotPositiveDefinite("SpdMatrix: matrix is not symmetric");
  mat_ = 0.5 * (mat_ + mat_.transpose().eval());
  Eigen::LLT<Eigen::MatrixXd> llt(mat_);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("SpdMatrix: Cholesky factorization failed");
  chol_ = llt.matrixL();
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

Eigen::VectorXd SpdMatrix::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(rhs);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd SpdMatrix::solve(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd y = chol_.triangularView<Eigen::Lower>().solve(rhs);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd SpdMatrix::inverse() const {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(mat_.rows(), mat_.cols());
  Eigen::MatrixXd inv = solve(eye);
  return 0.5 * (inv + inv.transpose().eval());
}

double SpdMatrix::quad_form_inv(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(x);
  return z.squaredNorm();
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m) {
  return SpdMatrix(m).chol_lower();
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const SpdMatrix& cov) {
  if (x.size() != mean.size() || x.size() != cov.dim())
    throw DimensionMismatch("mvn_logpdf: size mismatch");
  const double quad = cov.quad_form_inv(x - mean);
  return -0.5 * (x.size() * kLog2Pi + cov.log_det() + quad);
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const SpdMatrix& cov,
                           RngStream& rng) {
  if (mean.size() != cov.dim())
    throw DimensionMismatch("mvn_sample: size mismatch");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + cov.chol_lower() * z;
}

Eigen::VectorXd mvn_sample_from_precision(const SpdMatrix& prec,
                                          const Eigen::VectorXd& linear,
                                          RngStream& rng) {
  if (linear.size() != prec.dim())
    throw DimensionMismatch("mvn_sample_from_precision: size mismatch");
  Eigen::VectorXd z(linear.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  // mean + L^{-T} z has covariance (L L')^{-1} = P^{-1}.
  return prec.solve(linear) +
         prec.chol_lower().transpose().triangularView<Eigen::Upper>().solve(z);
}

double mvn_logpdf_precision(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& mean,
                            const SpdMatrix& prec) {
  if (x.size() != mean.size() || x.size() != prec.dim())
    throw DimensionMismatch("mvn_logpdf_precision: size mismatch");
  const Eigen::VectorXd z = prec.chol_lower().transpose() * (x - mean);
  return -0.5 * (x.size() * kLog2Pi - prec.log_det() + z.squaredNorm());
}

double normal_logpdf(double x, double mean, double var) {
  if (!(var > 0.0)) throw NonpositiveVariance("normal_logpdf: var <= 0");
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double normal_quantile(double p) {
  // Wichura's AS241 (PPND16), accurate to ~1e-16 over (0,1).
  if (!(p > 0.0 && p < 1.0))
    throw NonpositiveHyperparameter("normal_quantile: p outside (0,1)");
  const double q = p - 0.5;
  double r, val;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    val = q *
          (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                6.7265770927008700853e+4) *
                   r +
               4.5921953931549871457e+4) *
                  r +
              1.3731693765509461125e+4) *
                 r +
             1.9715909503065514427e+3) *
                r +
            1.3314166789178437745e+2) *
               r +
           3.3871328727963666080e+0) /
          (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                3.9307895800092710610e+4) *
                   r +
               2.1213794301586595867e+4) *
                  r +
              5.3941960214247511077e+3) *
                 r +
             6.8718700749205790830e+2) *
                r +
            4.2313330701600911252e+1) *
               r +
           1.0);
    return val;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e+0) *
                  r +
              3.64784832476320460504e+0) *
                 r +
             5.76949722146069140550e+0) *
                r +
            4.63033784615654529590e+0) *
               r +
           1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e+0) *
                r +
            2.05319162663775882187e+0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e+0) *
                r +
            5.46378491116411436990e+0) *
               r +
           6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                    r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

double truncated_normal_sample(double mean, double var, TruncationSide side,
                               RngStream& rng) {
  if (!(var > 0.0))
    throw NonpositiveVariance("truncated_normal_sample: var <= 0");
  const double sd = std::sqrt(var);
  if (side == TruncationSide::kRightOfZero)
    return mean + sd * std_truncated_lower(-mean / sd, rng);
  return mean - sd * std_truncated_lower(mean / sd, rng);
}

double gamma_sample(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw NonpositiveHyperparameter("gamma_sample: shape and scale must be > 0");
  if (shape < 1.0) {
    const double x = gamma_sample(shape + 1.0, scale, rng);
    return x * std::pow(rng.uniform(), 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

double inverse_gamma_sample(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw NonpositiveHyperparameter(
        "inverse_gamma_sample: shape and rate must be > 0");
  return rate / gamma_sample(shape, 1.0, rng);
}

double inverse_gamma_logpdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw NonpositiveHyperparameter(
        "inverse_gamma_logpdf: shape and rate must be > 0");
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) -
         (shape + 1.0) * std::log(x) - rate / x;
}

Eigen::MatrixXd wishart_sample(double df, const SpdMatrix& scale,
                               RngStream& rng) {
  const int d = scale.dim();
  if (!(df > d - 1))
    throw InvalidDegreesOfFreedom("wishart_sample: need df > dim - 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    a(i, i) = std::sqrt(gamma_sample(0.5 * (df - i), 2.0, rng));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd m = scale.chol_lower() * a;
  Eigen::MatrixXd w = m * m.transpose();
  return 0.5 * (w + w.transpose().eval());
}

Eigen::MatrixXd inverse_wishart_sample(double df, const SpdMatrix& scale,
                                       RngStream& rng) {
  SpdMatrix w(wishart_sample(df, scale, rng));
  return w.inverse();
}

double inverse_wishart_logpdf(const SpdMatrix& x, double df,
                              const SpdMatrix& scale) {
  const int d = x.dim();
  if (scale.dim() != d)
    throw DimensionMismatch("inverse_wishart_logpdf: dim mismatch");
  if (!(df > d - 1))
    throw InvalidDegreesOfFreedom("inverse_wishart_logpdf: need df > dim - 1");
  const double trace_term = (scale.inverse() * x.inverse()).trace();
  return -0.5 * df * scale.log_det() - 0.5 * df * d * std::log(2.0) -
         lmgamma(d, 0.5 * df) - 0.5 * (df + d + 1) * x.log_det() -
         0.5 * trace_term;
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& phi,
                                        const Eigen::MatrixXd& gamma) {
  const int n = static_cast<int>(phi.rows());
  if (phi.cols() != n || gamma.rows() != n || gamma.cols() != n)
    throw DimensionMismatch("solve_discrete_lyapunov: size mismatch");
  if (spectral_radius(phi) >= 1.0)
    throw NonstationaryCoefficients(
        "solve_discrete_lyapunov: spectral radius >= 1");
  const int n2 = n * n;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n2, n2);
  for (int ib = 0; ib < n; ++ib)
    for (int ii = 0; ii < n; ++ii)
      for (int jb = 0; jb < n; ++jb)
        for (int ji = 0; ji < n; ++ji)
          sys(ib * n + ii, jb * n + ji) -= phi(ib, jb) * phi(ii, ji);
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(gamma.data(), n2);
  Eigen::VectorXd vec = sys.partialPivLu().solve(rhs);
  Eigen::MatrixXd sigma = Eigen::Map<const Eigen::MatrixXd>(vec.data(), n, n);
  return 0.5 * (sigma + sigma.transpose().eval());
}

}  // namespace lsrm
