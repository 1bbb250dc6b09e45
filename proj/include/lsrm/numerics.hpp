#pragma once

#include <Eigen/Dense>

#include "lsrm/errors.hpp"
#include "lsrm/rng.hpp"

namespace lsrm {

// Symmetric positive definite matrix carrying its Cholesky factor. Validates
// symmetry (1e-10 relative) and positive definiteness on construction and
// throws NotPositiveDefinite otherwise, so downstream code can assume both.
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  const Eigen::MatrixXd& chol_lower() const { return chol_; }
  double log_det() const { return log_det_; }

  // Sigma^{-1} * rhs via two triangular solves.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::MatrixXd inverse() const;

  // x' Sigma^{-1} x.
  double quad_form_inv(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd mat_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
};

// Lower Cholesky factor; NotPositiveDefinite on failure.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m);

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const SpdMatrix& cov);
Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const SpdMatrix& cov,
                           RngStream& rng);

// Normal distribution given in information form: precision P and linear term
// b, i.e. mean P^{-1} b, covariance P^{-1}. The draw consumes exactly dim
// standard normals.
Eigen::VectorXd mvn_sample_from_precision(const SpdMatrix& prec,
                                          const Eigen::VectorXd& linear,
                                          RngStream& rng);
double mvn_logpdf_precision(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& mean, const SpdMatrix& prec);

// Scalar normal helpers.
double normal_logpdf(double x, double mean, double var);
double normal_cdf(double x);
// Inverse standard normal CDF, full double precision (Wichura's AS241).
double normal_quantile(double p);

enum class TruncationSide { kRightOfZero, kLeftOfZero };

// Draw from normal(mean, var) conditioned on X > 0 (kRightOfZero) or X < 0.
// Inverse-CDF in the central regime, exponential rejection once the cut is
// more than 5 sd into the tail; stable for |mean|/sd up to 30 and beyond.
double truncated_normal_sample(double mean, double var, TruncationSide side,
                               RngStream& rng);

// Gamma(shape, scale) by Marsaglia-Tsang; shape > 0, scale > 0.
double gamma_sample(double shape, double scale, RngStream& rng);

// Density x^{-(shape+1)} exp(-rate/x); mean rate/(shape-1) for shape > 1.
double inverse_gamma_sample(double shape, double rate, RngStream& rng);
double inverse_gamma_logpdf(double x, double shape, double rate);

// Wishart(df, scale) with mean df * scale, via Bartlett decomposition.
Eigen::MatrixXd wishart_sample(double df, const SpdMatrix& scale, RngStream& rng);

// Convention: inverse_wishart_sample(df, scale) = W^{-1} with
// W ~ Wishart(df, scale), so the mean is scale^{-1} / (df - dim - 1) and the
// density is |X|^{-(df+dim+1)/2} exp(-tr(scale^{-1} X^{-1})/2) up to a
// constant. Requires df > dim - 1.
Eigen::MatrixXd inverse_wishart_sample(double df, const SpdMatrix& scale,
                                       RngStream& rng);
double inverse_wishart_logpdf(const SpdMatrix& x, double df,
                              const SpdMatrix& scale);

// Solves sigma = phi sigma phi' + gamma through the Kronecker linear system
// (I - phi (x) phi) vec(sigma) = vec(gamma). Any square size; throws
// NonstationaryCoefficients when the spectral radius of phi is >= 1.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& phi,
                                        const Eigen::MatrixXd& gamma);

}  // namespace lsrm
