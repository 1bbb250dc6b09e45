#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lsrm/numerics.hpp"

using namespace lsrm;

namespace {

Eigen::MatrixXd random_spd(int d, RngStream& rng, double ridge = 0.5) {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  return a * a.transpose() + ridge * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

TEST_CASE("spd matrix factors, solves and inverts") {
  RngStream rng(1, 0);
  for (int rep = 0; rep < 20; ++rep) {
    int d = 1 + rep % 6;
    Eigen::MatrixXd m = random_spd(d, rng);
    SpdMatrix s(m);
    CHECK(s.dim() == d);

    Eigen::MatrixXd l = s.chol_lower();
    CHECK((l * l.transpose() - m).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(s.log_det() ==
          doctest::Approx(std::log(m.determinant())).epsilon(1e-9));

    Eigen::VectorXd b(d);
    for (int i = 0; i < d; ++i) b(i) = rng.normal();
    Eigen::VectorXd x = s.solve(b);
    CHECK((m * x - b).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m * s.inverse() - Eigen::MatrixXd::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK(s.quad_form_inv(b) == doctest::Approx(b.dot(x)).epsilon(1e-9));
  }
}

TEST_CASE("spd matrix rejects bad input") {
  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(SpdMatrix{rect}, DimensionMismatch);

  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(SpdMatrix{asym}, NotPositiveDefinite);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(SpdMatrix{indef}, NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky(indef), NotPositiveDefinite);
}

TEST_CASE("mvn logpdf matches the diagonal closed form") {
  Eigen::MatrixXd c(2, 2);
  c << 2.0, 0.0, 0.0, 0.5;
  SpdMatrix cov(c);
  Eigen::VectorXd x(2), m(2);
  x << 1.0, -1.0;
  m << 0.5, 0.5;
  double expect = normal_logpdf(1.0, 0.5, 2.0) + normal_logpdf(-1.0, 0.5, 0.5);
  CHECK(mvn_logpdf(x, m, cov) == doctest::Approx(expect).epsilon(1e-12));

  SpdMatrix prec(Eigen::MatrixXd(c.inverse()));
  CHECK(mvn_logpdf_precision(x, m, prec) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("precision form agrees with the covariance form") {
  RngStream rng(2, 0);
  for (int rep = 0; rep < 10; ++rep) {
    int d = 2 + rep % 4;
    Eigen::MatrixXd m = random_spd(d, rng);
    SpdMatrix cov(m);
    SpdMatrix prec(Eigen::MatrixXd(cov.inverse()));
    Eigen::VectorXd x(d), mu(d);
    for (int i = 0; i < d; ++i) {
      x(i) = rng.normal();
      mu(i) = rng.normal();
    }
    CHECK(mvn_logpdf(x, mu, cov) ==
          doctest::Approx(mvn_logpdf_precision(x, mu, prec)).epsilon(1e-9));
  }
}

TEST_CASE("mvn samplers hit their first two moments") {
  RngStream rng(3, 0);
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 0.6, 0.6, 2.0;
  SpdMatrix cov(c);
  SpdMatrix prec(Eigen::MatrixXd(c.inverse()));
  Eigen::VectorXd mu(2);
  mu << -1.0, 2.0;
  Eigen::VectorXd lin = prec.matrix() * mu;

  const int n = 200000;
  Eigen::Vector2d s1 = Eigen::Vector2d::Zero(), s2 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d ss1 = Eigen::Matrix2d::Zero(), ss2 = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd a = mvn_sample(mu, cov, rng);
    Eigen::VectorXd b = mvn_sample_from_precision(prec, lin, rng);
    s1 += a;
    s2 += b;
    ss1 += (a - mu) * (a - mu).transpose();
    ss2 += (b - mu) * (b - mu).transpose();
  }
  CHECK((s1 / n - mu).cwiseAbs().maxCoeff() < 0.02);
  CHECK((s2 / n - mu).cwiseAbs().maxCoeff() < 0.02);
  CHECK((ss1 / n - c).cwiseAbs().maxCoeff() < 0.05);
  CHECK((ss2 / n - c).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("normal cdf and quantile invert each other") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    const double rt = normal_quantile(normal_cdf(x));
    if (x <= 6.5) {
      CHECK(rt == doctest::Approx(x).epsilon(1e-8));
    } else {
      // Above ~6.5 the cdf saturates toward 1, so the round trip is limited
      // by the spacing of doubles near 1: |error| <~ ulp(1) / pdf(x).
      const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
      CHECK(std::abs(rt - x) < 4.5e-16 / pdf);
    }
  }
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("truncated normal respects the cut and its moments") {
  RngStream rng(4, 0);
  const int n = 200000;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double x = truncated_normal_sample(0.0, 1.0, TruncationSide::kRightOfZero,
                                       rng);
    CHECK(x > 0.0);
    s += x;
  }
  // Half normal mean sqrt(2/pi).
  CHECK(std::abs(s / n - 0.7978845608) < 0.01);

  s = 0;
  for (int i = 0; i < n; ++i) {
    double x = truncated_normal_sample(1.5, 4.0, TruncationSide::kLeftOfZero,
                                       rng);
    CHECK(x < 0.0);
    s += x;
  }
  // mean - sd * phi(a)/Phi(a) with a = -mean/sd = -0.75.
  double a = -0.75;
  double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
  double expect = 1.5 - 2.0 * phi / normal_cdf(a);
  CHECK(std::abs(s / n - expect) < 0.02);
}

TEST_CASE("truncated normal survives deep tail cuts") {
  RngStream rng(5, 0);
  const int n = 50000;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double x = truncated_normal_sample(-8.0, 1.0, TruncationSide::kRightOfZero,
                                       rng);
    CHECK(x > 0.0);
    CHECK(std::isfinite(x));
    s += x;
  }
  // The cut sits at zero, 8 sd above the location, so draws hug zero from
  // the right with mean phi(8)/Q(8) - 8 (Q the upper tail mass).
  double a = 8.0;
  double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
  double expect = phi / normal_cdf(-a) - a;
  CHECK(std::abs(s / n - expect) < 0.005);

  s = 0;
  for (int i = 0; i < n; ++i) {
    double x = truncated_normal_sample(8.0, 1.0, TruncationSide::kLeftOfZero,
                                       rng);
    CHECK(x < 0.0);
    CHECK(std::isfinite(x));
    s += x;
  }
  CHECK(std::abs(s / n + expect) < 0.005);
}

TEST_CASE("gamma and inverse gamma moments") {
  RngStream rng(6, 0);
  const int n = 400000;
  double s = 0, ss = 0, si = 0, ssi = 0, slow = 0;
  for (int i = 0; i < n; ++i) {
    double g = gamma_sample(3.5, 2.0, rng);
    s += g;
    ss += g * g;
    double ig = inverse_gamma_sample(5.0, 2.0, rng);
    si += ig;
    ssi += ig * ig;
    slow += gamma_sample(0.5, 1.0, rng);
  }
  CHECK(std::abs(s / n - 7.0) < 0.05);          // mean shape*scale
  CHECK(std::abs(ss / n - s / n * s / n - 14.0) < 0.5);  // var shape*scale^2
  CHECK(std::abs(si / n - 0.5) < 0.01);         // rate/(shape-1)
  // var = rate^2 / ((shape-1)^2 (shape-2)).
  CHECK(std::abs(ssi / n - si / n * si / n - 4.0 / 48.0) < 0.01);
  CHECK(std::abs(slow / n - 0.5) < 0.02);

  CHECK_THROWS_AS(gamma_sample(0.0, 1.0, rng), Error);
  CHECK_THROWS_AS(inverse_gamma_sample(1.0, 0.0, rng), Error);
}

TEST_CASE("inverse gamma logpdf closed form") {
  // shape 3, rate 2 at x = 1.5: 2^3/Gamma(3) x^{-4} exp(-2/x).
  double expect = 3.0 * std::log(2.0) - std::lgamma(3.0) -
                  4.0 * std::log(1.5) - 2.0 / 1.5;
  CHECK(inverse_gamma_logpdf(1.5, 3.0, 2.0) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("wishart mean is df times scale") {
  RngStream rng(7, 0);
  Eigen::MatrixXd sc(2, 2);
  sc << 1.0, 0.3, 0.3, 0.5;
  SpdMatrix scale(sc);
  const int n = 100000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) acc += wishart_sample(6.0, scale, rng);
  CHECK(((acc / n) - 6.0 * sc).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("inverse wishart convention: mean is inverse scale over df-d-1") {
  RngStream rng(8, 0);
  SpdMatrix scale(Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
  const int n = 200000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) acc += inverse_wishart_sample(10.0, scale, rng);
  // df 10, d 2, scale I: mean I/7.
  CHECK(((acc / n) - Eigen::Matrix2d::Identity() / 7.0).cwiseAbs().maxCoeff() <
        0.005);
}

TEST_CASE("inverse wishart logpdf reduces to inverse gamma in one dimension") {
  Eigen::MatrixXd one(1, 1);
  for (double x : {0.3, 1.0, 2.7}) {
    for (double df : {3.0, 8.0}) {
      for (double sc : {0.5, 2.0}) {
        one(0, 0) = x;
        SpdMatrix xm(one);
        Eigen::MatrixXd sm(1, 1);
        sm(0, 0) = sc;
        double iw = inverse_wishart_logpdf(xm, df, SpdMatrix(sm));
        double ig = inverse_gamma_logpdf(x, df / 2.0, 1.0 / (2.0 * sc));
        CHECK(iw == doctest::Approx(ig).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("inverse wishart logpdf integrates against sampled draws") {
  // Sanity rather than quadrature: density should peak near the mode
  // scale^{-1}/(df+d+1) and fall off away from it.
  SpdMatrix scale(Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
  double df = 8.0;
  Eigen::Matrix2d mode = Eigen::Matrix2d::Identity() / (df + 3.0);
  double at_mode = inverse_wishart_logpdf(SpdMatrix(Eigen::MatrixXd(mode)), df,
                                          scale);
  double off1 = inverse_wishart_logpdf(
      SpdMatrix(Eigen::MatrixXd(3.0 * mode)), df, scale);
  double off2 = inverse_wishart_logpdf(
      SpdMatrix(Eigen::MatrixXd(0.2 * mode)), df, scale);
  CHECK(at_mode > off1);
  CHECK(at_mode > off2);
}

TEST_CASE("discrete lyapunov solves the fixed point") {
  RngStream rng(9, 0);
  for (int rep = 0; rep < 50; ++rep) {
    int d = 2 + rep % 2;
    Eigen::MatrixXd phi(d, d);
    do {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) phi(i, j) = rng.uniform(-0.6, 0.6);
    } while (phi.eigenvalues().cwiseAbs().maxCoeff() >= 0.98);
    Eigen::MatrixXd gamma = random_spd(d, rng, 0.2);
    Eigen::MatrixXd sigma = solve_discrete_lyapunov(phi, gamma);
    CHECK((sigma - phi * sigma * phi.transpose() - gamma).cwiseAbs().maxCoeff() <
          1e-11);
    CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() < 1e-11);
  }

  Eigen::MatrixXd unit(2, 2);
  unit << 1.0, 0.0, 0.0, 0.2;
  CHECK_THROWS_AS(solve_discrete_lyapunov(unit, Eigen::MatrixXd::Identity(2, 2)),
                  NonstationaryCoefficients);
}
