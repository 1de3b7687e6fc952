#ifndef TAILNET_COPULAS_HPP
#define TAILNET_COPULAS_HPP

#include "tailnet/common.hpp"
#include "tailnet/random.hpp"

namespace tailnet::copulas {

enum class Family { gaussian, logistic, frank, joe };

/// Closed-form copula families used as WCM components and misspecification
/// generators. Parameter ranges: Gaussian rho in (-1,1); Logistic alpha_L in
/// (0,1] (alpha_L = 1 is independence); Frank beta_F != 0; Joe alpha_J >= 1
/// (alpha_J = 1 is independence).
struct ClosedCopula {
  Family family;
  double param;

  static ClosedCopula Gaussian(double rho) { return {Family::gaussian, rho}; }
  static ClosedCopula Logistic(double alpha_l) { return {Family::logistic, alpha_l}; }
  static ClosedCopula Frank(double beta_f) { return {Family::frank, beta_f}; }
  static ClosedCopula Joe(double alpha_j) { return {Family::joe, alpha_j}; }

  void validate() const;
};

/// Copula density c(u1,u2) on the open square.
double copula_density(const ClosedCopula& c, double u1, double u2);

/// Copula cdf C(u1,u2) on the closed square.
double copula_cdf(const ClosedCopula& c, double u1, double u2);

/// n i.i.d. pairs with uniform margins. Gaussian via the bivariate normal;
/// Logistic/Joe/Frank via Marshall-Olkin frailties (positive stable, Sibuya,
/// logarithmic-series respectively).
PairMatrix copula_sample(const ClosedCopula& c, Eigen::Index n, RandomStream& rng);

/// Residual tail dependence coefficient of a bivariate Gaussian copula,
/// eta = (1+rho)/2.
double gaussian_residual_eta(double rho);

/// Bivariate standard normal cdf with correlation rho, via one-dimensional
/// quadrature in probability space.
double bivariate_normal_cdf(double x, double y, double rho);

/// Sibuya(alpha) frailty draw, alpha in (0,1].
double sample_sibuya(double alpha, RandomStream& rng);

/// Logarithmic-series draw with parameter p in (0,1), Kemp's LK algorithm.
double sample_log_series(double p, RandomStream& rng);

}  // namespace tailnet::copulas

#endif  // TAILNET_COPULAS_HPP
