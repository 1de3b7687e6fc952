#ifndef TAILNET_LAWS_HPP
#define TAILNET_LAWS_HPP

#include "tailnet/common.hpp"
#include "tailnet/random.hpp"

namespace tailnet::laws {

enum class Family { beta, gpd, weibull, pareto_shape, normal, uniform, exponential };

enum class Fn { pdf, cdf, quantile };

/// One of the univariate laws the models are built from. Parameters:
///   Beta(a,b)                a,b > 0
///   GPD(sigma,xi)            scale sigma > 0, shape xi in R; support [0, -sigma/xi) for xi<0
///   Weibull(beta)            F(x) = 1 - exp(-x^beta), beta > 0
///   ParetoShape(theta)       F(x) = 1 - x^(-1/theta), x >= 1, theta > 0
///   Normal(mean,sd), Uniform(lo,hi), Exponential(rate)
struct UnivariateLaw {
  Family family;
  double p1 = 0.0;
  double p2 = 0.0;

  static UnivariateLaw Beta(double a, double b) { return {Family::beta, a, b}; }
  static UnivariateLaw Gpd(double sigma, double xi) { return {Family::gpd, sigma, xi}; }
  static UnivariateLaw Weibull(double beta) { return {Family::weibull, beta, 0.0}; }
  static UnivariateLaw ParetoShape(double theta) {
    return {Family::pareto_shape, theta, 0.0};
  }
  static UnivariateLaw Normal(double mean, double sd) {
    return {Family::normal, mean, sd};
  }
  static UnivariateLaw Uniform(double lo, double hi) {
    return {Family::uniform, lo, hi};
  }
  static UnivariateLaw Exponential(double rate) {
    return {Family::exponential, rate, 0.0};
  }

  void validate() const;  // throws ParamError
};

/// Closed-form pdf/cdf/quantile. GPD switches to the exponential-limit branch
/// when |xi| < 1e-9; all transforms use log1p/expm1 forms near that boundary.
double law_eval(const UnivariateLaw& law, Fn kind, double x);

/// n i.i.d. draws. Inverse-cdf for GPD/Weibull/ParetoShape/Uniform/Exponential;
/// Beta via two Marsaglia-Tsang gamma draws.
VectorXd law_sample(const UnivariateLaw& law, Eigen::Index n, RandomStream& rng);

double sample_gamma(double shape, RandomStream& rng);
double sample_beta(double a, double b, RandomStream& rng);

/// Rows are i.i.d. standard bivariate normal with correlation omega (|omega|<1).
PairMatrix sample_bivariate_normal(double omega, Eigen::Index n, RandomStream& rng);

/// Positive a-stable draws (0<a<1) with Laplace transform exp(-t^a),
/// Kanter/Chambers-Mallows-Stuck construction.
VectorXd sample_positive_stable(double a, Eigen::Index n, RandomStream& rng);

double sample_positive_stable_one(double a, RandomStream& rng);

}  // namespace tailnet::laws

#endif  // TAILNET_LAWS_HPP
