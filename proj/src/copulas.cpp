#include "tailnet/copulas.hpp"

#include "tailnet/laws.hpp"
#include "tailnet/quadrature.hpp"
#include "tailnet/special.hpp"

#include <cmath>

namespace tailnet::copulas {

namespace {

void check_interior(double u1, double u2) {
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0))
    throw DomainError("copula density requires (u1,u2) in the open unit square");
}

void check_closed(double u1, double u2) {
  if (!(u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0))
    throw DomainError("copula cdf requires (u1,u2) in the unit square");
}

double clamp_open(double u) {
  constexpr double lo = 1e-15;
  return std::min(std::max(u, lo), 1.0 - 1e-15);
}

double gaussian_density(double rho, double u1, double u2) {
  const double x = special::norm_quantile(u1);
  const double y = special::norm_quantile(u2);
  const double r2 = 1.0 - rho * rho;
  return std::exp((2.0 * rho * x * y - rho * rho * (x * x + y * y)) / (2.0 * r2)) /
         std::sqrt(r2);
}

double logistic_density(double alpha_l, double u1, double u2) {
  if (alpha_l == 1.0) return 1.0;
  const double theta = 1.0 / alpha_l;
  const double x = -std::log(u1);
  const double y = -std::log(u2);
  const double s = std::pow(x, theta) + std::pow(y, theta);
  const double s1t = std::pow(s, 1.0 / theta);
  return std::exp(-s1t) * std::pow(x * y, theta - 1.0) *
         std::pow(s, 1.0 / theta - 2.0) * (s1t + theta - 1.0) / (u1 * u2);
}

double frank_density(double beta, double u1, double u2) {
  const double em = -std::expm1(-beta);  // 1 - e^{-beta}
  const double e1 = -std::expm1(-beta * u1);
  const double e2 = -std::expm1(-beta * u2);
  const double denom = em - e1 * e2;
  return beta * em * std::exp(-beta * (u1 + u2)) / (denom * denom);
}

double joe_density(double alpha, double u1, double u2) {
  const double xb = std::pow(1.0 - u1, alpha);
  const double yb = std::pow(1.0 - u2, alpha);
  const double t = xb + yb - xb * yb;
  return std::pow(1.0 - u1, alpha - 1.0) * std::pow(1.0 - u2, alpha - 1.0) *
         std::pow(t, 1.0 / alpha - 2.0) * (t + alpha - 1.0);
}

double logistic_cdf(double alpha_l, double u1, double u2) {
  if (alpha_l == 1.0) return u1 * u2;
  const double theta = 1.0 / alpha_l;
  const double x = -std::log(u1);
  const double y = -std::log(u2);
  return std::exp(-std::pow(std::pow(x, theta) + std::pow(y, theta), 1.0 / theta));
}

double frank_cdf(double beta, double u1, double u2) {
  const double em = std::expm1(-beta);
  const double e1 = std::expm1(-beta * u1);
  const double e2 = std::expm1(-beta * u2);
  return -std::log1p(e1 * e2 / em) / beta;
}

double joe_cdf(double alpha, double u1, double u2) {
  const double xb = std::pow(1.0 - u1, alpha);
  const double yb = std::pow(1.0 - u2, alpha);
  return 1.0 - std::pow(xb + yb - xb * yb, 1.0 / alpha);
}

}  // namespace

void ClosedCopula::validate() const {
  switch (family) {
    case Family::gaussian:
      if (!(std::fabs(param) < 1.0)) throw ParamError("Gaussian copula: |rho| < 1");
      break;
    case Family::logistic:
      if (!(param > 0.0 && param <= 1.0))
        throw ParamError("Logistic copula: alpha_L in (0,1]");
      break;
    case Family::frank:
      if (!(param != 0.0 && std::isfinite(param)))
        throw ParamError("Frank copula: beta_F != 0");
      break;
    case Family::joe:
      if (!(param >= 1.0)) throw ParamError("Joe copula: alpha_J >= 1");
      break;
  }
}

double copula_density(const ClosedCopula& c, double u1, double u2) {
  c.validate();
  check_interior(u1, u2);
  switch (c.family) {
    case Family::gaussian: return gaussian_density(c.param, u1, u2);
    case Family::logistic: return logistic_density(c.param, u1, u2);
    case Family::frank: return frank_density(c.param, u1, u2);
    case Family::joe: return joe_density(c.param, u1, u2);
  }
  throw Error("unreachable");
}

double bivariate_normal_cdf(double x, double y, double rho) {
  if (!(std::fabs(rho) < 1.0)) throw ParamError("bivariate_normal_cdf: |rho| < 1");
  // Phi2(x,y) = int_0^{Phi(x)} Phi((y - rho Phi^{-1}(s)) / sqrt(1-rho^2)) ds
  const double px = special::norm_cdf(x);
  if (px <= 0.0) return 0.0;
  const double denom = std::sqrt(1.0 - rho * rho);
  quad::Options opt;
  opt.rel_tol = 1e-11;
  return quad::gk_adaptive(
      [y, rho, denom](double s) {
        return special::norm_cdf((y - rho * special::norm_quantile(s)) / denom);
      },
      0.0, px, opt);
}

double copula_cdf(const ClosedCopula& c, double u1, double u2) {
  c.validate();
  check_closed(u1, u2);
  if (u1 == 0.0 || u2 == 0.0) return 0.0;
  if (u1 == 1.0) return u2;
  if (u2 == 1.0) return u1;
  switch (c.family) {
    case Family::gaussian:
      return bivariate_normal_cdf(special::norm_quantile(u1),
                                  special::norm_quantile(u2), c.param);
    case Family::logistic: return logistic_cdf(c.param, u1, u2);
    case Family::frank: return frank_cdf(c.param, u1, u2);
    case Family::joe: return joe_cdf(c.param, u1, u2);
  }
  throw Error("unreachable");
}

double sample_sibuya(double alpha, RandomStream& rng) {
  if (alpha >= 1.0) return 1.0;
  const double u = rng.uniform();
  if (u <= alpha) return 1.0;
  const double ginv =
      std::pow((1.0 - u) * std::tgamma(1.0 - alpha), -1.0 / alpha);
  const double fginv = std::floor(ginv);
  if (ginv > 1e16) return fginv;
  const double lb = special::lbeta(fginv, 1.0 - alpha);
  if (1.0 - u < std::exp(-std::log(fginv) - lb)) return std::ceil(ginv);
  return fginv;
}

double sample_log_series(double p, RandomStream& rng) {
  // Kemp (1981) LK algorithm.
  const double h = std::log1p(-p);
  const double u2 = rng.uniform();
  if (u2 > p) return 1.0;
  const double u1 = rng.uniform();
  const double q = -std::expm1(u1 * h);
  if (u2 < q * q) {
    const double k = std::floor(1.0 + std::log(u2) / std::log(q));
    return (k >= 1.0) ? k : 1.0;
  }
  return (u2 > q) ? 1.0 : 2.0;
}

PairMatrix copula_sample(const ClosedCopula& c, Eigen::Index n, RandomStream& rng) {
  c.validate();
  if (n < 1) throw SizeError("copula_sample requires n >= 1");
  PairMatrix out(n, 2);
  switch (c.family) {
    case Family::gaussian: {
      const PairMatrix z = laws::sample_bivariate_normal(c.param, n, rng);
      for (Eigen::Index i = 0; i < n; ++i) {
        out(i, 0) = clamp_open(special::norm_cdf(z(i, 0)));
        out(i, 1) = clamp_open(special::norm_cdf(z(i, 1)));
      }
      return out;
    }
    case Family::logistic: {
      const double a = c.param;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (a == 1.0) {
          out(i, 0) = rng.uniform();
          out(i, 1) = rng.uniform();
          continue;
        }
        const double s = laws::sample_positive_stable_one(a, rng);
        out(i, 0) = clamp_open(std::exp(-std::pow(rng.exponential() / s, a)));
        out(i, 1) = clamp_open(std::exp(-std::pow(rng.exponential() / s, a)));
      }
      return out;
    }
    case Family::joe: {
      const double alpha = c.param;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = sample_sibuya(1.0 / alpha, rng);
        for (int j = 0; j < 2; ++j) {
          const double t = rng.exponential() / m;
          // psi(t) = 1 - (1 - e^{-t})^{1/alpha}
          out(i, j) = clamp_open(1.0 - std::pow(-std::expm1(-t), 1.0 / alpha));
        }
      }
      return out;
    }
    case Family::frank: {
      const double beta = std::fabs(c.param);
      const double p = -std::expm1(-beta);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = sample_log_series(p, rng);
        for (int j = 0; j < 2; ++j) {
          const double t = rng.exponential() / m;
          // psi(t) = -log(1 - (1-e^{-beta}) e^{-t}) / beta
          out(i, j) = clamp_open(-std::log1p(-p * std::exp(-t)) / beta);
        }
        // Frank with negative parameter is the 90-degree rotation.
        if (c.param < 0.0) out(i, 1) = 1.0 - out(i, 1);
      }
      return out;
    }
  }
  throw Error("unreachable");
}

double gaussian_residual_eta(double rho) {
  if (!(std::fabs(rho) < 1.0)) throw ParamError("gaussian_residual_eta: |rho| < 1");
  return 0.5 * (1.0 + rho);
}

}  // namespace tailnet::copulas
