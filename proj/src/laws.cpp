#include "tailnet/laws.hpp"

#include "tailnet/special.hpp"

#include <cmath>
#include <limits>

namespace tailnet::laws {

namespace {

constexpr double kGpdXiTiny = 1e-9;
constexpr double kPi = 3.141592653589793238462643383279503;

[[noreturn]] void domain(const char* what) { throw DomainError(what); }

double gpd_cdf(double sigma, double xi, double x) {
  if (x < 0.0) domain("GPD cdf: x < 0");
  const double z = x / sigma;
  if (std::fabs(xi) < kGpdXiTiny) return -std::expm1(-z);
  const double t = xi * z;
  if (xi < 0.0 && t <= -1.0) {
    if (t < -1.0) domain("GPD cdf: x beyond upper endpoint -sigma/xi");
    return 1.0;
  }
  return -std::expm1(-std::log1p(t) / xi);
}

double gpd_pdf(double sigma, double xi, double x) {
  if (x < 0.0) domain("GPD pdf: x < 0");
  const double z = x / sigma;
  if (std::fabs(xi) < kGpdXiTiny) return std::exp(-z) / sigma;
  const double t = xi * z;
  if (t <= -1.0) {
    if (t < -1.0) domain("GPD pdf: x beyond upper endpoint -sigma/xi");
    // At the endpoint itself the density is 0 for xi in (-1,0), +inf for xi < -1.
    return (xi > -1.0) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::exp((-1.0 / xi - 1.0) * std::log1p(t)) / sigma;
}

double gpd_quantile(double sigma, double xi, double p) {
  if (std::fabs(xi) < kGpdXiTiny) return -sigma * std::log1p(-p);
  return sigma * std::expm1(-xi * std::log1p(-p)) / xi;
}

}  // namespace

void UnivariateLaw::validate() const {
  switch (family) {
    case Family::beta:
      if (!(p1 > 0.0 && p2 > 0.0)) throw ParamError("Beta requires a,b > 0");
      break;
    case Family::gpd:
      if (!(p1 > 0.0)) throw ParamError("GPD requires sigma > 0");
      if (!std::isfinite(p2)) throw ParamError("GPD requires finite xi");
      break;
    case Family::weibull:
      if (!(p1 > 0.0)) throw ParamError("Weibull requires beta > 0");
      break;
    case Family::pareto_shape:
      if (!(p1 > 0.0)) throw ParamError("ParetoShape requires theta > 0");
      break;
    case Family::normal:
      if (!(p2 > 0.0)) throw ParamError("Normal requires sd > 0");
      break;
    case Family::uniform:
      if (!(p1 < p2)) throw ParamError("Uniform requires lo < hi");
      break;
    case Family::exponential:
      if (!(p1 > 0.0)) throw ParamError("Exponential requires rate > 0");
      break;
  }
}

double law_eval(const UnivariateLaw& law, Fn kind, double x) {
  law.validate();
  if (kind == Fn::quantile && !(x > 0.0 && x < 1.0))
    domain("quantile requires p in (0,1)");
  switch (law.family) {
    case Family::beta: {
      const double a = law.p1, b = law.p2;
      switch (kind) {
        case Fn::pdf:
          if (x < 0.0 || x > 1.0) domain("Beta pdf: x outside [0,1]");
          if (x == 0.0 || x == 1.0) {
            const double edge_pow = (x == 0.0) ? a : b;
            if (edge_pow > 1.0) return 0.0;
            if (edge_pow == 1.0)
              return std::exp(-special::lbeta(a, b));
            return std::numeric_limits<double>::infinity();
          }
          return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                          special::lbeta(a, b));
        case Fn::cdf:
          if (x < 0.0 || x > 1.0) domain("Beta cdf: x outside [0,1]");
          return special::inc_beta_reg(x, a, b);
        case Fn::quantile:
          return special::inc_beta_inv(x, a, b);
      }
      break;
    }
    case Family::gpd:
      switch (kind) {
        case Fn::pdf: return gpd_pdf(law.p1, law.p2, x);
        case Fn::cdf: return gpd_cdf(law.p1, law.p2, x);
        case Fn::quantile: return gpd_quantile(law.p1, law.p2, x);
      }
      break;
    case Family::weibull: {
      const double beta = law.p1;
      switch (kind) {
        case Fn::pdf:
          if (x < 0.0) domain("Weibull pdf: x < 0");
          if (x == 0.0) return (beta > 1.0) ? 0.0
                               : (beta == 1.0 ? 1.0
                                              : std::numeric_limits<double>::infinity());
          return beta * std::pow(x, beta - 1.0) * std::exp(-std::pow(x, beta));
        case Fn::cdf:
          if (x < 0.0) domain("Weibull cdf: x < 0");
          return -std::expm1(-std::pow(x, beta));
        case Fn::quantile:
          return std::pow(-std::log1p(-x), 1.0 / beta);
      }
      break;
    }
    case Family::pareto_shape: {
      const double theta = law.p1;
      switch (kind) {
        case Fn::pdf:
          if (x < 1.0) domain("ParetoShape pdf: x < 1");
          return std::pow(x, -1.0 / theta - 1.0) / theta;
        case Fn::cdf:
          if (x < 1.0) domain("ParetoShape cdf: x < 1");
          return 1.0 - std::pow(x, -1.0 / theta);
        case Fn::quantile:
          return std::pow(1.0 - x, -theta);
      }
      break;
    }
    case Family::normal: {
      const double mu = law.p1, sd = law.p2;
      switch (kind) {
        case Fn::pdf: return special::norm_pdf((x - mu) / sd) / sd;
        case Fn::cdf: return special::norm_cdf((x - mu) / sd);
        case Fn::quantile: return mu + sd * special::norm_quantile(x);
      }
      break;
    }
    case Family::uniform: {
      const double lo = law.p1, hi = law.p2;
      switch (kind) {
        case Fn::pdf:
          if (x < lo || x > hi) domain("Uniform pdf: x outside [lo,hi]");
          return 1.0 / (hi - lo);
        case Fn::cdf:
          if (x < lo || x > hi) domain("Uniform cdf: x outside [lo,hi]");
          return (x - lo) / (hi - lo);
        case Fn::quantile:
          return lo + (hi - lo) * x;
      }
      break;
    }
    case Family::exponential: {
      const double rate = law.p1;
      switch (kind) {
        case Fn::pdf:
          if (x < 0.0) domain("Exponential pdf: x < 0");
          return rate * std::exp(-rate * x);
        case Fn::cdf:
          if (x < 0.0) domain("Exponential cdf: x < 0");
          return -std::expm1(-rate * x);
        case Fn::quantile:
          return -std::log1p(-x) / rate;
      }
      break;
    }
  }
  throw Error("unreachable law_eval branch");
}

double sample_gamma(double shape, RandomStream& rng) {
  if (!(shape > 0.0)) throw ParamError("gamma requires shape > 0");
  if (shape < 1.0) {
    // Boosting trick: G(a) = G(a+1) * U^(1/a).
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
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
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(double a, double b, RandomStream& rng) {
  const double g1 = sample_gamma(a, rng);
  const double g2 = sample_gamma(b, rng);
  return g1 / (g1 + g2);
}

VectorXd law_sample(const UnivariateLaw& law, Eigen::Index n, RandomStream& rng) {
  law.validate();
  if (n < 1) throw SizeError("law_sample requires n >= 1");
  VectorXd out(n);
  if (law.family == Family::beta) {
    for (Eigen::Index i = 0; i < n; ++i) out[i] = sample_beta(law.p1, law.p2, rng);
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = law_eval(law, Fn::quantile, rng.uniform());
  return out;
}

PairMatrix sample_bivariate_normal(double omega, Eigen::Index n, RandomStream& rng) {
  if (!(std::fabs(omega) < 1.0))
    throw ParamError("bivariate normal requires |omega| < 1");
  if (n < 1) throw SizeError("sample_bivariate_normal requires n >= 1");
  const double c = std::sqrt(1.0 - omega * omega);  // 2x2 Cholesky
  PairMatrix out(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    out(i, 0) = z1;
    out(i, 1) = omega * z1 + c * z2;
  }
  return out;
}

double sample_positive_stable_one(double a, RandomStream& rng) {
  // Kanter's representation: S = (A(U)/E)^((1-a)/a) with
  //   A(u) = [sin(a pi u)^a sin((1-a) pi u)^(1-a) / sin(pi u)]^(1/(1-a)).
  const double u = rng.uniform();
  const double e = rng.exponential();
  const double pu = kPi * u;
  const double log_A =
      (a * std::log(std::sin(a * pu)) + (1.0 - a) * std::log(std::sin((1.0 - a) * pu)) -
       std::log(std::sin(pu))) /
      (1.0 - a);
  return std::exp(((1.0 - a) / a) * (log_A - std::log(e)));
}

VectorXd sample_positive_stable(double a, Eigen::Index n, RandomStream& rng) {
  if (!(a > 0.0 && a < 1.0)) throw ParamError("positive stable requires a in (0,1)");
  if (n < 1) throw SizeError("sample_positive_stable requires n >= 1");
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = sample_positive_stable_one(a, rng);
  return out;
}

}  // namespace tailnet::laws
