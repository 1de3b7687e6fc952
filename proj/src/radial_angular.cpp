#include "tailnet/radial_angular.hpp"

#include "tailnet/copulas.hpp"
#include "tailnet/quadrature.hpp"
#include "tailnet/special.hpp"
#include "tailnet/tail_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstring>
#include <mutex>
#include <string>
#include <unordered_map>

namespace tailnet::rs {

namespace {

constexpr double kXiTiny = 1e-9;

// GPD(1, xi) closed forms, clamped at the support edges (no throwing: these
// appear inside quadrature integrands that probe the edges).
double gpd_cdf1(double xi, double x) {
  if (x <= 0.0) return 0.0;
  if (std::fabs(xi) < kXiTiny) return -std::expm1(-x);
  const double t = xi * x;
  if (t <= -1.0) return 1.0;
  return -std::expm1(-std::log1p(t) / xi);
}

double gpd_pdf1(double xi, double x) {
  if (x < 0.0) return 0.0;
  if (std::fabs(xi) < kXiTiny) return std::exp(-x);
  const double t = xi * x;
  if (t <= -1.0) return 0.0;
  return std::exp((-1.0 / xi - 1.0) * std::log1p(t));
}

double gpd_quantile1(double xi, double p) {
  if (std::fabs(xi) < kXiTiny) return -std::log1p(-p);
  return std::expm1(-xi * std::log1p(-p)) / xi;
}

double weibull_cdf(double beta, double x) {
  return (x <= 0.0) ? 0.0 : -std::expm1(-std::pow(x, beta));
}

double weibull_pdf(double beta, double x) {
  if (x <= 0.0) return 0.0;
  return beta * std::pow(x, beta - 1.0) * std::exp(-std::pow(x, beta));
}

double gpd_upper(double xi) {
  return (xi < -kXiTiny) ? -1.0 / xi : std::numeric_limits<double>::infinity();
}

struct HwParams {
  double a, b, omega;  // radial tail 1/delta, angular tail 1/(1-delta)
};

HwParams hw_params(const RsModel& m) {
  const double delta = m.theta[0];
  return {1.0 / delta, 1.0 / (1.0 - delta), m.theta[1]};
}

// Closed-form HW marginal: the Pareto-product integral is elementary.
double hw_marginal_cdf(const HwParams& p, double z) {
  if (z <= 1.0) return 0.0;
  const double za = std::exp(-p.a * std::log(z));
  const double zb = std::exp(-p.b * std::log(z));
  if (std::fabs(p.b - p.a) < 1e-8)
    return 1.0 - za - p.a * za * std::log(z);
  return 1.0 - za - (p.a / (p.b - p.a)) * (za - zb);
}

double hw_marginal_pdf(const HwParams& p, double z) {
  if (z <= 1.0) return 0.0;
  if (std::fabs(p.b - p.a) < 1e-8)
    return p.a * p.a * std::exp(-(p.a + 1.0) * std::log(z)) * std::log(z);
  return (p.a * p.b / (p.b - p.a)) *
         (std::exp(-(p.a + 1.0) * std::log(z)) - std::exp(-(p.b + 1.0) * std::log(z)));
}

double hw_marginal_quantile(const HwParams& p, double prob) {
  // Bracket then Newton; the cdf is smooth and strictly increasing on (1,inf).
  double lo = 1.0;
  double hi = 2.0;
  while (hw_marginal_cdf(p, hi) < prob) {
    hi *= 4.0;
    if (hi > 1e300) return hi;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = hw_marginal_cdf(p, z) - prob;
    if (std::fabs(f) < 1e-13) break;
    if (f > 0.0) hi = z; else lo = z;
    const double d = hw_marginal_pdf(p, z);
    double next = (d > 0.0) ? z - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    z = next;
  }
  return z;
}

// Gaussian copula density evaluated from normal scores.
double gauss_copula_density_scores(double x, double y, double rho) {
  const double r2 = 1.0 - rho * rho;
  return std::exp((2.0 * rho * x * y - rho * rho * (x * x + y * y)) / (2.0 * r2)) /
         std::sqrt(r2);
}

}  // namespace

RsModel RsModel::W(double alpha, double xi) {
  RsModel m{ModelId::w, VectorXd(2)};
  m.theta << alpha, xi;
  return m;
}
RsModel RsModel::Hw(double delta, double omega) {
  RsModel m{ModelId::hw, VectorXd(2)};
  m.theta << delta, omega;
  return m;
}
RsModel RsModel::E1(double alpha, double beta, double mu) {
  RsModel m{ModelId::e1, VectorXd(3)};
  m.theta << alpha, beta, mu;
  return m;
}
RsModel RsModel::E2(double alpha, double xi) {
  RsModel m{ModelId::e2, VectorXd(2)};
  m.theta << alpha, xi;
  return m;
}

void RsModel::validate() const {
  switch (id) {
    case ModelId::w:
    case ModelId::e2:
      if (theta.size() != 2) throw ParamError("W/E2 need (alpha, xi)");
      if (!(theta[0] > 0.0)) throw ParamError("alpha must be > 0");
      if (!std::isfinite(theta[1])) throw ParamError("xi must be finite");
      break;
    case ModelId::hw:
      if (theta.size() != 2) throw ParamError("HW needs (delta, omega)");
      if (!(theta[0] > 0.0 && theta[0] < 1.0)) throw ParamError("delta in (0,1)");
      if (!(std::fabs(theta[1]) < 1.0)) throw ParamError("|omega| < 1");
      break;
    case ModelId::e1:
      if (theta.size() != 3) throw ParamError("E1 needs (alpha, beta, mu)");
      if (!(theta[0] > 0.0)) throw ParamError("alpha must be > 0");
      if (!(theta[1] > 0.0)) throw ParamError("beta must be > 0 (beta = 0 degenerate)");
      if (!(theta[2] >= 0.5)) throw ParamError("mu must be >= 1/2");
      break;
  }
}

const char* RsModel::name() const {
  switch (id) {
    case ModelId::w: return "w";
    case ModelId::hw: return "hw";
    case ModelId::e1: return "e1";
    case ModelId::e2: return "e2";
  }
  return "?";
}

BivariateSample rs_simulate(const RsModel& m, Eigen::Index n, RandomStream& rng) {
  m.validate();
  if (n < 1) throw SizeError("rs_simulate requires n >= 1");
  BivariateSample out;
  out.scale = Scale::raw;
  out.values.resize(n, 2);
  switch (m.id) {
    case ModelId::w: {
      const double alpha = m.theta[0], xi = m.theta[1];
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = laws::sample_beta(alpha, alpha, rng);
        const double mx = std::max(v, 1.0 - v);
        const double r = gpd_quantile1(xi, rng.uniform());
        out.values(i, 0) = r * v / mx;
        out.values(i, 1) = r * (1.0 - v) / mx;
      }
      break;
    }
    case ModelId::hw: {
      const double delta = m.theta[0], omega = m.theta[1];
      const double c = std::sqrt(1.0 - omega * omega);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = std::pow(rng.uniform(), -delta);
        const double n1 = rng.normal();
        const double n2 = omega * n1 + c * rng.normal();
        out.values(i, 0) = r * std::pow(special::norm_cdf(-n1), -(1.0 - delta));
        out.values(i, 1) = r * std::pow(special::norm_cdf(-n2), -(1.0 - delta));
      }
      break;
    }
    case ModelId::e1: {
      const double alpha = m.theta[0], beta = m.theta[1], mu = m.theta[2];
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = laws::sample_beta(alpha, alpha, rng);
        const double nu = mu * std::max(v, 1.0 - v) + (1.0 - mu) * std::min(v, 1.0 - v);
        const double r = std::pow(-std::log(rng.uniform()), 1.0 / beta);
        out.values(i, 0) = r * v / nu;
        out.values(i, 1) = r * (1.0 - v) / nu;
      }
      break;
    }
    case ModelId::e2: {
      const double alpha = m.theta[0], xi = m.theta[1];
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = gpd_quantile1(xi, rng.uniform());
        out.values(i, 0) = r * laws::sample_beta(alpha, alpha, rng);
        out.values(i, 1) = r * laws::sample_beta(alpha, alpha, rng);
      }
      break;
    }
  }
  return out;
}

double beta_expectation(double alpha, const std::function<double(double)>& g,
                        std::vector<double> breaks_v, double rel_tol) {
  if (!(alpha > 0.0)) throw ParamError("beta_expectation requires alpha > 0");
  const double lb = special::lbeta(alpha, alpha);
  quad::Options opt;
  opt.rel_tol = rel_tol;

  if (alpha >= 1.0) {
    // Bounded density: integrate directly in v.
    std::vector<double> brk{0.0, 0.5, 1.0};
    for (double v : breaks_v)
      if (v > 0.0 && v < 1.0) brk.push_back(v);
    std::sort(brk.begin(), brk.end());
    return quad::gk_segments(
        [&](double v) {
          return g(v) * std::exp((alpha - 1.0) * (std::log(v) + std::log1p(-v)) - lb);
        },
        brk, opt);
  }

  // alpha < 1: substitute v = s^(1/alpha) on the left half (and mirrored on
  // the right) so the endpoint singularities integrate exactly.
  const double s_hi = std::pow(0.5, alpha);
  auto transformed = [&](bool left) {
    std::vector<double> brk{0.0, s_hi};
    for (double v : breaks_v) {
      if (left && v > 0.0 && v < 0.5) brk.push_back(std::pow(v, alpha));
      if (!left && v > 0.5 && v < 1.0) brk.push_back(std::pow(1.0 - v, alpha));
    }
    std::sort(brk.begin(), brk.end());
    return quad::gk_segments(
        [&](double s) {
          const double v = std::pow(s, 1.0 / alpha);
          const double x = left ? v : 1.0 - v;
          return g(x) * std::exp((alpha - 1.0) * std::log1p(-v) - lb) / alpha;
        },
        brk, opt);
  };
  return transformed(true) + transformed(false);
}

namespace {

// Symmetric Beta(alpha,alpha) density evaluated from the coordinate pair so
// that swapping (z1,z2) reproduces bit-identical values.
double beta_pdf_pair(double alpha, double va, double vb, double lb) {
  return std::exp((alpha - 1.0) * (std::log(va) + std::log(vb)) - lb);
}

double joint_density_w(const RsModel& m, double z1, double z2) {
  const double alpha = m.theta[0], xi = m.theta[1];
  if (!(z1 > 0.0 && z2 > 0.0)) throw DomainError("Model W support is z > 0");
  const double mx = std::max(z1, z2);
  if (mx >= gpd_upper(xi)) throw DomainError("Model W: max(z) beyond radial endpoint");
  const double s = z1 + z2;
  const double lb = special::lbeta(alpha, alpha);
  return beta_pdf_pair(alpha, z1 / s, z2 / s, lb) * gpd_pdf1(xi, mx) * mx / (s * s);
}

double joint_density_e1(const RsModel& m, double z1, double z2) {
  const double alpha = m.theta[0], beta = m.theta[1], mu = m.theta[2];
  if (!(z1 > 0.0 && z2 > 0.0)) throw DomainError("Model E1 support is z > 0");
  const double s = z1 + z2;
  const double nu = (mu * std::max(z1, z2) + (1.0 - mu) * std::min(z1, z2)) / s;
  const double lb = special::lbeta(alpha, alpha);
  return beta_pdf_pair(alpha, z1 / s, z2 / s, lb) * weibull_pdf(beta, nu * s) * nu / s;
}

double joint_density_hw(const RsModel& m, double z1, double z2) {
  const HwParams p = hw_params(m);
  if (!(z1 > 1.0 && z2 > 1.0)) throw DomainError("Model HW support is z > 1");
  const double delta = m.theta[0];
  const double zmin = std::min(z1, z2);
  const double p_hi = 1.0 - std::pow(zmin, -p.a);
  if (p_hi <= 0.0) return 0.0;
  quad::Options opt;
  opt.rel_tol = 1e-8;
  // Integrate over the radial probability: r = (1-q)^(-delta).
  const auto integrand = [&](double q) {
    const double r = std::pow(1.0 - q, -delta);
    const double v1 = z1 / r, v2 = z2 / r;
    const double s1 = std::pow(v1, -p.b), s2 = std::pow(v2, -p.b);
    if (s1 >= 1.0 || s2 >= 1.0 || s1 <= 0.0 || s2 <= 0.0) return 0.0;
    const double x1 = -special::norm_quantile(s1);
    const double x2 = -special::norm_quantile(s2);
    const double cop = gauss_copula_density_scores(x1, x2, p.omega);
    const double fv1 = p.b * s1 / v1;
    const double fv2 = p.b * s2 / v2;
    return cop * fv1 * fv2 / (r * r);
  };
  if (p.omega <= 0.0) return quad::gk_adaptive(integrand, 0.0, p_hi, opt);
  // For omega > 0 the Gaussian copula density diverges like
  // (p_hi - q)^(-2 omega/(1+omega)) at the endpoint when z1 ~ z2; the power
  // substitution q = p_hi - y^k flattens exactly that exponent.
  const double c = 2.0 * p.omega / (1.0 + p.omega);
  const double k = std::min(1.0 / (1.0 - c), 399.0);
  const double y_hi = std::pow(p_hi, 1.0 / k);
  return quad::gk_adaptive(
      [&](double y) {
        const double q = p_hi - std::pow(y, k);
        if (!(q > 0.0 && q < p_hi)) return 0.0;
        const double g = integrand(q);
        if (g <= 0.0) return 0.0;
        return std::exp(std::log(g) + std::log(k) + (k - 1.0) * std::log(y));
      },
      0.0, y_hi, opt);
}

double joint_density_e2(const RsModel& m, double z1, double z2) {
  const double alpha = m.theta[0], xi = m.theta[1];
  if (!(z1 > 0.0 && z2 > 0.0)) throw DomainError("Model E2 support is z > 0");
  const double zmax = std::max(z1, z2);
  if (zmax >= gpd_upper(xi)) throw DomainError("Model E2: max(z) beyond radial endpoint");
  const double p_min = gpd_cdf1(xi, zmax);
  const double span = 1.0 - p_min;
  const double lb = special::lbeta(alpha, alpha);
  quad::Options opt;
  opt.rel_tol = 1e-8;
  // p = p_min + y^t tames the Beta endpoint singularity at r = max(z). Near
  // the diagonal both angular factors hit the endpoint together, so the
  // worst-case exponent is 2(alpha-1); t = 1/(2 alpha - 1) flattens it when
  // that is admissible (the density itself is infinite on the diagonal for
  // alpha < 1/2). The integrand is assembled in log space to avoid overflow
  // of the paired singular factors.
  const double t = (alpha > 0.55) ? std::min(1.0 / (2.0 * alpha - 1.0), 399.0)
                                  : 1.0 / alpha;
  const double y_hi = std::pow(span, 1.0 / t);
  const auto integrand = [&](double y) {
    const double p = p_min + std::pow(y, t);
    if (p >= 1.0) return 0.0;
    const double r = gpd_quantile1(xi, p);
    const double v1 = z1 / r, v2 = z2 / r;
    if (v1 >= 1.0 || v2 >= 1.0) return 0.0;
    const double log_beta_part =
        (alpha - 1.0) * ((std::log(v1) + std::log1p(-v1)) +
                         (std::log(v2) + std::log1p(-v2))) - 2.0 * lb;
    const double log_jac = (t - 1.0) * std::log(y) + std::log(t);
    const double val = std::exp(log_beta_part + log_jac) / (r * r);
    return std::isfinite(val) ? val : 0.0;
  };
  return quad::gk_adaptive(integrand, 0.0, y_hi, opt);
}

// The angular mixing integrands develop a boundary layer at v ~ z (where the
// scaled radial argument crosses its own scale); resolve it explicitly.
void add_layer_breaks(double z, std::vector<double>& brk) {
  for (double k : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const double v = z * k;
    if (v > 0.0 && v < 0.5) brk.push_back(v);
  }
}

// Marginal cdf/pdf of Z1 by mixing over the angular law.
double marginal_w(const RsModel& m, laws::Fn kind, double z) {
  const double alpha = m.theta[0], xi = m.theta[1];
  if (z <= 0.0) return 0.0;
  const double rmax = gpd_upper(xi);
  std::vector<double> brk;
  if (std::isfinite(rmax) && z < rmax) brk.push_back(z / (z + rmax));
  add_layer_breaks(z, brk);
  auto h = [](double v) { return std::max(v, 1.0 - v) / v; };
  if (kind == laws::Fn::cdf)
    return beta_expectation(alpha, [&](double v) { return gpd_cdf1(xi, z * h(v)); },
                            brk, 1e-9);
  return beta_expectation(alpha,
                          [&](double v) {
                            const double hv = h(v);
                            return gpd_pdf1(xi, z * hv) * hv;
                          },
                          brk, 1e-9);
}

double marginal_e1(const RsModel& m, laws::Fn kind, double z) {
  const double alpha = m.theta[0], beta = m.theta[1], mu = m.theta[2];
  if (z <= 0.0) return 0.0;
  std::vector<double> brk;
  add_layer_breaks(z, brk);
  auto h = [mu](double v) {
    return (mu * std::max(v, 1.0 - v) + (1.0 - mu) * std::min(v, 1.0 - v)) / v;
  };
  if (kind == laws::Fn::cdf)
    return beta_expectation(alpha, [&](double v) { return weibull_cdf(beta, z * h(v)); },
                            brk, 1e-9);
  return beta_expectation(alpha,
                          [&](double v) {
                            const double hv = h(v);
                            return weibull_pdf(beta, z * hv) * hv;
                          },
                          brk, 1e-9);
}

double marginal_e2(const RsModel& m, laws::Fn kind, double z) {
  const double alpha = m.theta[0], xi = m.theta[1];
  if (z <= 0.0) return 0.0;
  const double rmax = gpd_upper(xi);
  std::vector<double> brk;
  if (std::isfinite(rmax) && z < rmax) brk.push_back(z / rmax);
  add_layer_breaks(z, brk);
  if (kind == laws::Fn::cdf)
    return beta_expectation(alpha, [&](double v) { return gpd_cdf1(xi, z / v); }, brk,
                            1e-9);
  return beta_expectation(alpha, [&](double v) { return gpd_pdf1(xi, z / v) / v; },
                          brk, 1e-9);
}

double marginal_exact_impl(const RsModel& m, laws::Fn kind, double z) {
  switch (m.id) {
    case ModelId::w: return marginal_w(m, kind, z);
    case ModelId::e1: return marginal_e1(m, kind, z);
    case ModelId::e2: return marginal_e2(m, kind, z);
    case ModelId::hw: {
      const HwParams p = hw_params(m);
      return (kind == laws::Fn::cdf) ? hw_marginal_cdf(p, z) : hw_marginal_pdf(p, z);
    }
  }
  throw Error("unreachable");
}

double quantile_exact_by_bisection(const RsModel& m, double prob, double z_scale) {
  double lo = 0.0;
  double hi = std::max(z_scale, 1e-6);
  if (m.id == ModelId::hw) lo = 1.0;
  while (marginal_exact_impl(m, laws::Fn::cdf, hi) < prob) {
    hi *= 4.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (marginal_exact_impl(m, laws::Fn::cdf, mid) < prob) lo = mid; else hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double rs_joint_density(const RsModel& m, double z1, double z2) {
  m.validate();
  switch (m.id) {
    case ModelId::w: return joint_density_w(m, z1, z2);
    case ModelId::e1: return joint_density_e1(m, z1, z2);
    case ModelId::hw: return joint_density_hw(m, z1, z2);
    case ModelId::e2: return joint_density_e2(m, z1, z2);
  }
  throw Error("unreachable");
}

double rs_marginal_exact(const RsModel& m, laws::Fn kind, double x) {
  m.validate();
  if (kind == laws::Fn::quantile) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("quantile requires p in (0,1)");
    const double scale = (m.id == ModelId::hw) ? 2.0 : 1.0;
    return quantile_exact_by_bisection(m, x, scale);
  }
  return marginal_exact_impl(m, kind, x);
}

MarginalCache::MarginalCache(const RsModel& m, int grid_points) : model_(m) {
  model_.validate();
  if (m.id == ModelId::hw) {
    closed_form_ = true;
    return;
  }
  const double p_lo = 1e-9, p_hi = 1.0 - 1e-9;
  const double q_lo = quantile_exact_by_bisection(m, p_lo, 1e-3);
  const double q_mid = quantile_exact_by_bisection(m, 0.9, 1.0);
  const double q_hi = quantile_exact_by_bisection(m, p_hi, std::max(1.0, 2.0 * q_mid));
  z_lo_ = q_lo;
  z_hi_ = q_hi;

  // Half the nodes linear over the body, half geometric over the tail.
  const int n = std::max(grid_points, 64);
  const int n_body = n / 2;
  std::vector<double> zs;
  zs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n_body; ++i)
    zs.push_back(q_lo + (q_mid - q_lo) * i / static_cast<double>(n_body));
  const double ratio = q_hi / q_mid;
  for (int i = 0; i <= n - n_body; ++i)
    zs.push_back(q_mid * std::pow(ratio, i / static_cast<double>(n - n_body)));
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  const auto sz = static_cast<Eigen::Index>(zs.size());
  VectorXd x(sz), cdf_v(sz);
  pdf_x_ = VectorXd(sz);
  pdf_y_ = VectorXd(sz);
  double running = 0.0;
  for (Eigen::Index i = 0; i < sz; ++i) {
    x[i] = zs[static_cast<std::size_t>(i)];
    running = std::max(running, marginal_exact_impl(model_, laws::Fn::cdf, x[i]));
    cdf_v[i] = running;
    pdf_x_[i] = x[i];
    pdf_y_[i] = marginal_exact_impl(model_, laws::Fn::pdf, x[i]);
  }
  cdf_interp_ = interp::MonotoneCubic(x, cdf_v);
  // Centered finite-difference slopes for the (non-monotone) pdf table.
  pdf_slope_ = VectorXd(sz);
  for (Eigen::Index i = 0; i < sz; ++i) {
    const Eigen::Index l = std::max<Eigen::Index>(i - 1, 0);
    const Eigen::Index r = std::min<Eigen::Index>(i + 1, sz - 1);
    pdf_slope_[i] = (pdf_y_[r] - pdf_y_[l]) / (pdf_x_[r] - pdf_x_[l]);
  }
}

double MarginalCache::cdf(double z) const {
  if (closed_form_) return hw_marginal_cdf(hw_params(model_), z);
  return cdf_interp_(z);
}

double MarginalCache::pdf(double z) const {
  if (closed_form_) return hw_marginal_pdf(hw_params(model_), z);
  if (z < pdf_x_[0] || z > pdf_x_[pdf_x_.size() - 1])
    return marginal_exact_impl(model_, laws::Fn::pdf, z);
  const auto* begin = pdf_x_.data();
  const auto* end = begin + pdf_x_.size();
  Eigen::Index i = std::upper_bound(begin, end, z) - begin - 1;
  i = std::clamp<Eigen::Index>(i, 0, pdf_x_.size() - 2);
  const double h = pdf_x_[i + 1] - pdf_x_[i];
  const double t = (z - pdf_x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double val = (2 * t3 - 3 * t2 + 1) * pdf_y_[i] + (t3 - 2 * t2 + t) * h * pdf_slope_[i] +
                     (-2 * t3 + 3 * t2) * pdf_y_[i + 1] + (t3 - t2) * h * pdf_slope_[i + 1];
  return std::max(val, 0.0);
}

double MarginalCache::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile requires p in (0,1)");
  if (closed_form_) return hw_marginal_quantile(hw_params(model_), p);
  return cdf_interp_.inverse(p, 1e-10);
}

namespace {

std::string cache_key(const RsModel& m) {
  std::string key(1, static_cast<char>(m.id));
  key.resize(1 + sizeof(double) * static_cast<std::size_t>(m.theta.size()));
  std::memcpy(key.data() + 1, m.theta.data(),
              sizeof(double) * static_cast<std::size_t>(m.theta.size()));
  return key;
}

std::mutex g_cache_mutex;
std::unordered_map<std::string, std::shared_ptr<const MarginalCache>> g_caches;

}  // namespace

std::shared_ptr<const MarginalCache> marginal_cache(const RsModel& m) {
  const std::string key = cache_key(m);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_caches.find(key);
    if (it != g_caches.end()) return it->second;
  }
  auto built = std::make_shared<const MarginalCache>(m);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto [it, inserted] = g_caches.emplace(key, std::move(built));
  return it->second;
}

double rs_marginal(const RsModel& m, laws::Fn kind, double x) {
  const auto cache = marginal_cache(m);
  switch (kind) {
    case laws::Fn::cdf: return cache->cdf(x);
    case laws::Fn::pdf: return cache->pdf(x);
    case laws::Fn::quantile: return cache->quantile(x);
  }
  throw Error("unreachable");
}

double rs_copula_density(const RsModel& m, double u1, double u2) {
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0))
    throw DomainError("rs_copula_density requires (u1,u2) in the open square");
  const auto cache = marginal_cache(m);
  const double q1 = cache->quantile(u1);
  const double q2 = cache->quantile(u2);
  return rs_joint_density(m, q1, q2) / (cache->pdf(q1) * cache->pdf(q2));
}

namespace {

double chi_w_quadrature(double alpha, double xi) {
  const double a = 1.0 / xi;
  const double num = beta_expectation(
      alpha,
      [a](double v) {
        return std::pow(std::min(v, 1.0 - v) / std::max(v, 1.0 - v), a);
      },
      {0.5});
  const double den = beta_expectation(
      alpha, [a](double v) { return std::pow(v / std::max(v, 1.0 - v), a); }, {0.5});
  return num / den;
}

double chi_e2_quadrature(double alpha, double xi) {
  const double a = 1.0 / xi;
  const double den =
      std::exp(special::lbeta(alpha + a, alpha) - special::lbeta(alpha, alpha));
  quad::Options opt;
  opt.rel_tol = 1e-9;
  // E[min^a] = int_0^1 (1 - I_s)^2 dy with s = y^(1/a).
  const double num = quad::gk_adaptive(
      [alpha, a](double y) {
        const double s = std::pow(y, 1.0 / a);
        const double surv = 1.0 - special::inc_beta_reg(s, alpha, alpha);
        return surv * surv;
      },
      0.0, 1.0, opt);
  return num / den;
}

double chi_hw_quadrature(double delta, double omega) {
  const double a = 1.0 / delta;
  const double b = 1.0 / (1.0 - delta);
  const double den = b / (b - a);  // E V^(1/delta), requires delta > 1/2
  // min(V1,V2) = F_V^{-1}(W) with W = min(U1,U2); the diagonal conditional of
  // the Gaussian copula gives the closed-form density of W.
  const double c = std::sqrt((1.0 - omega) / (1.0 + omega));
  const double expo = a * (1.0 - delta);
  quad::Options opt;
  opt.rel_tol = 1e-9;
  // E[min^a] = int_0^1 (1-w)^(-a(1-delta)) 2 Phi_bar(c Phi^{-1}(w)) dw,
  // substituted with 1-w = e^{-x} on x in (0, inf).
  const double num = quad::gk_semi_infinite(
      [c, expo](double x) {
        const double omw = std::exp(-x);  // 1 - w
        if (omw <= 1e-300) return 0.0;
        const double q = -special::norm_quantile(omw);  // Phi^{-1}(w)
        const double tail = special::norm_cdf(-c * q);
        return std::exp(x * (expo - 1.0)) * 2.0 * tail;
      },
      0.0, opt);
  return num / den;
}

}  // namespace

DependenceClass rs_dependence(const RsModel& m) {
  m.validate();
  switch (m.id) {
    case ModelId::w: {
      const double alpha = m.theta[0], xi = m.theta[1];
      if (xi > 0.0) return {DependenceKind::AD, chi_w_quadrature(alpha, xi), 1.0};
      return {DependenceKind::AI, 0.0, 1.0 / (1.0 - xi)};
    }
    case ModelId::hw: {
      const double delta = m.theta[0], omega = m.theta[1];
      if (delta > 0.5)
        return {DependenceKind::AD, chi_hw_quadrature(delta, omega), 1.0};
      if (delta == 0.5) return {DependenceKind::AI, 0.0, 1.0};
      const double eta_v = copulas::gaussian_residual_eta(omega);
      if (delta <= eta_v / (1.0 + eta_v)) return {DependenceKind::AI, 0.0, eta_v};
      return {DependenceKind::AI, 0.0, delta / (1.0 - delta)};
    }
    case ModelId::e1: {
      const double beta = m.theta[1], mu = m.theta[2];
      if (mu > 1.0)
        return {DependenceKind::AD, 2.0 * (mu - 1.0) / (2.0 * mu - 1.0), 1.0};
      return {DependenceKind::AI, 0.0, std::pow(mu, beta)};
    }
    case ModelId::e2: {
      const double alpha = m.theta[0], xi = m.theta[1];
      if (xi > 0.0) return {DependenceKind::AD, chi_e2_quadrature(alpha, xi), 1.0};
      if (xi == 0.0) return {DependenceKind::AI, 0.0, 1.0};
      return {DependenceKind::AI, 0.0,
              (1.0 - xi * alpha) / (1.0 - 2.0 * xi * alpha)};
    }
  }
  throw Error("unreachable");
}

std::vector<std::pair<double, double>> rs_chi_curve(const RsModel& m,
                                                    const std::vector<double>& levels,
                                                    Eigen::Index mc_n,
                                                    RandomStream& rng) {
  if (mc_n < 10000) throw SizeError("rs_chi_curve requires mc_n >= 10^4");
  for (double u : levels)
    if (!(u > 0.0 && u < 1.0)) throw DomainError("chi levels must lie in (0,1)");
  const BivariateSample sample = rs_simulate(m, mc_n, rng);
  const PairMatrix ranks = stats::rank_transform(sample.values);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(levels.size());
  for (double u : levels) curve.emplace_back(u, stats::empirical_chi(ranks, u));
  return curve;
}

}  // namespace tailnet::rs
