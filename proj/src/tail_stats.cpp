#include "tailnet/tail_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tailnet::stats {

VectorXd rank_transform_col(const VectorXd& col) {
  const Eigen::Index n = col.size();
  if (n < 2) throw SizeError("rank_transform requires n >= 2");
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(),
            [&col](Eigen::Index a, Eigen::Index b) { return col[a] < col[b]; });
  VectorXd out(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && col[idx[j + 1]] == col[idx[i]]) ++j;
    // Average rank over the tie group [i, j].
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k)
      out[idx[k]] = avg_rank / static_cast<double>(n + 1);
    i = j + 1;
  }
  return out;
}

PairMatrix rank_transform(const PairMatrix& sample) {
  PairMatrix out(sample.rows(), 2);
  out.col(0) = rank_transform_col(sample.col(0));
  out.col(1) = rank_transform_col(sample.col(1));
  return out;
}

double empirical_chi(const PairMatrix& u_sample, double u) {
  const Eigen::Index n = u_sample.rows();
  if (n < 1) throw SizeError("empirical_chi requires n >= 1");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("empirical_chi requires u in (0,1)");
  Eigen::Index joint = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (u_sample(i, 0) > u && u_sample(i, 1) > u) ++joint;
  return static_cast<double>(joint) / (static_cast<double>(n) * (1.0 - u));
}

double empirical_eta(const PairMatrix& u_sample, double u) {
  const Eigen::Index n = u_sample.rows();
  if (n < 1) throw SizeError("empirical_eta requires n >= 1");
  if (!(u > 0.0 && u < 1.0)) throw DomainError("empirical_eta requires u in (0,1)");
  Eigen::Index joint = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (u_sample(i, 0) > u && u_sample(i, 1) > u) ++joint;
  if (joint == 0) throw NoExceedanceError("no joint exceedance at the given level");
  const double p_hat = static_cast<double>(joint) / static_cast<double>(n);
  return std::log1p(-u) / std::log(p_hat);
}

double joint_ray_survival(const PairMatrix& u_sample, double w, double u) {
  const Eigen::Index n = u_sample.rows();
  if (n < 1) throw SizeError("joint_ray_survival requires n >= 1");
  if (!(u > 0.0 && u < 1.0 && w > 0.0 && w < 1.0))
    throw DomainError("joint_ray_survival requires u,w in (0,1)");
  // X_E = -log(1-U) > -w log(1-u)  <=>  U > 1-(1-u)^w.
  const double t1 = -std::expm1(w * std::log1p(-u));
  const double t2 = -std::expm1((1.0 - w) * std::log1p(-u));
  Eigen::Index joint = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (u_sample(i, 0) > t1 && u_sample(i, 1) > t2) ++joint;
  return static_cast<double>(joint) / static_cast<double>(n);
}

VectorXd bma_chi(const std::vector<VectorXd>& curves, const VectorXd& weights) {
  if (curves.empty() || weights.size() != static_cast<Eigen::Index>(curves.size()))
    throw WeightError("bma_chi needs one weight per curve");
  if (weights.minCoeff() < 0.0) throw WeightError("bma_chi weights must be >= 0");
  if (std::fabs(weights.sum() - 1.0) > 1e-9)
    throw WeightError("bma_chi weights must sum to 1");
  const Eigen::Index len = curves.front().size();
  VectorXd out = VectorXd::Zero(len);
  for (std::size_t m = 0; m < curves.size(); ++m) {
    if (curves[m].size() != len) throw SizeError("bma_chi curves must share levels");
    out += weights[static_cast<Eigen::Index>(m)] * curves[m];
  }
  return out;
}

std::vector<Eigen::Index> bootstrap_indices(Eigen::Index n, const BootstrapMode& mode,
                                            RandomStream& rng) {
  if (n < 1) throw SizeError("bootstrap requires n >= 1");
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(n));
  if (mode.kind == BootstrapMode::iid) {
    for (Eigen::Index i = 0; i < n; ++i)
      idx.push_back(static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n))));
    return idx;
  }
  const Eigen::Index len = mode.block_len;
  if (len < 1 || len > n) throw SizeError("block length must be in [1, n]");
  while (static_cast<Eigen::Index>(idx.size()) < n) {
    const Eigen::Index start =
        static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    for (Eigen::Index k = 0; k < len && static_cast<Eigen::Index>(idx.size()) < n; ++k)
      idx.push_back((start + k) % n);
  }
  return idx;
}

std::vector<PairMatrix> bootstrap_resample(const PairMatrix& sample,
                                           const BootstrapMode& mode, int B,
                                           RandomStream& rng) {
  if (B < 1) throw SizeError("bootstrap requires B >= 1");
  const Eigen::Index n = sample.rows();
  std::vector<PairMatrix> out;
  out.reserve(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) {
    const auto idx = bootstrap_indices(n, mode, rng);
    PairMatrix m(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) m.row(i) = sample.row(idx[static_cast<std::size_t>(i)]);
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

double gpd_negloglik(const VectorXd& x, double log_sigma, double xi) {
  const double sigma = std::exp(log_sigma);
  const Eigen::Index n = x.size();
  double nll = static_cast<double>(n) * log_sigma;
  if (std::fabs(xi) < 1e-10) {
    nll += x.sum() / sigma;
    return nll;
  }
  const double c = 1.0 + 1.0 / xi;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = xi * x[i] / sigma;
    if (t <= -1.0) return 1e30;  // outside the support
    nll += c * std::log1p(t);
  }
  return nll;
}

}  // namespace

GpdFit gpd_fit_mle(const VectorXd& exceedances) {
  const Eigen::Index n = exceedances.size();
  if (n < 10) throw SizeError("gpd_fit_mle requires >= 10 exceedances");
  if (exceedances.minCoeff() <= 0.0)
    throw DomainError("gpd_fit_mle requires positive exceedances");
  const double mean = exceedances.mean();
  const double var =
      (exceedances.array() - mean).square().sum() / static_cast<double>(n - 1);
  if (!(var > 1e-12 * mean * mean))
    throw ConvergenceError("degenerate (near-constant) exceedances");

  // Hosking-Wallis moment start, then quasi-Newton (BFGS) on (log sigma, xi).
  const double ratio = mean * mean / var;
  double xi = std::clamp(0.5 * (1.0 - ratio), -0.45, 0.45);
  double ls = std::log(std::max(0.5 * mean * (ratio + 1.0), 1e-12));

  auto grad = [&exceedances](double a, double b, Eigen::Vector2d& g) {
    const double h = 1e-6;
    g[0] = (gpd_negloglik(exceedances, a + h, b) -
            gpd_negloglik(exceedances, a - h, b)) / (2.0 * h);
    g[1] = (gpd_negloglik(exceedances, a, b + h) -
            gpd_negloglik(exceedances, a, b - h)) / (2.0 * h);
  };

  Eigen::Matrix2d H = Eigen::Matrix2d::Identity();
  Eigen::Vector2d g;
  grad(ls, xi, g);
  double f = gpd_negloglik(exceedances, ls, xi);
  bool converged = false;
  for (int it = 0; it < 300; ++it) {
    if (g.cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, std::fabs(f))) {
      converged = true;
      break;
    }
    Eigen::Vector2d dir = -H * g;
    if (dir.dot(g) > 0.0) {  // keep descent direction
      H = Eigen::Matrix2d::Identity();
      dir = -g;
    }
    double step = 1.0;
    double f_new = f;
    double ls_new = ls, xi_new = xi;
    for (int bt = 0; bt < 60; ++bt) {
      ls_new = ls + step * dir[0];
      xi_new = xi + step * dir[1];
      f_new = gpd_negloglik(exceedances, ls_new, xi_new);
      if (f_new < f - 1e-4 * step * (-dir.dot(g))) break;
      step *= 0.5;
    }
    if (!(f_new < f)) {
      converged = g.cwiseAbs().maxCoeff() < 1e-4 * std::max(1.0, std::fabs(f));
      break;
    }
    Eigen::Vector2d g_new;
    grad(ls_new, xi_new, g_new);
    const Eigen::Vector2d s(ls_new - ls, xi_new - xi);
    const Eigen::Vector2d y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12) {  // BFGS inverse-Hessian update
      const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
      const Eigen::Matrix2d V = I - (y * s.transpose()) / sy;
      H = V.transpose() * H * V + (s * s.transpose()) / sy;
    }
    ls = ls_new;
    xi = xi_new;
    f = f_new;
    g = g_new;
  }
  if (!converged) throw ConvergenceError("GPD MLE did not converge");
  GpdFit fit;
  fit.scale = std::exp(ls);
  fit.shape = xi;
  fit.converged = true;
  if (fit.shape < 0.0 && exceedances.maxCoeff() >= fit.scale / std::fabs(fit.shape))
    throw SupportError("fitted GPD upper endpoint below the largest exceedance");
  return fit;
}

double MarginFit::cdf(double x) const {
  if (x > threshold) {
    const double t = gpd_shape * (x - threshold) / gpd_scale;
    double surv;
    if (std::fabs(gpd_shape) < 1e-10) {
      surv = std::exp(-(x - threshold) / gpd_scale);
    } else if (t <= -1.0) {
      surv = 0.0;
    } else {
      surv = std::exp(-std::log1p(t) / gpd_shape);
    }
    return std::min(1.0 - exceed_prob * surv, 1.0 - 1e-12);
  }
  // Empirical distribution function below the threshold.
  const auto* begin = sorted.data();
  const auto* end = begin + sorted.size();
  const auto k = std::upper_bound(begin, end, x) - begin;
  const double p = static_cast<double>(k) / static_cast<double>(sorted.size());
  return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

SemiparametricResult semiparametric_transform(const VectorXd& raw_col, double r) {
  const Eigen::Index n = raw_col.size();
  std::vector<double> exc;
  for (Eigen::Index i = 0; i < n; ++i)
    if (raw_col[i] > r) exc.push_back(raw_col[i] - r);
  if (exc.size() < 10) throw SizeError("need >= 10 exceedances above the threshold");
  VectorXd exc_v = Eigen::Map<VectorXd>(exc.data(), static_cast<Eigen::Index>(exc.size()));
  const GpdFit fit = gpd_fit_mle(exc_v);

  SemiparametricResult res;
  res.fit.threshold = r;
  res.fit.exceed_prob = static_cast<double>(exc.size()) / static_cast<double>(n);
  res.fit.gpd_scale = fit.scale;
  res.fit.gpd_shape = fit.shape;
  res.fit.sorted = raw_col;
  std::sort(res.fit.sorted.data(), res.fit.sorted.data() + n);
  res.uniform = VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) res.uniform[i] = res.fit.cdf(raw_col[i]);
  return res;
}

}  // namespace tailnet::stats
