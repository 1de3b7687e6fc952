#ifndef TAILNET_TAIL_STATS_HPP
#define TAILNET_TAIL_STATS_HPP

#include <vector>

#include "tailnet/common.hpp"
#include "tailnet/random.hpp"

namespace tailnet::stats {

/// Pseudo-observations: each margin mapped to rank/(n+1), ties by average rank.
VectorXd rank_transform_col(const VectorXd& col);
PairMatrix rank_transform(const PairMatrix& sample);

/// chi(u) = P(U1>u, U2>u) / (1-u), reported raw (may exceed 1 in finite
/// samples).
double empirical_chi(const PairMatrix& u_sample, double u);

/// eta(u) = log(1-u) / log p(u) with p(u) the empirical joint survival.
/// Throws NoExceedanceError when no row survives jointly.
double empirical_eta(const PairMatrix& u_sample, double u);

/// Joint tail probability along the ray w on the exponential scale:
/// P(U1 > 1-(1-u)^w, U2 > 1-(1-u)^(1-w)).
double joint_ray_survival(const PairMatrix& u_sample, double w, double u);

/// Pointwise convex combination of per-model chi(u) curves.
VectorXd bma_chi(const std::vector<VectorXd>& curves, const VectorXd& weights);

struct BootstrapMode {
  enum Kind { iid, block } kind = iid;
  Eigen::Index block_len = 10;

  static BootstrapMode Iid() { return {iid, 0}; }
  static BootstrapMode Block(Eigen::Index len) { return {block, len}; }
};

/// Row indices of one bootstrap resample: iid rows with replacement, or
/// circular contiguous blocks concatenated and truncated to n.
std::vector<Eigen::Index> bootstrap_indices(Eigen::Index n, const BootstrapMode& mode,
                                            RandomStream& rng);

std::vector<PairMatrix> bootstrap_resample(const PairMatrix& sample,
                                           const BootstrapMode& mode, int B,
                                           RandomStream& rng);

struct GpdFit {
  double scale = 0.0;
  double shape = 0.0;
  bool converged = false;
};

/// Maximum-likelihood GPD fit to positive exceedances, quasi-Newton on
/// (log sigma, xi).
GpdFit gpd_fit_mle(const VectorXd& exceedances);

/// Semiparametric margin fit: empirical cdf below the threshold r, GPD tail
/// above, as used to transform raw margins to the uniform scale.
struct MarginFit {
  double threshold = 0.0;
  double exceed_prob = 0.0;
  double gpd_scale = 0.0;
  double gpd_shape = 0.0;
  VectorXd sorted;

  /// The fitted piecewise cdf.
  double cdf(double x) const;
};

struct SemiparametricResult {
  VectorXd uniform;
  MarginFit fit;
};

SemiparametricResult semiparametric_transform(const VectorXd& raw_col, double r);

}  // namespace tailnet::stats

#endif  // TAILNET_TAIL_STATS_HPP
