#ifndef TAILNET_RADIAL_ANGULAR_HPP
#define TAILNET_RADIAL_ANGULAR_HPP

#include <memory>
#include <utility>
#include <vector>

#include "tailnet/common.hpp"
#include "tailnet/interp.hpp"
#include "tailnet/laws.hpp"
#include "tailnet/random.hpp"

namespace tailnet::rs {

enum class ModelId { w, hw, e1, e2 };

/// Random scale mixture model (Z1,Z2) = R (V1,V2), R independent of the
/// angular vector. Parameter vectors:
///   W : (alpha > 0, xi in R)        V ~ Beta(a,a), angle (V,1-V)/max, R ~ GPD(1,xi)
///   HW: (delta in (0,1), omega)     Pareto radial/angular, Gaussian angular copula
///   E1: (alpha > 0, beta > 0, mu >= 1/2)  Weibull radial, nu-normalised angle
///   E2: (alpha > 0, xi in R)        independent Beta(a,a) angles, R ~ GPD(1,xi)
struct RsModel {
  ModelId id;
  VectorXd theta;

  static RsModel W(double alpha, double xi);
  static RsModel Hw(double delta, double omega);
  static RsModel E1(double alpha, double beta, double mu);
  static RsModel E2(double alpha, double xi);

  void validate() const;
  const char* name() const;
};

enum class DependenceKind { AD, AI };

struct DependenceClass {
  DependenceKind kind;
  double chi;
  double eta;
};

BivariateSample rs_simulate(const RsModel& m, Eigen::Index n, RandomStream& rng);

/// Joint density of (Z1,Z2): closed-form radial/angular change of variables
/// for W and E1; one-dimensional quadrature in radial probability for HW/E2.
double rs_joint_density(const RsModel& m, double z1, double z2);

/// Immutable per-theta marginal table: cdf/pdf on a 2048-point grid with
/// monotone interpolation, quantile by inversion (HW uses its closed form).
class MarginalCache {
 public:
  explicit MarginalCache(const RsModel& m, int grid_points = 2048);

  double cdf(double z) const;
  double pdf(double z) const;
  double quantile(double p) const;
  const RsModel& model() const { return model_; }

 private:
  RsModel model_;
  bool closed_form_ = false;  // HW marginal is elementary
  double z_lo_ = 0.0, z_hi_ = 0.0;
  interp::MonotoneCubic cdf_interp_;
  VectorXd pdf_x_, pdf_y_, pdf_slope_;
};

/// Shared, memoized per-(model, theta) cache; construction is serialized,
/// reads are lock-free after retrieval.
std::shared_ptr<const MarginalCache> marginal_cache(const RsModel& m);

/// Exact (uncached) marginal cdf/pdf by quadrature over the angular law.
double rs_marginal_exact(const RsModel& m, laws::Fn kind, double x);

/// Cached marginal evaluation; quantile inverts the cached cdf.
double rs_marginal(const RsModel& m, laws::Fn kind, double x);

/// Copula density assembled from the joint density and the marginal table.
double rs_copula_density(const RsModel& m, double u1, double u2);

/// Analytic extremal dependence classification with quadrature expectations.
DependenceClass rs_dependence(const RsModel& m);

/// Empirical chi(u) curve from mc_n simulated, rank-transformed pairs.
std::vector<std::pair<double, double>> rs_chi_curve(const RsModel& m,
                                                    const std::vector<double>& levels,
                                                    Eigen::Index mc_n,
                                                    RandomStream& rng);

/// E[g(V)] for V ~ Beta(alpha,alpha), with endpoint substitutions that keep
/// the quadrature well-conditioned for alpha < 1. Extra breakpoints are in
/// v-space.
double beta_expectation(double alpha, const std::function<double(double)>& g,
                        std::vector<double> breaks_v = {}, double rel_tol = 1e-9);

}  // namespace tailnet::rs

#endif  // TAILNET_RADIAL_ANGULAR_HPP
