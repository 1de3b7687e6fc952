#ifndef TAILNET_WCM_HPP
#define TAILNET_WCM_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tailnet/common.hpp"
#include "tailnet/copulas.hpp"
#include "tailnet/radial_angular.hpp"
#include "tailnet/random.hpp"

namespace tailnet::wcm {

/// A copula usable as a WCM component: density on the open square plus an
/// exact sampler with uniform margins.
class CopulaComponent {
 public:
  virtual ~CopulaComponent() = default;
  virtual double density(double u1, double u2) const = 0;
  virtual PairMatrix sample(Eigen::Index n, RandomStream& rng) const = 0;
  virtual std::string describe() const = 0;
};

std::shared_ptr<const CopulaComponent> make_component(const copulas::ClosedCopula& c);

/// Radial-angular component: sampling by simulation followed by the exact
/// marginal probability integral transform, density via the marginal table.
std::shared_ptr<const CopulaComponent> make_component(const rs::RsModel& m);

/// Weighted copula model h = (pi c_t + (1-pi) c_b) / c(theta) with dynamic
/// weight pi(x1,x2;kappa) = (x1 x2)^exp(kappa).
struct WcmSpec {
  std::shared_ptr<const CopulaComponent> body;
  std::shared_ptr<const CopulaComponent> tail;
  double kappa = 0.0;

  void validate() const;
};

double wcm_weight(double x1, double x2, double kappa);

double wcm_density_unnorm(const WcmSpec& spec, double x1, double x2);

struct McEstimate {
  double value;
  double std_error;
};

/// Importance-sampling estimate of the normalising constant c(theta) under
/// the equal-mixture proposal (c_t + c_b)/2.
McEstimate wcm_normalizer_mc(const WcmSpec& spec, Eigen::Index mc_n, RandomStream& rng);

/// Exact rejection sampler from the equal-mixture proposal; returns exactly n
/// accepted pairs or throws RejectionBudgetError.
BivariateSample wcm_simulate(const WcmSpec& spec, Eigen::Index n, RandomStream& rng,
                             std::uint64_t max_tries = 0);

/// h-sample rank-transformed to pseudo-uniform margins.
BivariateSample wcm_copula_sample(const WcmSpec& spec, Eigen::Index n,
                                  RandomStream& rng);

std::vector<std::pair<double, double>> wcm_chi_mc(const WcmSpec& spec,
                                                  const std::vector<double>& levels,
                                                  Eigen::Index mc_n, RandomStream& rng);

}  // namespace tailnet::wcm

#endif  // TAILNET_WCM_HPP
