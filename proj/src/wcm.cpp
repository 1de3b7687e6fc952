#include "tailnet/wcm.hpp"

#include "tailnet/tail_stats.hpp"

#include <cmath>

namespace tailnet::wcm {

namespace {

class ClosedComponent final : public CopulaComponent {
 public:
  explicit ClosedComponent(copulas::ClosedCopula c) : c_(c) { c_.validate(); }

  double density(double u1, double u2) const override {
    return copulas::copula_density(c_, u1, u2);
  }
  PairMatrix sample(Eigen::Index n, RandomStream& rng) const override {
    return copulas::copula_sample(c_, n, rng);
  }
  std::string describe() const override {
    switch (c_.family) {
      case copulas::Family::gaussian: return "gaussian";
      case copulas::Family::logistic: return "logistic";
      case copulas::Family::frank: return "frank";
      case copulas::Family::joe: return "joe";
    }
    return "?";
  }

 private:
  copulas::ClosedCopula c_;
};

class RsComponent final : public CopulaComponent {
 public:
  explicit RsComponent(const rs::RsModel& m) : model_(m), cache_(rs::marginal_cache(m)) {}

  double density(double u1, double u2) const override {
    return rs::rs_copula_density(model_, u1, u2);
  }
  PairMatrix sample(Eigen::Index n, RandomStream& rng) const override {
    // Exact probability integral transform through the marginal table (the
    // rejection ratio must see the same copula whose density is evaluated).
    const BivariateSample raw = rs::rs_simulate(model_, n, rng);
    PairMatrix u(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i, 0) = cache_->cdf(raw.values(i, 0));
      u(i, 1) = cache_->cdf(raw.values(i, 1));
    }
    return u;
  }
  std::string describe() const override { return model_.name(); }

 private:
  rs::RsModel model_;
  std::shared_ptr<const rs::MarginalCache> cache_;
};

}  // namespace

std::shared_ptr<const CopulaComponent> make_component(const copulas::ClosedCopula& c) {
  return std::make_shared<ClosedComponent>(c);
}

std::shared_ptr<const CopulaComponent> make_component(const rs::RsModel& m) {
  m.validate();
  return std::make_shared<RsComponent>(m);
}

void WcmSpec::validate() const {
  if (!body || !tail) throw ParamError("WCM needs both components");
  if (!std::isfinite(kappa)) throw ParamError("kappa must be finite");
}

double wcm_weight(double x1, double x2, double kappa) {
  if (!(x1 > 0.0 && x1 <= 1.0 && x2 > 0.0 && x2 <= 1.0))
    throw DomainError("wcm_weight requires x in (0,1]");
  return std::pow(x1 * x2, std::exp(kappa));
}

double wcm_density_unnorm(const WcmSpec& spec, double x1, double x2) {
  spec.validate();
  const double pi = wcm_weight(x1, x2, spec.kappa);
  return pi * spec.tail->density(x1, x2) + (1.0 - pi) * spec.body->density(x1, x2);
}

McEstimate wcm_normalizer_mc(const WcmSpec& spec, Eigen::Index mc_n, RandomStream& rng) {
  spec.validate();
  if (mc_n < 10000) throw SizeError("wcm_normalizer_mc requires mc_n >= 10^4");
  double sum = 0.0, sum2 = 0.0;
  for (Eigen::Index i = 0; i < mc_n; ++i) {
    double u1, u2;
    if (rng.uniform() < 0.5) {
      const PairMatrix p = spec.tail->sample(1, rng);
      u1 = p(0, 0);
      u2 = p(0, 1);
    } else {
      const PairMatrix p = spec.body->sample(1, rng);
      u1 = p(0, 0);
      u2 = p(0, 1);
    }
    const double ct = spec.tail->density(u1, u2);
    const double cb = spec.body->density(u1, u2);
    const double pi = wcm_weight(u1, u2, spec.kappa);
    // target / proposal with proposal (ct+cb)/2
    const double w = 2.0 * (pi * ct + (1.0 - pi) * cb) / (ct + cb);
    sum += w;
    sum2 += w * w;
  }
  const double n = static_cast<double>(mc_n);
  const double mean = sum / n;
  const double var = std::max(sum2 / n - mean * mean, 0.0);
  return {mean, std::sqrt(var / n)};
}

BivariateSample wcm_simulate(const WcmSpec& spec, Eigen::Index n, RandomStream& rng,
                             std::uint64_t max_tries) {
  spec.validate();
  if (n < 1) throw SizeError("wcm_simulate requires n >= 1");
  if (max_tries == 0) max_tries = 1000ULL * static_cast<std::uint64_t>(n);
  BivariateSample out;
  out.scale = Scale::uniform;  // values live on (0,1)^2, margins not uniform
  out.values.resize(n, 2);
  Eigen::Index accepted = 0;
  std::uint64_t tries = 0;
  while (accepted < n) {
    if (tries >= max_tries)
      throw RejectionBudgetError("wcm_simulate exceeded max_tries");
    ++tries;
    double u1, u2;
    if (rng.uniform() < 0.5) {
      const PairMatrix p = spec.tail->sample(1, rng);
      u1 = p(0, 0);
      u2 = p(0, 1);
    } else {
      const PairMatrix p = spec.body->sample(1, rng);
      u1 = p(0, 0);
      u2 = p(0, 1);
    }
    const double ct = spec.tail->density(u1, u2);
    const double cb = spec.body->density(u1, u2);
    const double pi = wcm_weight(u1, u2, spec.kappa);
    const double ratio = (pi * ct + (1.0 - pi) * cb) / (ct + cb);
    if (!(ratio >= 0.0 && ratio <= 1.0 + 1e-12))
      throw Error("wcm rejection ratio outside [0,1]");
    if (rng.uniform() < ratio) {
      out.values(accepted, 0) = u1;
      out.values(accepted, 1) = u2;
      ++accepted;
    }
  }
  return out;
}

BivariateSample wcm_copula_sample(const WcmSpec& spec, Eigen::Index n,
                                  RandomStream& rng) {
  BivariateSample h = wcm_simulate(spec, n, rng);
  h.values = stats::rank_transform(h.values);
  h.scale = Scale::uniform;
  return h;
}

std::vector<std::pair<double, double>> wcm_chi_mc(const WcmSpec& spec,
                                                  const std::vector<double>& levels,
                                                  Eigen::Index mc_n, RandomStream& rng) {
  if (mc_n < 10000) throw SizeError("wcm_chi_mc requires mc_n >= 10^4");
  for (double u : levels)
    if (!(u > 0.0 && u < 1.0)) throw DomainError("chi levels must lie in (0,1)");
  const BivariateSample u_sample = wcm_copula_sample(spec, mc_n, rng);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(levels.size());
  for (double u : levels)
    curve.emplace_back(u, stats::empirical_chi(u_sample.values, u));
  return curve;
}

}  // namespace tailnet::wcm
