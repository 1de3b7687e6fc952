#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/stat_test.hpp"
#include "tailnet/laws.hpp"
#include "tailnet/random.hpp"
#include "tailnet/special.hpp"

using namespace tailnet;
using laws::Family;
using laws::Fn;
using laws::UnivariateLaw;

TEST_CASE("law_eval closed forms") {
  CHECK(law_eval(UnivariateLaw::Gpd(1.0, 1.0), Fn::quantile, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (double a : {0.3, 1.0, 2.0, 7.5})
    CHECK(law_eval(UnivariateLaw::Beta(a, a), Fn::cdf, 0.5) ==
          doctest::Approx(0.5).epsilon(1e-10));
  CHECK(law_eval(UnivariateLaw::Normal(0, 1), Fn::quantile, 0.5) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // GPD(1,-1) upper endpoint: quantile(p) -> 1 as p -> 1.
  CHECK(law_eval(UnivariateLaw::Gpd(1.0, -1.0), Fn::quantile, 1.0 - 1e-9) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("law_eval domain and parameter errors") {
  CHECK_THROWS_AS(law_eval(UnivariateLaw::Gpd(1.0, -0.5), Fn::cdf, 2.5), DomainError);
  CHECK_THROWS_AS(law_eval(UnivariateLaw::Beta(-1.0, 2.0), Fn::pdf, 0.3), ParamError);
  CHECK_THROWS_AS(law_eval(UnivariateLaw::Uniform(2.0, 1.0), Fn::cdf, 1.5), ParamError);
  CHECK_THROWS_AS(law_eval(UnivariateLaw::Weibull(1.0), Fn::quantile, 1.5), DomainError);
  CHECK_THROWS_AS(law_eval(UnivariateLaw::ParetoShape(1.0), Fn::pdf, 0.5), DomainError);
}

TEST_CASE("law_sample moments and support") {
  RandomStream rng(17);
  const VectorXd beta = law_sample(UnivariateLaw::Beta(2, 2), 1000000, rng);
  CHECK(std::fabs(beta.mean() - 0.5) < 0.002);

  const VectorXd gpd = law_sample(UnivariateLaw::Gpd(1.0, -0.5), 100000, rng);
  CHECK(gpd.maxCoeff() <= 2.0);
  CHECK(gpd.minCoeff() >= 0.0);

  const VectorXd wei = law_sample(UnivariateLaw::Weibull(1.0), 100000, rng);
  const double d = stat_test::ks_statistic(
      {wei.data(), wei.data() + wei.size()},
      [](double x) { return -std::expm1(-x); });
  CHECK(d < 0.01);
}

TEST_CASE("quantile-cdf roundtrip across families") {
  RandomStream rng(99);
  auto draw_law = [&](int which) -> UnivariateLaw {
    switch (which) {
      case 0: return UnivariateLaw::Beta(rng.uniform(0.2, 8.0), rng.uniform(0.2, 8.0));
      case 1: return UnivariateLaw::Gpd(rng.uniform(0.2, 4.0), rng.uniform(-1.5, 1.0));
      case 2: return UnivariateLaw::Weibull(rng.uniform(0.3, 6.0));
      case 3: return UnivariateLaw::ParetoShape(rng.uniform(0.1, 4.0));
      case 4: return UnivariateLaw::Normal(rng.uniform(-3, 3), rng.uniform(0.2, 4.0));
      case 5: return UnivariateLaw::Uniform(-2.0, rng.uniform(-1.0, 5.0));
      default: return UnivariateLaw::Exponential(rng.uniform(0.2, 5.0));
    }
  };
  for (int which = 0; which < 7; ++which) {
    for (int rep = 0; rep < 100; ++rep) {
      const UnivariateLaw law = draw_law(which);
      const double p = rng.uniform(1e-6, 1.0 - 1e-6);
      const double x = law_eval(law, Fn::quantile, p);
      const double p2 = law_eval(law, Fn::cdf, x);
      CHECK(std::fabs(p2 - p) < 1e-8);
    }
  }
}

TEST_CASE("sampled laws pass KS at the 1% level") {
  RandomStream rng(4242);
  const UnivariateLaw laws_to_test[] = {
      UnivariateLaw::Beta(2.0, 5.0),      UnivariateLaw::Gpd(1.5, 0.4),
      UnivariateLaw::Gpd(1.0, -0.7),      UnivariateLaw::Weibull(2.5),
      UnivariateLaw::ParetoShape(0.8),    UnivariateLaw::Normal(1.0, 2.0),
      UnivariateLaw::Uniform(-1.0, 3.0),  UnivariateLaw::Exponential(1.7)};
  for (const auto& law : laws_to_test) {
    const VectorXd xs = law_sample(law, 100000, rng);
    CHECK(stat_test::ks_pass_1pct(
        {xs.data(), xs.data() + xs.size()},
        [&law](double x) { return law_eval(law, Fn::cdf, x); }));
  }
}

TEST_CASE("GPD branch continuity near xi = 0") {
  for (double p : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const double q_tiny = law_eval(UnivariateLaw::Gpd(1.0, 1e-10), Fn::quantile, p);
    const double q_zero = law_eval(UnivariateLaw::Gpd(1.0, 0.0), Fn::quantile, p);
    const double q_above = law_eval(UnivariateLaw::Gpd(1.0, 1e-8), Fn::quantile, p);
    CHECK(std::fabs(q_tiny - q_zero) <= 1e-6);
    CHECK(std::fabs(q_above - q_zero) <= 1e-6);
  }
}

TEST_CASE("reproducibility and substream independence") {
  RandomStream a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream base(7);
  RandomStream s0 = base.substream(0);
  RandomStream s1 = base.substream(1);
  CHECK(s0.next_u64() != s1.next_u64());

  RandomStream r1(55), r2(55);
  const VectorXd x1 = law_sample(UnivariateLaw::Beta(1.3, 0.7), 64, r1);
  const VectorXd x2 = law_sample(UnivariateLaw::Beta(1.3, 0.7), 64, r2);
  CHECK((x1 - x2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bivariate normal sampler") {
  RandomStream rng(31);
  const PairMatrix z0 = laws::sample_bivariate_normal(0.0, 100000, rng);
  CHECK(std::fabs(stat_test::pearson_corr(z0)) < 0.02);

  const PairMatrix z9 = laws::sample_bivariate_normal(0.9, 100000, rng);
  CHECK(std::fabs(stat_test::pearson_corr(z9) - 0.9) < 0.02);

  const PairMatrix z5 = laws::sample_bivariate_normal(0.5, 100000, rng);
  for (int j = 0; j < 2; ++j)
    CHECK(stat_test::ks_pass_1pct(stat_test::col(z5, j), special::norm_cdf));

  CHECK_THROWS_AS(laws::sample_bivariate_normal(1.0, 10, rng), ParamError);
}

TEST_CASE("positive stable draws match the Laplace transform") {
  RandomStream rng(61);
  const VectorXd s05 = laws::sample_positive_stable(0.5, 1000000, rng);
  CHECK(std::fabs((-s05.array()).exp().mean() - std::exp(-1.0)) < 0.005);

  const VectorXd s09 = laws::sample_positive_stable(0.9, 10000, rng);
  CHECK(s09.minCoeff() > 0.0);

  const VectorXd s03 = laws::sample_positive_stable(0.3, 1000000, rng);
  CHECK(std::fabs((-2.0 * s03.array()).exp().mean() - std::exp(-std::pow(2.0, 0.3))) <
        0.005);

  CHECK_THROWS_AS(laws::sample_positive_stable(1.2, 10, rng), ParamError);
}
