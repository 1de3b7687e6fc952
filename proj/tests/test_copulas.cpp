#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/stat_test.hpp"
#include "tailnet/copulas.hpp"
#include "tailnet/quadrature.hpp"
#include "tailnet/special.hpp"

using namespace tailnet;
using copulas::ClosedCopula;

namespace {

// Tensor-grid quadrature of the density over the whole unit square, with the
// 1D partition graded geometrically into the corners where several families
// have integrable singularities.
double density_mass(const ClosedCopula& c) {
  std::vector<double> b{0.0};
  for (double e = 1e-9; e < 0.4; e *= 6.0) b.push_back(e);
  b.push_back(0.5);
  for (std::size_t i = b.size() - 2; i > 0; --i) b.push_back(1.0 - b[i]);
  b.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
      total += quad::gk2d_cell(
          [&](double u, double v) { return copulas::copula_density(c, u, v); }, b[i],
          b[i + 1], b[j], b[j + 1]);
  return total;
}

}  // namespace

TEST_CASE("copula density closed-form anchors") {
  CHECK(copulas::copula_density(ClosedCopula::Gaussian(0.0), 0.23, 0.87) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (double rho : {-0.6, 0.3, 0.8})
    CHECK(copulas::copula_density(ClosedCopula::Gaussian(rho), 0.5, 0.5) ==
          doctest::Approx(1.0 / std::sqrt(1.0 - rho * rho)).epsilon(1e-12));
  CHECK(copulas::copula_density(ClosedCopula::Logistic(1.0), 0.3, 0.7) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(copulas::copula_density(ClosedCopula::Frank(2.0), 0.0, 0.5),
                  DomainError);
}

TEST_CASE("copula cdf margins and limits") {
  const ClosedCopula all[] = {ClosedCopula::Gaussian(0.4), ClosedCopula::Logistic(0.5),
                              ClosedCopula::Frank(-3.0), ClosedCopula::Joe(2.5)};
  for (const auto& c : all) {
    for (double u : {0.1, 0.5, 0.9}) {
      CHECK(copulas::copula_cdf(c, u, 1.0) == doctest::Approx(u).epsilon(1e-9));
      CHECK(copulas::copula_cdf(c, 1.0, u) == doctest::Approx(u).epsilon(1e-9));
      CHECK(copulas::copula_cdf(c, u, 0.0) == 0.0);
    }
  }
  // Comonotone limit of the logistic family: C(u,u) = u^(2^alpha_L) exactly,
  // approaching min(u,u) = u as alpha_L -> 0.
  CHECK(copulas::copula_cdf(ClosedCopula::Logistic(0.01), 0.4, 0.4) ==
        doctest::Approx(std::pow(0.4, std::pow(2.0, 0.01))).epsilon(1e-12));
  CHECK(std::fabs(copulas::copula_cdf(ClosedCopula::Logistic(0.001), 0.4, 0.4) - 0.4) <
        1e-3);
}

TEST_CASE("Frank cdf agrees with 2D quadrature of its density") {
  const ClosedCopula frank = ClosedCopula::Frank(5.0);
  quad::Options opt;
  opt.rel_tol = 1e-9;
  const double mass = quad::gk2d_adaptive(
      [&](double u, double v) { return copulas::copula_density(frank, u, v); }, 0.0,
      0.5, 0.0, 0.5, opt);
  CHECK(std::fabs(mass - copulas::copula_cdf(frank, 0.5, 0.5)) < 1e-5);
}

TEST_CASE("copula density integrates to one") {
  RandomStream rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    const ClosedCopula cs[] = {
        ClosedCopula::Gaussian(rng.uniform(-0.9, 0.9)),
        ClosedCopula::Logistic(rng.uniform(0.15, 1.0)),
        ClosedCopula::Frank(rng.uniform() < 0.5 ? rng.uniform(0.5, 10.0)
                                                : rng.uniform(-10.0, -0.5)),
        ClosedCopula::Joe(rng.uniform(1.0, 8.0))};
    for (const auto& c : cs) CHECK(std::fabs(density_mass(c) - 1.0) < 1e-4);
  }
}

TEST_CASE("copula cdf is 2-increasing") {
  const ClosedCopula all[] = {ClosedCopula::Gaussian(-0.7), ClosedCopula::Logistic(0.3),
                              ClosedCopula::Frank(4.0), ClosedCopula::Joe(3.0)};
  const int g = 50;
  for (const auto& c : all) {
    for (int i = 0; i + 1 < g; ++i) {
      for (int j = 0; j + 1 < g; ++j) {
        const double a = static_cast<double>(i + 1) / g;
        const double b = static_cast<double>(i + 2) / g;
        const double x = static_cast<double>(j + 1) / g;
        const double y = static_cast<double>(j + 2) / g;
        const double rect = copulas::copula_cdf(c, b, y) - copulas::copula_cdf(c, a, y) -
                            copulas::copula_cdf(c, b, x) + copulas::copula_cdf(c, a, x);
        CHECK(rect >= -1e-12);
      }
    }
  }
}

TEST_CASE("copula samples have uniform margins") {
  RandomStream rng(555);
  const ClosedCopula all[] = {ClosedCopula::Gaussian(0.5), ClosedCopula::Logistic(0.4),
                              ClosedCopula::Frank(6.0), ClosedCopula::Frank(-6.0),
                              ClosedCopula::Joe(3.0)};
  for (const auto& c : all) {
    const PairMatrix u = copulas::copula_sample(c, 100000, rng);
    for (int j = 0; j < 2; ++j)
      CHECK(stat_test::ks_pass_1pct(stat_test::col(u, j), [](double x) { return x; }));
  }
}

TEST_CASE("logistic sample tail dependence matches 2 - 2^alpha") {
  RandomStream rng(808);
  const PairMatrix u = copulas::copula_sample(ClosedCopula::Logistic(0.4), 1000000, rng);
  const double level = 0.999;
  Eigen::Index joint = 0;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (u(i, 0) > level && u(i, 1) > level) ++joint;
  const double chi_hat =
      static_cast<double>(joint) / (static_cast<double>(u.rows()) * (1.0 - level));
  CHECK(std::fabs(chi_hat - (2.0 - std::pow(2.0, 0.4))) < 0.02);
}

TEST_CASE("Joe near independence has vanishing Kendall tau") {
  RandomStream rng(910);
  const PairMatrix u = copulas::copula_sample(ClosedCopula::Joe(1.0 + 1e-6), 100000, rng);
  CHECK(std::fabs(stat_test::kendall_tau(u)) < 0.02);
}

TEST_CASE("frank sign rotation gives negative dependence") {
  RandomStream rng(911);
  const PairMatrix u = copulas::copula_sample(ClosedCopula::Frank(-8.0), 50000, rng);
  CHECK(stat_test::kendall_tau(u) < -0.4);
  // Density quadrature over a lower-left box matches the cdf for beta < 0 too.
  const ClosedCopula fneg = ClosedCopula::Frank(-8.0);
  quad::Options opt;
  opt.rel_tol = 1e-9;
  const double mass = quad::gk2d_adaptive(
      [&](double a, double b) { return copulas::copula_density(fneg, a, b); }, 0.0, 0.3,
      0.0, 0.6, opt);
  CHECK(std::fabs(mass - copulas::copula_cdf(fneg, 0.3, 0.6)) < 1e-6);
}

TEST_CASE("gaussian residual eta") {
  CHECK(copulas::gaussian_residual_eta(0.0) == doctest::Approx(0.5));
  CHECK(copulas::gaussian_residual_eta(0.5) == doctest::Approx(0.75));
  CHECK(copulas::gaussian_residual_eta(1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(copulas::gaussian_residual_eta(1.0), ParamError);

  // Numerical check of eta = (1+rho)/2: first against the exact joint
  // survival from the bivariate normal cdf at increasingly deep levels (the
  // sub-asymptotic eta(u) must approach (1+rho)/2), then a coarse sampling
  // sanity check.
  const double rho = 0.5;
  double prev_gap = 1.0;
  for (double one_minus_u : {1e-4, 1e-8, 1e-12, 1e-16}) {
    // Joint survival beyond level u via radial symmetry: Phi2(-x,-x;rho).
    const double x = -special::norm_quantile(one_minus_u);
    const double surv = copulas::bivariate_normal_cdf(-x, -x, rho);
    const double eta_u = std::log(one_minus_u) / std::log(surv);
    const double gap = std::fabs(eta_u - copulas::gaussian_residual_eta(rho));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.02);

  RandomStream rng(777);
  const PairMatrix u = copulas::copula_sample(ClosedCopula::Gaussian(rho), 2000000, rng);
  const double level = 0.999;
  Eigen::Index joint = 0;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (u(i, 0) > level && u(i, 1) > level) ++joint;
  const double p_hat = static_cast<double>(joint) / static_cast<double>(u.rows());
  const double eta_hat = std::log(1.0 - level) / std::log(p_hat);
  CHECK(std::fabs(eta_hat - copulas::gaussian_residual_eta(rho)) < 0.08);
}
