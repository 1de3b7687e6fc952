#ifndef TAILNET_SPECIAL_HPP
#define TAILNET_SPECIAL_HPP

namespace tailnet::special {

/// Standard normal cdf.
double norm_cdf(double x);

/// Standard normal pdf.
double norm_pdf(double x);

/// Standard normal quantile, AS241 (PPND16), absolute accuracy well below
/// 1e-9 everywhere on (0,1).
double norm_quantile(double p);

double lbeta(double a, double b);

/// Regularized incomplete beta I_x(a,b), Lentz continued fraction to 1e-12.
double inc_beta_reg(double x, double a, double b);

/// Inverse of inc_beta_reg in x for fixed (a,b).
double inc_beta_inv(double p, double a, double b);

}  // namespace tailnet::special

#endif  // TAILNET_SPECIAL_HPP
