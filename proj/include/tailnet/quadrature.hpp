#ifndef TAILNET_QUADRATURE_HPP
#define TAILNET_QUADRATURE_HPP

#include <functional>
#include <initializer_list>
#include <vector>

namespace tailnet::quad {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

struct Options {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_depth = 48;
};

/// Adaptive 15-point Gauss-Kronrod on [a,b]. Throws QuadratureError when the
/// local error cannot be driven below tolerance within max_depth bisections.
double gk_adaptive(const Fn1& f, double a, double b, const Options& opt = {});

/// Adaptive integration over consecutive segments delimited by breaks
/// (sorted, at least {a,b}); each segment integrated independently.
double gk_segments(const Fn1& f, const std::vector<double>& breaks,
                   const Options& opt = {});

/// Integral over [a, +inf) via the substitution x = a + t/(1-t).
double gk_semi_infinite(const Fn1& f, double a, const Options& opt = {});

/// Non-adaptive 15x15 tensor Gauss-Kronrod on a rectangle (Kronrod weights).
double gk2d_cell(const Fn2& f, double ax, double bx, double ay, double by);

/// Adaptive 2D integration by quadrant subdivision of gk2d_cell estimates.
double gk2d_adaptive(const Fn2& f, double ax, double bx, double ay, double by,
                     const Options& opt = {});

}  // namespace tailnet::quad

#endif  // TAILNET_QUADRATURE_HPP
