#ifndef TAILNET_INTERP_HPP
#define TAILNET_INTERP_HPP

#include "tailnet/common.hpp"

namespace tailnet::interp {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes). Built from
/// strictly increasing x with nondecreasing y; evaluation clamps to the grid
/// range. inverse() assumes strictly increasing y over the bracketing span.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(VectorXd x, VectorXd y);

  double operator()(double x) const;

  /// Derivative of the interpolant.
  double derivative(double x) const;

  /// x with interp(x) = y, bracketed bisection+Newton; tol on |interp(x)-y|.
  double inverse(double y, double tol = 1e-10) const;

  double x_min() const { return x_[0]; }
  double x_max() const { return x_[x_.size() - 1]; }
  double y_min() const { return y_[0]; }
  double y_max() const { return y_[y_.size() - 1]; }
  bool empty() const { return x_.size() == 0; }

 private:
  Eigen::Index segment(double x) const;

  VectorXd x_, y_, m_;
};

}  // namespace tailnet::interp

#endif  // TAILNET_INTERP_HPP
