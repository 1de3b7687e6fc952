#include "tailnet/interp.hpp"

#include <algorithm>
#include <cmath>

namespace tailnet::interp {

MonotoneCubic::MonotoneCubic(VectorXd x, VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 2 || y_.size() != n)
    throw SizeError("MonotoneCubic needs matching x,y with >= 2 points");
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(x_[i] < x_[i + 1])) throw DomainError("MonotoneCubic x not increasing");
    if (y_[i + 1] < y_[i]) throw DomainError("MonotoneCubic y decreasing");
  }
  // Fritsch-Carlson monotone slopes.
  VectorXd d(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  m_ = VectorXd(n);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double a = m_[i] / d[i];
    const double b = m_[i + 1] / d[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m_[i] = t * a * d[i];
      m_[i + 1] = t * b * d[i];
    }
  }
}

Eigen::Index MonotoneCubic::segment(double x) const {
  const auto* begin = x_.data();
  const auto* end = begin + x_.size();
  auto it = std::upper_bound(begin, end, x);
  Eigen::Index i = std::distance(begin, it) - 1;
  return std::clamp<Eigen::Index>(i, 0, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_[0]) return y_[0];
  if (x >= x_[x_.size() - 1]) return y_[y_.size() - 1];
  const Eigen::Index i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x <= x_[0] || x >= x_[x_.size() - 1]) return 0.0;
  const Eigen::Index i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6.0 * t2 - 6.0 * t) / h;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  return dh00 * y_[i] + dh10 * m_[i] + dh01 * y_[i + 1] + dh11 * m_[i + 1];
}

double MonotoneCubic::inverse(double y, double tol) const {
  if (y <= y_[0]) return x_[0];
  if (y >= y_[y_.size() - 1]) return x_[x_.size() - 1];
  const auto* begin = y_.data();
  const auto* end = begin + y_.size();
  auto it = std::upper_bound(begin, end, y);
  Eigen::Index i = std::clamp<Eigen::Index>(std::distance(begin, it) - 1, 0,
                                            y_.size() - 2);
  double lo = x_[i], hi = x_[i + 1];
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = (*this)(x)-y;
    if (std::fabs(f) <= tol) return x;
    if (f > 0.0) hi = x; else lo = x;
    const double df = derivative(x);
    double next = (df > 0.0) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace tailnet::interp
