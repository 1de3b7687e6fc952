#include "tailnet/quadrature.hpp"

#include "tailnet/common.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace tailnet::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleResult {
  double kronrod;
  double err;
};

RuleResult gk15(const Fn1& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const RuleResult r{resk * h, std::fabs((resk - resg) * h)};
  return r;
}

struct Interval {
  double a, b, value, err;
  int depth;
  bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace

double gk_adaptive(const Fn1& f, double a, double b, const Options& opt) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw QuadratureError("gk_adaptive requires a <= b");
  }
  // Globally adaptive: repeatedly bisect the interval with the worst error
  // estimate until the summed error meets the tolerance. Intervals that hit
  // max_depth stop contributing refinable error but keep their value.
  std::priority_queue<Interval> heap;
  double total = 0.0;
  double refinable_err = 0.0;
  double frozen_err = 0.0;
  auto admit = [&](double lo, double hi, const RuleResult& r, int depth) {
    total += r.kronrod;
    if (depth < opt.max_depth && (hi - lo) > 1e-300 && r.err > 1e-300) {
      heap.push({lo, hi, r.kronrod, r.err, depth});
      refinable_err += r.err;
    } else {
      frozen_err += r.err;
    }
  };
  admit(a, b, gk15(f, a, b), 0);
  const int max_iters = 20000;
  for (int it = 0; it < max_iters; ++it) {
    const double tol =
        std::max(opt.abs_tol, opt.rel_tol * std::max(std::fabs(total), 1e-30));
    if (refinable_err + frozen_err <= tol) return total;
    if (heap.empty()) break;
    const Interval worst = heap.top();
    heap.pop();
    total -= worst.value;
    refinable_err -= worst.err;
    const double m = 0.5 * (worst.a + worst.b);
    admit(worst.a, m, gk15(f, worst.a, m), worst.depth + 1);
    admit(m, worst.b, gk15(f, m, worst.b), worst.depth + 1);
  }
  throw QuadratureError("adaptive Gauss-Kronrod failed to converge");
}

double gk_segments(const Fn1& f, const std::vector<double>& breaks,
                   const Options& opt) {
  if (breaks.size() < 2) throw QuadratureError("gk_segments needs >= 2 breakpoints");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i] < breaks[i + 1])
      total += gk_adaptive(f, breaks[i], breaks[i + 1], opt);
  return total;
}

double gk_semi_infinite(const Fn1& f, double a, const Options& opt) {
  const Fn1 g = [&f, a](double t) {
    const double om = 1.0 - t;
    return f(a + t / om) / (om * om);
  };
  return gk_adaptive(g, 0.0, 1.0, opt);
}

double gk2d_cell(const Fn2& f, double ax, double bx, double ay, double by) {
  const double cx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double cy = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  double nodes[15], weights[15];
  for (int j = 0; j < 7; ++j) {
    nodes[j] = -kXgk[j];
    nodes[14 - j] = kXgk[j];
    weights[j] = weights[14 - j] = kWgk[j];
  }
  nodes[7] = 0.0;
  weights[7] = kWgk[7];
  double sum = 0.0;
  for (int i = 0; i < 15; ++i) {
    double row = 0.0;
    const double x = cx + hx * nodes[i];
    for (int j = 0; j < 15; ++j) row += weights[j] * f(x, cy + hy * nodes[j]);
    sum += weights[i] * row;
  }
  return sum * hx * hy;
}

namespace {

struct Cell {
  double ax, bx, ay, by, value, err;
  int depth;
  bool operator<(const Cell& o) const { return err < o.err; }
};

}  // namespace

double gk2d_adaptive(const Fn2& f, double ax, double bx, double ay, double by,
                     const Options& opt) {
  // Same globally adaptive strategy as gk_adaptive, with quadrant splits and
  // an error estimate from the refinement difference of each cell.
  std::priority_queue<Cell> heap;
  double total = 0.0;
  double refinable_err = 0.0;
  double frozen_err = 0.0;
  auto measure = [&f](double x0, double x1, double y0, double y1, int depth) {
    const double whole = gk2d_cell(f, x0, x1, y0, y1);
    const double mx = 0.5 * (x0 + x1), my = 0.5 * (y0 + y1);
    const double refined = gk2d_cell(f, x0, mx, y0, my) + gk2d_cell(f, mx, x1, y0, my) +
                           gk2d_cell(f, x0, mx, my, y1) + gk2d_cell(f, mx, x1, my, y1);
    return Cell{x0, x1, y0, y1, refined, std::fabs(refined - whole), depth};
  };
  auto admit = [&](const Cell& c) {
    total += c.value;
    if (c.depth < opt.max_depth && c.err > 1e-300) {
      heap.push(c);
      refinable_err += c.err;
    } else {
      frozen_err += c.err;
    }
  };
  admit(measure(ax, bx, ay, by, 0));
  const int max_iters = 20000;
  for (int it = 0; it < max_iters; ++it) {
    const double tol =
        std::max(opt.abs_tol, opt.rel_tol * std::max(std::fabs(total), 1e-30));
    if (refinable_err + frozen_err <= tol) return total;
    if (heap.empty()) break;
    const Cell worst = heap.top();
    heap.pop();
    total -= worst.value;
    refinable_err -= worst.err;
    const double mx = 0.5 * (worst.ax + worst.bx);
    const double my = 0.5 * (worst.ay + worst.by);
    admit(measure(worst.ax, mx, worst.ay, my, worst.depth + 1));
    admit(measure(mx, worst.bx, worst.ay, my, worst.depth + 1));
    admit(measure(worst.ax, mx, my, worst.by, worst.depth + 1));
    admit(measure(mx, worst.bx, my, worst.by, worst.depth + 1));
  }
  throw QuadratureError("adaptive 2D quadrature failed to converge");
}

}  // namespace tailnet::quad
