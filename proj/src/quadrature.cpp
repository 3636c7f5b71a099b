#include "beliefreg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace beliefreg {

namespace {

// Kronrod abscissae and weights (15 points) with the embedded Gauss
// weights (7 points); nodes are symmetric about 0.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Vec2 value, error;
  double priority() const { return std::max(error[0], error[1]); }
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const { return x.priority() < y.priority(); }
};

Segment gk15(const std::function<Vec2(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Vec2 kron{0, 0}, gauss{0, 0};
  const Vec2 fc = f(c);
  for (int k = 0; k < 2; ++k) {
    kron[k] = kWgk[7] * fc[k];
    gauss[k] = kWg[3] * fc[k];
  }
  for (int j = 0; j < 7; ++j) {
    const Vec2 f1 = f(c - h * kXgk[j]);
    const Vec2 f2 = f(c + h * kXgk[j]);
    for (int k = 0; k < 2; ++k) {
      kron[k] += kWgk[j] * (f1[k] + f2[k]);
      // Odd Kronrod nodes are the Gauss nodes.
      if (j % 2 == 1) gauss[k] += kWg[j / 2] * (f1[k] + f2[k]);
    }
  }
  Segment s{a, b, {0, 0}, {0, 0}};
  for (int k = 0; k < 2; ++k) {
    s.value[k] = kron[k] * h;
    s.error[k] = std::abs((kron[k] - gauss[k]) * h);
    if (!std::isfinite(s.value[k])) s.error[k] = std::numeric_limits<double>::infinity();
  }
  return s;
}

QuadResult integrate_finite(const std::function<Vec2(double)>& f, double a, double b, double tol,
                            std::size_t max_segments) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  heap.push(gk15(f, a, b));
  out.evaluations = 15;
  auto totals = [&]() {
    Vec2 v{0, 0}, e{0, 0};
    auto copy = heap;
    while (!copy.empty()) {
      const Segment& s = copy.top();
      for (int k = 0; k < 2; ++k) {
        v[k] += s.value[k];
        e[k] += s.error[k];
      }
      copy.pop();
    }
    return std::pair{v, e};
  };
  Vec2 err = heap.top().error;
  while (std::max(err[0], err[1]) > tol) {
    if (heap.size() >= max_segments) {
      out.converged = false;
      break;
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;  // interval can no longer be split
      break;
    }
    heap.pop();
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    for (int k = 0; k < 2; ++k) {
      err[k] += left.error[k] + right.error[k] - worst.error[k];
    }
    heap.push(left);
    heap.push(right);
    // Running sums drift; recompute them now and then.
    if (heap.size() % 64 == 0) err = totals().second;
  }
  auto [v, e] = totals();
  out.value = v;
  out.error = e;
  if (!std::isfinite(v[0]) || !std::isfinite(v[1])) out.converged = false;
  return out;
}

}  // namespace

QuadResult integrate(const std::function<Vec2(double)>& f, double a, double b, double tol,
                     std::size_t max_segments) {
  if (a > b) {
    QuadResult r = integrate(f, b, a, tol, max_segments);
    r.value = {-r.value[0], -r.value[1]};
    return r;
  }
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return integrate_finite(f, a, b, tol, max_segments);
  auto scaled = [](const Vec2& v, double w) { return Vec2{v[0] * w, v[1] * w}; };
  if (lo_inf && hi_inf) {
    // x = t / (1 - t^2), t in (-1, 1)
    auto g = [&](double t) {
      const double d = 1.0 - t * t;
      const double x = t / d;
      return scaled(f(x), (1.0 + t * t) / (d * d));
    };
    return integrate_finite(g, -1.0, 1.0, tol, max_segments);
  }
  if (hi_inf) {
    // x = a + t / (1 - t), t in [0, 1)
    auto g = [&](double t) {
      const double d = 1.0 - t;
      return scaled(f(a + t / d), 1.0 / (d * d));
    };
    return integrate_finite(g, 0.0, 1.0, tol, max_segments);
  }
  // x = b - t / (1 - t)
  auto g = [&](double t) {
    const double d = 1.0 - t;
    return scaled(f(b - t / d), 1.0 / (d * d));
  };
  return integrate_finite(g, 0.0, 1.0, tol, max_segments);
}

double integrate_scalar(const std::function<double(double)>& f, double a, double b, double tol,
                        double* error) {
  QuadResult r = integrate([&](double x) { return Vec2{f(x), 0.0}; }, a, b, tol);
  if (error) *error = r.error[0];
  return r.value[0];
}

}  // namespace beliefreg
