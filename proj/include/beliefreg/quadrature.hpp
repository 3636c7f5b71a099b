// Globally adaptive Gauss-Kronrod (7/15) quadrature for smooth integrands
// with a small fixed number of components.

#ifndef BELIEFREG_QUADRATURE_HPP
#define BELIEFREG_QUADRATURE_HPP

#include <array>
#include <cstddef>
#include <functional>

namespace beliefreg {

using Vec2 = std::array<double, 2>;

struct QuadResult {
  Vec2 value{0.0, 0.0};
  Vec2 error{0.0, 0.0};
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Integrates f over [a, b]; either bound may be infinite. Segments are
/// bisected, largest error first, until the summed error estimate of every
/// component is at most `tol` or `max_segments` is reached.
QuadResult integrate(const std::function<Vec2(double)>& f, double a, double b, double tol,
                     std::size_t max_segments = 2000);

/// Scalar convenience wrapper.
double integrate_scalar(const std::function<double(double)>& f, double a, double b, double tol,
                        double* error = nullptr);

}  // namespace beliefreg

#endif  // BELIEFREG_QUADRATURE_HPP
