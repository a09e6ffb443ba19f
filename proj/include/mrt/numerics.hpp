#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mrt/error.hpp"

namespace mrt {

// Default relative tolerance used by the solvers unless the caller overrides.
inline constexpr double kDefaultTol = 1e-10;

// Sign-change interval handed to find_root. lo < hi and f(lo)*f(hi) <= 0.
struct Bracket {
    double lo;
    double hi;
};

struct RootResult {
    double x;        // located root, inside the original bracket
    double residual; // f(x) at the returned point
    int iterations;
};

// Bessel function of the first kind, integer order 0..8, 0 <= x <= 100.
// Ascending series below x=12, Hankel asymptotic expansion beyond; orders
// 2+ by upward recurrence where it is stable (x > order), otherwise by the
// direct series. Absolute error <= 1e-10 over the supported domain.
double bessel_j(int order, double x);

// Bessel function of the second kind, order 0 or 1, x > 0. The logarithmic
// singularity makes values below x=1e-6 meaningless at fixed precision, so
// that region is rejected as a domain error. Absolute error <= 1e-9 on
// (0.05, 100).
double bessel_y(int order, double x);

// Brent's method: inverse-quadratic/secant steps with a guaranteed bisection
// fallback. Stops when |f(x)| <= tol or the interval shrinks below
// tol*max(1,|x|). Caps at 200 iterations.
RootResult find_root(const std::function<double(double)>& f, Bracket bracket,
                     double tol = kDefaultTol);

// First n roots of f in (x_start, x_end), ascending. Sign changes are
// isolated on a (x_end-x_start)/2048 grid and polished with find_root.
// Throws errc::insufficient_roots (reporting how many were found) when the
// interval holds fewer than n.
std::vector<double> find_roots_ascending(const std::function<double(double)>& f,
                                         double x_start, double x_end,
                                         std::size_t n,
                                         double tol = kDefaultTol);

// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b] to the given
// relative tolerance. Throws errc::no_convergence if the subdivision budget
// is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = kDefaultTol);

} // namespace mrt
