#include "mrt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mrt {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr long double kEulerGammaL = 0.57721566490153286060651209008240243L;

// Ascending series for J_n, accumulated in long double. Reliable wherever the
// peak term stays small enough that cancellation is below ~1e-13 absolute
// (x up to ~20 for n<=1; always fine for x < n).
long double jn_series(int n, long double x) {
    const long double half = 0.5L * x;
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= half / k; // (x/2)^n / n!
    const long double q = half * half;
    long double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (static_cast<long double>(k) * (k + n));
        sum += term;
        if (fabsl(term) < 1e-25L * (fabsl(sum) + 1e-30L)) break;
    }
    return sum;
}

// Hankel asymptotic amplitude series P, Q for order n, summed to optimal
// truncation. Truncation error ~ e^{-2x}, i.e. < 4e-11 at the x=12 switch.
void hankel_pq(int n, long double x, long double& p, long double& q) {
    const long double mu = 4.0L * n * n;
    const long double inv8x = 1.0L / (8.0L * x);
    p = 1.0L;
    q = 0.0L;
    long double term = 1.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int m = 1; m < 80; ++m) {
        const long double odd = 2.0L * m - 1.0L;
        term *= (mu - odd * odd) * inv8x / m;
        if (fabsl(term) >= prev) break; // divergence onset: stop at smallest term
        prev = fabsl(term);
        const int cycle = m % 4; // sign pattern: Q+, P-, Q-, P+
        if (cycle == 1) q += term;
        else if (cycle == 2) p -= term;
        else if (cycle == 3) q -= term;
        else p += term;
        if (fabsl(term) < 1e-22L) break;
    }
}

long double bessel_j_asymptotic(int n, long double x) {
    long double p, q;
    hankel_pq(n, x, p, q);
    const long double chi = x - (0.5L * n + 0.25L) * kPiL;
    return sqrtl(2.0L / (kPiL * x)) * (p * cosl(chi) - q * sinl(chi));
}

long double bessel_y_asymptotic(int n, long double x) {
    long double p, q;
    hankel_pq(n, x, p, q);
    const long double chi = x - (0.5L * n + 0.25L) * kPiL;
    return sqrtl(2.0L / (kPiL * x)) * (p * sinl(chi) + q * cosl(chi));
}

// Y0 and Y1 ascending series (logarithmic + harmonic-number sums).
long double y0_series(long double x) {
    const long double q = 0.25L * x * x;
    long double term = 1.0L; // q^k / (k!)^2 at k=0
    long double hk = 0.0L;
    long double sum = 0.0L;
    long double sign = 1.0L;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        hk += 1.0L / k;
        const long double contrib = sign * hk * term;
        sum += contrib;
        if (fabsl(contrib) < 1e-25L * (fabsl(sum) + 1e-30L)) break;
        sign = -sign;
    }
    const long double j0 = jn_series(0, x);
    return (2.0L / kPiL) * ((logl(0.5L * x) + kEulerGammaL) * j0 + sum);
}

long double y1_series(long double x) {
    const long double q = 0.25L * x * x;
    long double term = 0.5L * x; // (x/2)^{2k+1} / (k!(k+1)!) at k=0
    long double hk = 0.0L, hk1 = 1.0L;
    long double sum = term * (hk + hk1);
    long double sign = -1.0L;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<long double>(k) * (k + 1));
        hk += 1.0L / k;
        hk1 += 1.0L / (k + 1);
        const long double contrib = sign * (hk + hk1) * term;
        sum += contrib;
        if (fabsl(contrib) < 1e-25L * (fabsl(sum) + 1e-30L)) break;
        sign = -sign;
    }
    const long double j1 = jn_series(1, x);
    return (2.0L / kPiL) * (logl(0.5L * x) + kEulerGammaL) * j1
           - 2.0L / (kPiL * x) - (1.0L / kPiL) * sum;
}

constexpr double kAsymptoticSwitch = 12.0;

} // namespace

double bessel_j(int order, double x) {
    if (order < 0 || order > 8)
        raise(errc::domain, "bessel_j: order must be in 0..8, got " + std::to_string(order));
    if (!(x >= 0.0) || x > 100.0)
        raise(errc::domain, "bessel_j: x must satisfy 0 <= x <= 100, got " + std::to_string(x));

    if (x == 0.0) return order == 0 ? 1.0 : 0.0;

    const long double xl = x;
    if (x < kAsymptoticSwitch) {
        if (order <= 1) return static_cast<double>(jn_series(order, xl));
        if (x <= order) return static_cast<double>(jn_series(order, xl));
        // upward recurrence, stable for x > order
        long double jm1 = jn_series(0, xl);
        long double j = jn_series(1, xl);
        for (int k = 1; k < order; ++k) {
            const long double jp1 = (2.0L * k / xl) * j - jm1;
            jm1 = j;
            j = jp1;
        }
        return static_cast<double>(j);
    }

    if (order == 0) return static_cast<double>(bessel_j_asymptotic(0, xl));
    if (order == 1) return static_cast<double>(bessel_j_asymptotic(1, xl));
    long double jm1 = bessel_j_asymptotic(0, xl);
    long double j = bessel_j_asymptotic(1, xl);
    for (int k = 1; k < order; ++k) { // x >= 12 > order: stable
        const long double jp1 = (2.0L * k / xl) * j - jm1;
        jm1 = j;
        j = jp1;
    }
    return static_cast<double>(j);
}

double bessel_y(int order, double x) {
    if (order != 0 && order != 1)
        raise(errc::domain, "bessel_y: order must be 0 or 1, got " + std::to_string(order));
    if (!(x > 0.0))
        raise(errc::domain, "bessel_y: x must be positive, got " + std::to_string(x));
    if (x < 1e-6)
        raise(errc::domain, "bessel_y: x below 1e-6 is inside the logarithmic "
                            "singularity region, got " + std::to_string(x));

    const long double xl = x;
    if (x < kAsymptoticSwitch)
        return static_cast<double>(order == 0 ? y0_series(xl) : y1_series(xl));
    return static_cast<double>(bessel_y_asymptotic(order, xl));
}

RootResult find_root(const std::function<double(double)>& f, Bracket bracket,
                     double tol) {
    if (!(bracket.lo < bracket.hi))
        raise(errc::domain, "find_root: bracket.lo must be < bracket.hi");
    if (!(tol > 0.0)) raise(errc::domain, "find_root: tol must be positive");

    constexpr int kMaxIter = 200;
    const double eps = std::numeric_limits<double>::epsilon();

    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if ((fa > 0.0) == (fb > 0.0))
        raise(errc::no_sign_change, "find_root: no sign change across bracket ["
                                    + std::to_string(a) + ", " + std::to_string(b) + "]");

    // Brent (1973): b is the current best iterate, a the previous, c keeps the
    // bracket with fb*fc < 0.
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b)
                            + 0.5 * tol * std::max(1.0, std::fabs(b));
        const double xm = 0.5 * (c - b);
        if (std::fabs(fb) <= tol) return {b, fb, iter};
        if (std::fabs(xm) <= tol1) {
            // Width criterion met but the residual is still above tol: polish
            // by bisection so RootResult's residual bound holds for smooth f.
            double lo = std::min(b, c), hi = std::max(b, c);
            double flo = (lo == b) ? fb : fc;
            int extra = 0;
            while (std::fabs(fb) > tol && hi - lo > 4.0 * eps * std::max(1.0, std::fabs(b))
                   && extra < 80) {
                const double mid = 0.5 * (lo + hi);
                const double fmid = f(mid);
                ++extra;
                if (std::fabs(fmid) < std::fabs(fb)) { b = mid; fb = fmid; }
                if (fmid == 0.0) break;
                if ((fmid > 0.0) == (flo > 0.0)) { lo = mid; flo = fmid; }
                else hi = mid;
            }
            return {b, fb, iter + extra};
        }

        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // attempt inverse quadratic / secant interpolation
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm; e = d; // interpolation rejected: bisect
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (fb == 0.0) return {b, 0.0, iter};
    }
    raise(errc::no_convergence, "find_root: no convergence in 200 iterations");
}

std::vector<double> find_roots_ascending(const std::function<double(double)>& f,
                                         double x_start, double x_end,
                                         std::size_t n, double tol) {
    if (!(x_start < x_end))
        raise(errc::domain, "find_roots_ascending: x_start must be < x_end");
    if (n == 0) return {};

    constexpr int kScanSteps = 2048;
    const double step = (x_end - x_start) / kScanSteps;

    std::vector<double> roots;
    double x_prev = x_start;
    double f_prev = f(x_prev);
    for (int i = 1; i <= kScanSteps && roots.size() < n; ++i) {
        const double x = (i == kScanSteps) ? x_end : x_start + i * step;
        const double fx = f(x);
        if (f_prev == 0.0) {
            if (roots.empty() || x_prev > roots.back() + 1e-9 * step)
                roots.push_back(x_prev);
        } else if ((f_prev > 0.0) != (fx > 0.0)) {
            const RootResult r = find_root(f, {x_prev, x}, tol);
            if (roots.empty() || r.x > roots.back() + 1e-9 * step)
                roots.push_back(r.x);
        }
        x_prev = x;
        f_prev = fx;
    }
    if (roots.size() < n)
        raise(errc::insufficient_roots,
              "find_roots_ascending: found " + std::to_string(roots.size())
              + " of " + std::to_string(n) + " requested roots in ["
              + std::to_string(x_start) + ", " + std::to_string(x_end) + "]");
    return roots;
}

namespace {

// 15-point Kronrod nodes with Kronrod and embedded 7-point Gauss weights.
struct GkNode { double x, wg, wk; };
constexpr GkNode kGk15[8] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kGk15[0].wg * f0;
    k15 = kGk15[0].wk * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hl * kGk15[i].x;
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kGk15[i].wg * fi;
        k15 += kGk15[i].wk * fi;
    }
    g7 *= hl;
    k15 *= hl;
    err = std::fabs(k15 - g7);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(a < b)) raise(errc::domain, "integrate: requires a < b");
    if (!(rel_tol > 0.0)) raise(errc::domain, "integrate: rel_tol must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        raise(errc::domain, "integrate: endpoints must be finite");

    constexpr int kMaxIntervals = 4096;
    struct Interval { double a, b; };
    std::vector<Interval> stack;
    stack.push_back({a, b});

    // First pass to get a magnitude scale for the relative test.
    double scale_k, scale_e;
    gk15(f, a, b, scale_k, scale_e);
    const double abs_floor = 1e-300;

    double sum = 0.0;
    int processed = 0;
    double scale = std::fabs(scale_k);
    while (!stack.empty()) {
        if (++processed > kMaxIntervals)
            raise(errc::no_convergence, "integrate: refinement cap ("
                  + std::to_string(kMaxIntervals) + " intervals) exhausted");
        const Interval iv = stack.back();
        stack.pop_back();
        double k15, err;
        gk15(f, iv.a, iv.b, k15, err);
        scale = std::max(scale, std::fabs(sum) + std::fabs(k15));
        const double width_frac = (iv.b - iv.a) / (b - a);
        if (err <= rel_tol * std::max(std::fabs(k15), scale * width_frac)
            || err <= abs_floor
            || (iv.b - iv.a) < 64.0 * std::numeric_limits<double>::epsilon()
                               * std::max(std::fabs(iv.a), std::fabs(iv.b))) {
            sum += k15;
            continue;
        }
        const double mid = 0.5 * (iv.a + iv.b);
        stack.push_back({iv.a, mid});
        stack.push_back({mid, iv.b});
    }
    return sum;
}

} // namespace mrt
