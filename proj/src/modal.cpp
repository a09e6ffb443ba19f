#include "mrt/modal.hpp"

#include <cmath>
#include <string>

#include "mrt/numerics.hpp"

namespace mrt {

namespace {

constexpr double kFreqWindowLo = 1e3;  // Hz
constexpr double kFreqWindowHi = 20e9; // Hz

// x*J0(x) - (1-s)*J1(x): radial-contour characteristic, also the stress-free
// boundary factor of the ring equation.
double radial_char(double x, double poisson) {
    return x * bessel_j(0, x) - (1.0 - poisson) * bessel_j(1, x);
}

double radial_char_y(double x, double poisson) {
    return x * bessel_y(0, x) - (1.0 - poisson) * bessel_y(1, x);
}

// Plate (dilatational) wave speed sqrt(E/(rho(1-s^2))).
double plate_velocity(const Material& m) {
    return std::sqrt(m.youngs_modulus / (m.density * (1.0 - m.poisson * m.poisson)));
}

ModeSolution closed_form_mode(double f0) {
    ModeSolution sol;
    sol.f0 = f0;
    sol.omega0 = 2.0 * kPi * f0;
    return sol;
}

} // namespace

void validate(const DiskGeometry& g) {
    if (!(g.radius > 0.0)) raise(errc::invariant, "disk: radius must be > 0");
    if (!(g.thickness > 0.0)) raise(errc::invariant, "disk: thickness must be > 0");
    if (!(g.gap > 0.0)) raise(errc::invariant, "disk: gap must be > 0");
    if (!(g.gap < 0.1 * g.radius))
        raise(errc::invariant, "disk: gap must be small against the radius (d0 < R/10)");
    if (!(g.electrode_angle > 0.0 && g.electrode_angle <= kPi))
        raise(errc::invariant, "disk: electrode_angle must lie in (0, pi]");
    if (g.stem_radius < 0.0) raise(errc::invariant, "disk: stem_radius must be >= 0");
}

void validate(const BeamGeometry& g) {
    if (!(g.length > 0.0) || !(g.width > 0.0) || !(g.thickness > 0.0))
        raise(errc::invariant, "beam: length, width and thickness must be > 0");
    if (!(g.length > g.width)) raise(errc::invariant, "beam: length must exceed width");
    if (!(g.gap > 0.0)) raise(errc::invariant, "beam: gap must be > 0");
    if (g.electrode_width < 0.0 || g.electrode_width > g.length)
        raise(errc::invariant, "beam: electrode_width must lie in [0, length]");
    if (!(g.kappa > 0.0 && g.kappa <= 1.2))
        raise(errc::invariant, "beam: kappa must lie in (0, 1.2]");
}

void validate(const PlateGeometry& g) {
    if (!(g.side > 0.0) || !(g.thickness > 0.0))
        raise(errc::invariant, "plate: side and thickness must be > 0");
    if (g.gap < 0.0) raise(errc::invariant, "plate: gap must be >= 0");
}

void validate(const RingGeometry& g) {
    if (!(g.inner_radius > 0.0) || !(g.outer_radius > g.inner_radius))
        raise(errc::invariant, "ring: requires 0 < inner_radius < outer_radius");
    if (!(g.thickness > 0.0)) raise(errc::invariant, "ring: thickness must be > 0");
    if (g.support_length < 0.0) raise(errc::invariant, "ring: support_length must be >= 0");
    if (g.gap < 0.0) raise(errc::invariant, "ring: gap must be >= 0");
}

double disk_lambda(double poisson, int mode_index) {
    if (!(poisson >= 0.0 && poisson < 0.5))
        raise(errc::domain, "disk_lambda: poisson must lie in [0, 0.5)");
    if (mode_index < 1 || mode_index > 8)
        raise(errc::domain, "disk_lambda: mode_index must lie in 1..8");

    const auto f = [poisson](double x) { return radial_char(x, poisson); };
    const auto roots = find_roots_ascending(f, 0.05, 30.0,
                                            static_cast<std::size_t>(mode_index));
    const double root = roots[mode_index - 1];
    if (std::fabs(radial_char(root, poisson)) > 1e-10)
        raise(errc::no_convergence, "disk_lambda: residual above 1e-10 at mode "
              + std::to_string(mode_index));
    return root;
}

ModeSolution disk_radial_f0(const Material& m, const DiskGeometry& g, int mode_index) {
    validate(m);
    validate(g);
    const double lambda = disk_lambda(m.poisson, mode_index);
    const double xi = std::sqrt(2.0 / (1.0 - m.poisson));
    ModeSolution sol;
    sol.mode_index = mode_index;
    sol.frequency_parameter = lambda;
    sol.f0 = lambda / (2.0 * kPi * g.radius) * plate_velocity(m);
    sol.omega0 = 2.0 * kPi * sol.f0;
    sol.wavenumber = lambda / g.radius;
    sol.wavenumber_zeta = lambda * xi;
    return sol;
}

ModeSolution wineglass_f0(const Material& m, const DiskGeometry& g) {
    validate(m);
    validate(g);
    const double s = m.poisson;
    const double xi = std::sqrt(2.0 / (1.0 - s));

    // Two-factor n=2 compound characteristic, cleared of the J2 denominators:
    //   A(zeta/xi) * A(zeta) = (2q-2)^2 J2(zeta/xi) J2(zeta),
    //   A(x) = x J1(x) - (2+q) J2(x),  q = zeta^2/6.
    const auto cleared = [xi](double zeta) {
        const double q = zeta * zeta / 6.0;
        const auto a = [q](double x) {
            return x * bessel_j(1, x) - (2.0 + q) * bessel_j(2, x);
        };
        const double zx = zeta / xi;
        return a(zx) * a(zeta)
               - (2.0 * q - 2.0) * (2.0 * q - 2.0) * bessel_j(2, zx) * bessel_j(2, zeta);
    };

    const double shear_velocity = std::sqrt(m.youngs_modulus / (2.0 * m.density * (1.0 + s)));
    const double zeta_of_f = 2.0 * kPi * g.radius / shear_velocity; // zeta per Hz
    const double zeta_hi = std::min(kFreqWindowHi * zeta_of_f, 40.0);
    if (!(zeta_hi > 0.2))
        raise(errc::domain, "wineglass_f0: search window is empty for this geometry");

    const double zeta = find_roots_ascending(cleared, 0.2, zeta_hi, 1)[0];
    ModeSolution sol;
    sol.mode_index = 1;
    sol.frequency_parameter = zeta / xi;
    sol.f0 = zeta / zeta_of_f;
    sol.omega0 = 2.0 * kPi * sol.f0;
    sol.wavenumber = sol.frequency_parameter / g.radius;
    sol.wavenumber_zeta = zeta;
    return sol;
}

ModeSolution ccbeam_f0(const Material& m, const BeamGeometry& g,
                       double vdc, std::optional<double> km) {
    validate(m);
    validate(g);
    if (vdc < 0.0) raise(errc::domain, "ccbeam_f0: vdc must be >= 0");

    double stiffness_ratio = 0.0; // ke/km, uniform-gap form
    if (vdc > 0.0 && km.has_value()) {
        if (!(*km > 0.0)) raise(errc::domain, "ccbeam_f0: km must be > 0 when given");
        stiffness_ratio = vdc * vdc * kEpsilon0 * g.width * g.electrode_width
                          / (g.gap * g.gap * g.gap * *km);
        if (stiffness_ratio >= 1.0)
            raise(errc::pull_in, "ccbeam_f0: electrical stiffness reaches the "
                                 "mechanical stiffness (ke/km = "
                                 + std::to_string(stiffness_ratio) + "), pull-in regime");
    }
    const double f0 = 1.03 * g.kappa * std::sqrt(m.youngs_modulus / m.density)
                      * g.thickness / (g.length * g.length)
                      * std::sqrt(1.0 - stiffness_ratio);
    return closed_form_mode(f0);
}

ModeSolution square_extensional_f0(const Material& m, const PlateGeometry& g) {
    validate(m);
    validate(g);
    return closed_form_mode(std::sqrt(m.youngs_modulus / m.density) / (2.0 * g.side));
}

ModeSolution square_flexural_f0(const Material& m, const PlateGeometry& g) {
    validate(m);
    validate(g);
    const double f0 = 20.56 / (2.0 * kPi) * g.thickness / (g.side * g.side)
                      * std::sqrt(m.youngs_modulus
                                  / (12.0 * m.density * (1.0 - m.poisson * m.poisson)));
    return closed_form_mode(f0);
}

ModeSolution ring_contour_f0(const Material& m, const RingGeometry& g, int mode_index) {
    validate(m);
    validate(g);
    if (mode_index < 1 || mode_index > 8)
        raise(errc::domain, "ring_contour_f0: mode_index must lie in 1..8");

    const double s = m.poisson;
    const double beta = g.inner_radius / g.outer_radius;
    // Stress-free inner and outer boundaries, u = h*r_o:
    //   S_J(beta u) S_Y(u) - S_Y(beta u) S_J(u) = 0.
    const auto cross = [s, beta](double u) {
        return radial_char(beta * u, s) * radial_char_y(u, s)
               - radial_char_y(beta * u, s) * radial_char(u, s);
    };

    const double u_of_f = 2.0 * kPi * g.outer_radius / plate_velocity(m); // u per Hz
    // Y-series domain floor (x >= 1e-6) on the inner-radius argument.
    const double u_lo = std::max(kFreqWindowLo * u_of_f, 1.000001e-6 / beta);
    const double u_hi = std::min(kFreqWindowHi * u_of_f, 60.0);
    if (!(u_hi > u_lo))
        raise(errc::domain, "ring_contour_f0: search window is empty for this geometry");

    const auto roots = find_roots_ascending(cross, u_lo, u_hi,
                                            static_cast<std::size_t>(mode_index));
    const double u = roots[mode_index - 1];
    const double xi = std::sqrt(2.0 / (1.0 - s));
    ModeSolution sol;
    sol.mode_index = mode_index;
    sol.frequency_parameter = u;
    sol.f0 = u / u_of_f;
    sol.omega0 = 2.0 * kPi * sol.f0;
    sol.wavenumber = u / g.outer_radius;
    sol.wavenumber_zeta = u * xi;
    return sol;
}

double ring_support_length(const Material& m, double f0_hz, int n) {
    validate(m);
    if (!(f0_hz > 0.0)) raise(errc::domain, "ring_support_length: f0 must be > 0");
    if (n < 1) raise(errc::domain, "ring_support_length: n must be >= 1");
    return n * std::sqrt(m.youngs_modulus / m.density) / (4.0 * f0_hz);
}

} // namespace mrt
