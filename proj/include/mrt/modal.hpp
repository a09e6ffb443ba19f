#pragma once

#include <optional>

#include "mrt/constants.hpp"
#include "mrt/materials.hpp"

namespace mrt {

// All geometry in SI meters / radians.

struct DiskGeometry {
    double radius = 0.0;         // R
    double thickness = 0.0;      // t
    double gap = 0.0;            // d0, electrode-to-disk spacing
    double electrode_angle = kPi; // phi, angular coverage per port
    double stem_radius = 0.0;    // informational
};

struct BeamGeometry {
    double length = 0.0;          // Lr
    double width = 0.0;           // Wr
    double thickness = 0.0;       // h
    double gap = 0.0;             // d0
    double electrode_width = 0.0; // We
    double kappa = 1.0;           // surface-topography scaling factor
};

struct PlateGeometry {
    double side = 0.0;      // L
    double thickness = 0.0; // h
    double gap = 0.0;       // d0
};

struct RingGeometry {
    double inner_radius = 0.0;   // r_i
    double outer_radius = 0.0;   // r_o
    double thickness = 0.0;      // t
    double support_length = 0.0; // Ls, informational here
    double gap = 0.0;            // d0
};

void validate(const DiskGeometry& g);
void validate(const BeamGeometry& g);
void validate(const PlateGeometry& g);
void validate(const RingGeometry& g);

// One solved vibration mode. For the Bessel-type solvers frequency_parameter
// is the dimensionless root (h*R for disks, h*r_o for rings), wavenumber is
// h itself, and wavenumber_zeta the shear-scaled variable; the closed-form
// beam/plate modes carry zeros in those fields.
struct ModeSolution {
    int mode_index = 1;
    double frequency_parameter = 0.0; // lambda_i
    double f0 = 0.0;                  // Hz
    double omega0 = 0.0;              // rad/s
    double wavenumber = 0.0;          // h, 1/m
    double wavenumber_zeta = 0.0;     // dimensionless
};

// i-th ascending root of the radial-contour characteristic equation
// x*J0(x) = (1-poisson)*J1(x), residual <= 1e-10. Modes 1..8.
double disk_lambda(double poisson, int mode_index);

// Radial-contour (breathing) disk mode: f0 = lambda_i/(2 pi R) * sqrt(E/(rho(1-s^2))).
ModeSolution disk_radial_f0(const Material& m, const DiskGeometry& g, int mode_index = 1);

// Wine-glass (elliptical, n=2) disk mode: lowest root of the two-factor
// compound characteristic in the shear-scaled variable zeta.
ModeSolution wineglass_f0(const Material& m, const DiskGeometry& g);

// Clamped-clamped flexural beam. With bias and a caller-supplied mechanical
// stiffness the electrical-stiffness ratio uses the uniform-gap expression
// ke/km = Vp^2 eps0 Wr We/(d0^3 km); ke/km >= 1 raises errc::pull_in.
ModeSolution ccbeam_f0(const Material& m, const BeamGeometry& g,
                       double vdc = 0.0, std::optional<double> km = std::nullopt);

// Square-plate extensional bulk mode: f0 = (1/2L) sqrt(E/rho).
ModeSolution square_extensional_f0(const Material& m, const PlateGeometry& g);

// Square-plate flexural mode: f0 = (20.56/2pi)(h/L^2) sqrt(E/(12 rho (1-s^2))).
ModeSolution square_flexural_f0(const Material& m, const PlateGeometry& g);

// Radial contour modes of a free-free annulus: ascending roots of the
// cross-product characteristic in u = h*r_o. The published GHz hollow-disk
// devices operate in the third mode of this family (the first two are the
// ring-breathing and half-wave width modes).
ModeSolution ring_contour_f0(const Material& m, const RingGeometry& g, int mode_index = 1);

// Quarter-wave support sizing from f0 = n/(4 Ls) sqrt(E/rho), solved for Ls.
double ring_support_length(const Material& m, double f0_hz, int n = 1);

} // namespace mrt
