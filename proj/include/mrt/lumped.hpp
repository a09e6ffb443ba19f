#pragma once

#include <string>
#include <vector>

#include "mrt/modal.hpp"

namespace mrt {

// Optional sink for non-fatal diagnostics ("warn" conditions). Callers that
// do not care pass nullptr.
using WarningList = std::vector<std::string>;

struct DriveCondition {
    double vdc = 0.0;          // dc bias, V
    double vi_amplitude = 0.0; // small-signal drive, V
};

// vdc must be positive; vi above vdc/10 appends a small-signal warning.
void validate(const DriveCondition& d, WarningList* warnings = nullptr);

// Mass-spring-damper equivalent seen at the disk perimeter.
struct LumpedMechanical {
    double m_eff = 0.0; // kg
    double k_eff = 0.0; // N/m
    double b_eff = 0.0; // kg/s
    double q = 0.0;
};

// Series-RLC motional branch reflected to the electrical ports, plus the
// static port capacitance and the transduction factor that produced it.
struct LumpedElectrical {
    double re = 0.0; // ohm
    double le = 0.0; // H
    double ce = 0.0; // F
    double n = 0.0;  // N/V
    double c0 = 0.0; // F
};

struct ElectrostaticForce {
    double static_force = 0.0;   // N, from the dc bias alone
    double force_per_volt = 0.0; // N/V of small-signal drive
};

// C0 = eps0 * phi * R * t / d0.
double static_capacitance(const DiskGeometry& g);

// dC/dr = (C0/d0) (1 - r/d0)^-2; the r=0 value is the usual approximation
// eps0 phi R t / d0^2. |r| must stay below the gap.
double cap_derivative(const DiskGeometry& g, double displacement = 0.0);

// F0 = 1/2 (dC/dr) Vdc^2 and Fi = Vdc (dC/dr) vi, linearized about r=0.
ElectrostaticForce electrostatic_force(const DiskGeometry& g, const DriveCondition& d);

// Zero-to-peak perimeter displacement Q*|F1|/k_eff; warns when the result
// leaves the small-signal region (> d0/10).
double peak_displacement(const ModeSolution& mode, const LumpedMechanical& mech,
                         const DiskGeometry& g, const DriveCondition& d,
                         WarningList* warnings = nullptr);

// Radial mode shape normalized to unit perimeter displacement:
// D(r)/D(R) = J1(h r)/J1(h R). Zero at the center (stem anchor point).
double mode_shape(const ModeSolution& mode, const DiskGeometry& g, double r);

// m_eff = pi rho t R^2 [1 - J0(hR) J2(hR) / J1(hR)^2]; self-checked against
// the kinetic-energy integral via the quadrature kernel (1e-6 relative).
double effective_mass(const Material& m, const DiskGeometry& g, const ModeSolution& mode);

// k_eff = omega0^2 m_eff (Rayleigh).
double effective_stiffness(const ModeSolution& mode, double m_eff);

// b_eff = omega0 m_eff / Q = sqrt(k_eff m_eff)/Q.
double damping_factor(const ModeSolution& mode, double m_eff, double q);

// Full mechanical extraction for a solved disk mode with a given Q.
LumpedMechanical extract_mechanical(const Material& m, const DiskGeometry& g,
                                    const ModeSolution& mode, double q);

// n_k = Vdc eps0 phi_k R t / d0^2.
double transduction_factor(const DiskGeometry& g, const DriveCondition& d,
                           double port_angle);

// Positive elements with b_eff = sqrt(k_eff m_eff)/Q to 1e-9 relative.
void validate(const LumpedMechanical& mech);

// Reflection through symmetric ports (n1 = n2 = n):
// Le = m/n^2, Ce = n^2/k, Re = b/n^2. n = 0 means the bias is off and the
// device is electrically dead (errc::device_off).
LumpedElectrical extract_rlc(const LumpedMechanical& mech, double n, double c0);

// Bias softening diagnostic: the motional capacitance with the transduction
// (electrical) stiffness retained, n^2/(k_eff - 2 k_electrical). The plain
// n^2/k_eff is the right value for these devices (the correction is parts
// per million); 2 k_electrical >= k_eff is the pull-in regime.
double motional_capacitance_with_electrical_stiffness(const LumpedMechanical& mech,
                                                      double n,
                                                      double electrical_stiffness);

// Closed-form polysilicon first-mode lump Re = 1.18e29/(Q Vdc^2) d0^4/(R t),
// valid for phi ~ pi and vacuum-gap transduction. Passing the material lets
// the routine warn when it is applied outside that regime.
double motional_resistance_formula(const DiskGeometry& g, double q, double vdc,
                                   const Material* m = nullptr,
                                   WarningList* warnings = nullptr);

// Resonant transconductance magnitude |io/vi| = Q w0 (dC1/dr)(dC2/dr) Vdc^2/k_eff.
// Equals 1/Re for symmetric ports. The two-electrode drive/sense configuration
// puts the output current 180 degrees out of phase with the input voltage.
double output_current(const ModeSolution& mode, const LumpedMechanical& mech,
                      const DiskGeometry& g, const DriveCondition& d,
                      double port_angle_1, double port_angle_2);

} // namespace mrt
