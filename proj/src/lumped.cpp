#include "mrt/lumped.hpp"

#include <cmath>
#include <string>

#include "mrt/numerics.hpp"

namespace mrt {

namespace {

void require_port_angle(double phi, const char* who) {
    if (!(phi > 0.0 && phi <= kPi))
        raise(errc::domain, std::string(who) + ": port angle must lie in (0, pi]");
}

} // namespace

void validate(const DriveCondition& d, WarningList* warnings) {
    if (!(d.vdc > 0.0))
        raise(errc::invariant, "drive: vdc must be > 0 (zero bias turns the device off)");
    if (d.vi_amplitude < 0.0)
        raise(errc::invariant, "drive: vi_amplitude must be >= 0");
    if (warnings && d.vi_amplitude > 0.1 * d.vdc)
        warnings->push_back("drive: vi_amplitude exceeds vdc/10; the small-signal "
                            "linearization degrades");
}

double static_capacitance(const DiskGeometry& g) {
    validate(g);
    return kEpsilon0 * g.electrode_angle * g.radius * g.thickness / g.gap;
}

double cap_derivative(const DiskGeometry& g, double displacement) {
    validate(g);
    if (!(std::fabs(displacement) < g.gap))
        raise(errc::domain, "cap_derivative: |displacement| must stay below the gap");
    const double c0 = static_capacitance(g);
    const double u = 1.0 - displacement / g.gap;
    return c0 / g.gap / (u * u);
}

ElectrostaticForce electrostatic_force(const DiskGeometry& g, const DriveCondition& d) {
    validate(g);
    if (d.vdc < 0.0) raise(errc::domain, "electrostatic_force: vdc must be >= 0");
    const double dcdr = cap_derivative(g, 0.0);
    return {0.5 * dcdr * d.vdc * d.vdc, d.vdc * dcdr};
}

double peak_displacement(const ModeSolution& mode, const LumpedMechanical& mech,
                         const DiskGeometry& g, const DriveCondition& d,
                         WarningList* warnings) {
    validate(d, warnings);
    if (!(mech.k_eff > 0.0) || !(mech.q > 0.0))
        raise(errc::domain, "peak_displacement: k_eff and Q must be positive");
    (void)mode;
    const double f1 = d.vdc * cap_derivative(g, 0.0) * d.vi_amplitude;
    const double amplitude = mech.q * std::fabs(f1) / mech.k_eff;
    if (warnings && amplitude > 0.1 * g.gap)
        warnings->push_back("peak_displacement: amplitude exceeds d0/10; the "
                            "small-signal model is leaving its validity range");
    return amplitude;
}

double mode_shape(const ModeSolution& mode, const DiskGeometry& g, double r) {
    validate(g);
    if (r < 0.0 || r > g.radius)
        raise(errc::domain, "mode_shape: r must lie in [0, R]");
    const double h = mode.wavenumber;
    return bessel_j(1, h * r) / bessel_j(1, h * g.radius);
}

double effective_mass(const Material& m, const DiskGeometry& g, const ModeSolution& mode) {
    validate(m);
    validate(g);
    const double lam = mode.frequency_parameter; // h R
    if (!(lam > 0.0)) raise(errc::domain, "effective_mass: mode carries no radial root");
    const double j0 = bessel_j(0, lam);
    const double j1 = bessel_j(1, lam);
    const double j2 = bessel_j(2, lam);
    const double closed = kPi * m.density * g.thickness * g.radius * g.radius
                          * (1.0 - j0 * j2 / (j1 * j1));

    // Cross-check against the kinetic-energy integral 2 pi rho t
    // int r J1(hr)^2 dr / J1(hR)^2.
    const double h = lam / g.radius;
    const double integral = integrate(
        [h](double r) { const double j = bessel_j(1, h * r); return r * j * j; },
        0.0, g.radius);
    const double from_integral = 2.0 * kPi * m.density * g.thickness * integral / (j1 * j1);
    if (std::fabs(from_integral - closed) > 1e-6 * std::fabs(closed))
        raise(errc::no_convergence,
              "effective_mass: closed form and quadrature disagree beyond 1e-6");
    return closed;
}

double effective_stiffness(const ModeSolution& mode, double m_eff) {
    if (!(mode.omega0 > 0.0) || !(m_eff > 0.0))
        raise(errc::domain, "effective_stiffness: omega0 and m_eff must be positive");
    return mode.omega0 * mode.omega0 * m_eff;
}

double damping_factor(const ModeSolution& mode, double m_eff, double q) {
    if (!(q > 0.0)) raise(errc::domain, "damping_factor: Q must be positive");
    if (!(mode.omega0 > 0.0) || !(m_eff > 0.0))
        raise(errc::domain, "damping_factor: omega0 and m_eff must be positive");
    return mode.omega0 * m_eff / q;
}

LumpedMechanical extract_mechanical(const Material& m, const DiskGeometry& g,
                                    const ModeSolution& mode, double q) {
    LumpedMechanical mech;
    mech.m_eff = effective_mass(m, g, mode);
    mech.k_eff = effective_stiffness(mode, mech.m_eff);
    mech.b_eff = damping_factor(mode, mech.m_eff, q);
    mech.q = q;
    return mech;
}

double transduction_factor(const DiskGeometry& g, const DriveCondition& d,
                           double port_angle) {
    validate(g);
    require_port_angle(port_angle, "transduction_factor");
    if (d.vdc < 0.0) raise(errc::domain, "transduction_factor: vdc must be >= 0");
    // same association order as cap_derivative(g, 0) so the identity with
    // electrostatic_force.force_per_volt is exact
    const double c0_port = kEpsilon0 * port_angle * g.radius * g.thickness / g.gap;
    return d.vdc * (c0_port / g.gap);
}

void validate(const LumpedMechanical& mech) {
    if (!(mech.m_eff > 0.0) || !(mech.k_eff > 0.0) || !(mech.b_eff > 0.0)
        || !(mech.q > 0.0))
        raise(errc::invariant, "lumped mechanical: all elements must be positive");
    const double implied = std::sqrt(mech.k_eff * mech.m_eff) / mech.q;
    if (std::fabs(mech.b_eff - implied) > 1e-9 * implied)
        raise(errc::invariant, "lumped mechanical: b_eff is inconsistent with "
                               "sqrt(k_eff m_eff)/Q");
}

LumpedElectrical extract_rlc(const LumpedMechanical& mech, double n, double c0) {
    if (n == 0.0)
        raise(errc::device_off, "extract_rlc: transduction factor is zero (no dc "
                                "bias); the device is switched off");
    validate(mech);
    if (c0 < 0.0) raise(errc::domain, "extract_rlc: c0 must be >= 0");
    LumpedElectrical e;
    e.n = n;
    e.c0 = c0;
    const double n2 = n * n;
    e.le = mech.m_eff / n2;
    e.ce = n2 / mech.k_eff;
    e.re = mech.b_eff / n2;
    return e;
}

double motional_capacitance_with_electrical_stiffness(const LumpedMechanical& mech,
                                                      double n,
                                                      double electrical_stiffness) {
    validate(mech);
    if (n == 0.0) raise(errc::device_off, "motional capacitance: zero transduction factor");
    if (electrical_stiffness < 0.0)
        raise(errc::domain, "motional capacitance: electrical stiffness must be >= 0");
    const double k_net = mech.k_eff - 2.0 * electrical_stiffness;
    if (!(k_net > 0.0))
        raise(errc::pull_in, "motional capacitance: electrical stiffness reaches the "
                             "mechanical stiffness");
    return n * n / k_net;
}

double motional_resistance_formula(const DiskGeometry& g, double q, double vdc,
                                   const Material* m, WarningList* warnings) {
    validate(g);
    if (!(q > 0.0)) raise(errc::domain, "motional_resistance_formula: Q must be > 0");
    if (!(vdc > 0.0)) raise(errc::domain, "motional_resistance_formula: vdc must be > 0");
    if (warnings) {
        if (m && m->name != "polysilicon")
            warnings->push_back("motional_resistance_formula: the 1.18e29 lump is a "
                                "polysilicon first-mode constant; material '"
                                + m->name + "' is outside its regime");
        if (g.electrode_angle < 0.9 * kPi)
            warnings->push_back("motional_resistance_formula: derived for electrode "
                                "coverage near pi; the configured angle is smaller");
    }
    const double d0 = g.gap;
    return 1.18e29 / (q * vdc * vdc) * (d0 * d0 * d0 * d0) / (g.radius * g.thickness);
}

double output_current(const ModeSolution& mode, const LumpedMechanical& mech,
                      const DiskGeometry& g, const DriveCondition& d,
                      double port_angle_1, double port_angle_2) {
    validate(g);
    require_port_angle(port_angle_1, "output_current");
    require_port_angle(port_angle_2, "output_current");
    if (d.vdc < 0.0) raise(errc::domain, "output_current: vdc must be >= 0");
    if (d.vdc == 0.0) return 0.0; // no bias, no motional current
    if (!(mech.k_eff > 0.0) || !(mech.q > 0.0))
        raise(errc::domain, "output_current: k_eff and Q must be positive");

    const double base = kEpsilon0 * g.radius * g.thickness / (g.gap * g.gap);
    const double dc1 = base * port_angle_1;
    const double dc2 = base * port_angle_2;
    return mech.q * mode.omega0 * dc1 * dc2 * d.vdc * d.vdc / mech.k_eff;
}

} // namespace mrt
