#include "mrt/response.hpp"

#include <algorithm>
#include <cmath>

namespace mrt {

Mat2c mat2_mul(const Mat2c& l, const Mat2c& r) {
    return {l[0] * r[0] + l[1] * r[2], l[0] * r[1] + l[1] * r[3],
            l[2] * r[0] + l[3] * r[2], l[2] * r[1] + l[3] * r[3]};
}

namespace {

double finite_or_throw(std::optional<double> q, const char* name, int& count) {
    if (!q) return 0.0;
    if (!(*q > 0.0))
        raise(errc::invariant, std::string("q budget: mechanism '") + name
                               + "' must be positive when present");
    ++count;
    return 1.0 / *q;
}

} // namespace

double combine_q(const QBudget& b) {
    int finite = 0;
    double inv = 0.0;
    inv += finite_or_throw(b.air_damping, "air_damping", finite);
    inv += finite_or_throw(b.air_squeezing, "air_squeezing", finite);
    inv += finite_or_throw(b.anchor_loss, "anchor_loss", finite);
    inv += finite_or_throw(b.thermoelastic, "thermoelastic", finite);
    inv += finite_or_throw(b.surface, "surface", finite);
    inv += finite_or_throw(b.internal_friction, "internal_friction", finite);
    if (finite == 0)
        raise(errc::invariant, "q budget: at least one mechanism must be finite");
    return 1.0 / inv;
}

double q_from_bandwidth(double f0, double delta_f) {
    if (!(delta_f > 0.0) || !(delta_f < f0))
        raise(errc::domain, "q_from_bandwidth: requires 0 < delta_f < f0");
    return f0 / delta_f;
}

double q_from_damping_ratio(double damping_ratio) {
    if (!(damping_ratio > 0.0))
        raise(errc::domain, "q_from_damping_ratio: damping ratio must be > 0");
    return 1.0 / (2.0 * damping_ratio);
}

Mat2c TransducerTwoPort::electrical_block(double omega) const {
    const complexd jwc0(0.0, omega * c0);
    return {complexd(1.0), complexd(0.0), jwc0, complexd(1.0)};
}

Mat2c TransducerTwoPort::transformer_block() const {
    return {complexd(1.0 / n), complexd(0.0), complexd(0.0), complexd(-n)};
}

Mat2c TransducerTwoPort::mechanical_block(double omega) const {
    const complexd jwc0(0.0, omega * c0);
    return {complexd(1.0), complexd(n * n) / jwc0, complexd(0.0), complexd(1.0)};
}

Mat2c TransducerTwoPort::composite(double omega) const {
    return mat2_mul(mat2_mul(electrical_block(omega), transformer_block()),
                    mechanical_block(omega));
}

TransducerTwoPort transducer_two_port(double c0, double n) {
    if (!(c0 > 0.0)) raise(errc::domain, "transducer_two_port: c0 must be > 0");
    if (n == 0.0) raise(errc::domain, "transducer_two_port: n must be nonzero");
    return {c0, n};
}

complexd branch_admittance(const LumpedElectrical& elec, double f,
                           bool include_feedthrough) {
    const double omega = 2.0 * kPi * f;
    const complexd z = complexd(elec.re, 0.0)
                       + complexd(0.0, omega * elec.le)
                       + complexd(0.0, -1.0 / (omega * elec.ce));
    complexd y = 1.0 / z;
    if (include_feedthrough) y += complexd(0.0, omega * elec.c0);
    return y;
}

double resonant_frequency(const LumpedElectrical& elec) {
    if (!(elec.le > 0.0) || !(elec.ce > 0.0))
        raise(errc::domain, "resonant_frequency: Le and Ce must be positive");
    return 1.0 / (2.0 * kPi * std::sqrt(elec.le * elec.ce));
}

double branch_quality(const LumpedElectrical& elec) {
    if (!(elec.re > 0.0))
        raise(errc::domain, "branch_quality: Re must be positive");
    return 2.0 * kPi * resonant_frequency(elec) * elec.le / elec.re;
}

FrequencySweep two_port_response(const LumpedElectrical& elec, bool include_feedthrough,
                                 double f_lo, double f_hi, int points) {
    if (!(f_lo > 0.0) || !(f_hi > f_lo))
        raise(errc::domain, "two_port_response: requires 0 < f_lo < f_hi");
    if (points < 3)
        raise(errc::domain, "two_port_response: needs at least 3 points");

    const double f0 = resonant_frequency(elec);
    const double q = branch_quality(elec);

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points) + 512);
    const double lr = std::log(f_lo), hr = std::log(f_hi);
    for (int i = 0; i < points; ++i)
        grid.push_back(std::exp(lr + (hr - lr) * i / (points - 1)));

    // Dense linear refinement across the resonance so the peak and the 3 dB
    // band are grid-independent even at Q ~ 2e6.
    const double band = 10.0 / q;
    const double r_lo = std::max(f_lo, f0 * (1.0 - band));
    const double r_hi = std::min(f_hi, f0 * (1.0 + band));
    if (r_hi > r_lo) {
        constexpr int kRefine = 512;
        for (int i = 0; i <= kRefine; ++i)
            grid.push_back(r_lo + (r_hi - r_lo) * i / kRefine);
    }

    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    FrequencySweep sweep;
    sweep.kind = SweepKind::transadmittance;
    sweep.points.reserve(grid.size());
    for (double f : grid)
        sweep.points.push_back({f, branch_admittance(elec, f, include_feedthrough)});
    return sweep;
}

} // namespace mrt
