#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "mrt/lumped.hpp"

namespace mrt {

using complexd = std::complex<double>;

// Row-major 2x2 complex matrix [a b; c d].
using Mat2c = std::array<complexd, 4>;

Mat2c mat2_mul(const Mat2c& lhs, const Mat2c& rhs);

// Per-mechanism quality factors; absent entries count as lossless (infinite).
struct QBudget {
    std::optional<double> air_damping;
    std::optional<double> air_squeezing;
    std::optional<double> anchor_loss;
    std::optional<double> thermoelastic;
    std::optional<double> surface;
    std::optional<double> internal_friction;
};

// 1/Q = sum of 1/Q_mechanism over the finite entries. At least one entry
// must be finite and all finite entries positive.
double combine_q(const QBudget& budget);

// Q = f0/delta_f, requiring 0 < delta_f < f0.
double q_from_bandwidth(double f0, double delta_f);

// Q = 1/(2 zeta).
double q_from_damping_ratio(double damping_ratio);

enum class SweepKind { transadmittance, voltage_ratio };

struct SweepPoint {
    double frequency = 0.0; // Hz
    complexd value;
};

struct FrequencySweep {
    SweepKind kind = SweepKind::transadmittance;
    std::vector<SweepPoint> points; // strictly ascending in frequency, >= 3
};

// Transverse electrostatic transducer as a frequency-parameterized 2x2
// transfer between (v, i) and (F, u): the cascade of an electrical shunt
// admittance jwC0, an ideal transformer (1/n, -n), and a mechanical series
// element n^2/(jwC0). The transformer block has determinant -1.
struct TransducerTwoPort {
    double c0 = 0.0;
    double n = 0.0;

    Mat2c electrical_block(double omega) const;
    Mat2c transformer_block() const;
    Mat2c mechanical_block(double omega) const;
    Mat2c composite(double omega) const; // product of the three blocks
};

TransducerTwoPort transducer_two_port(double c0, double n);

// Motional branch admittance Re-Le-Ce at frequency f, optionally with the
// static capacitance as a parallel port-to-port feedthrough path.
complexd branch_admittance(const LumpedElectrical& elec, double f,
                           bool include_feedthrough);

// Transadmittance sweep io/vi over [f_lo, f_hi]: logarithmic base grid plus
// dense linear refinement within f0 (1 +- 10/Q) so 3 dB extraction does not
// depend on the grid. Peak magnitude equals 1/Re at f0 with feedthrough off.
FrequencySweep two_port_response(const LumpedElectrical& elec, bool include_feedthrough,
                                 double f_lo, double f_hi, int points);

// Resonant frequency and quality factor implied by the RLC branch.
double resonant_frequency(const LumpedElectrical& elec); // 1/(2 pi sqrt(Le Ce))
double branch_quality(const LumpedElectrical& elec);     // w0 Le / Re

} // namespace mrt
