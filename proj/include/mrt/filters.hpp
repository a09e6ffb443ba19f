#pragma once

#include <optional>

#include "mrt/response.hpp"

namespace mrt {

// Capacitively coupled resonator chain: resonator k bridges node k -> k+1,
// coupling capacitor j shunts node j+1 to ground, and the chain is driven
// through rq_in with the output taken across rq_out.
struct FilterSpec {
    std::vector<LumpedElectrical> resonators;
    std::vector<double> couplings; // shunt Cc, F; size = resonators-1
    double rq_in = 0.0;            // ohm
    double rq_out = 0.0;           // ohm
    // Re-inserts the end transducers' static capacitances as shunts on the
    // input/output nodes (normally neglected) for sensitivity studies.
    bool include_port_capacitance = false;
};

// Mechanically coupled chain; converted to the electrical ladder with
// Cc = n^2/ks so the out-of-phase mode lands exactly at f0 sqrt(1+2ks/kr).
struct MechanicalFilterSpec {
    std::vector<LumpedMechanical> resonators;
    std::vector<double> coupling_stiffness; // ks, N/m
    double rq_in = 0.0;
    double rq_out = 0.0;
    double transduction_factor = 0.0; // n, N/V
    double c0 = 0.0;                  // static port capacitance, F
};

void validate(const FilterSpec& spec);
FilterSpec to_electrical(const MechanicalFilterSpec& spec);

// Out-of-phase mode of two capacitively coupled resonators:
// f1 = f0 sqrt((1 + pi f0 Cc Re Q)/(pi f0 Cc Re Q)). Always above f0; a
// warning flags f1 > 2 f0 as outside the model.
double electrical_mode_split(double f0, double re, double q, double cc,
                             WarningList* warnings = nullptr);

// Out-of-phase mode of two spring-coupled resonators: f1 = f0 sqrt(1 + 2 ks12/kr).
double mechanical_mode_split(double f0, double ks12, double kr);

// Terminated-ladder voltage transfer V(load)/V(source) on a linear grid.
FrequencySweep filter_network_response(const FilterSpec& spec, double f_lo,
                                       double f_hi, int points);

// Active cascading: interface amplifiers remove loading between stages, so
// the cascade is the pointwise product of the stage transfers times the
// per-stage gain. Stages must share one frequency grid.
FrequencySweep cascade_active(const std::vector<FrequencySweep>& stages,
                              double stage_gain);

struct SweepPeak {
    double frequency = 0.0;    // quadratically interpolated on log magnitude
    double magnitude_db = 0.0;
};

// Interior local maxima of |H| with parabolic refinement on the dB curve.
std::vector<SweepPeak> find_sweep_peaks(const FrequencySweep& sweep);

// Peak-to-valley spread (dB) between the sweep's outermost local maxima;
// zero once the passband has merged into a single hump.
double passband_peak_to_valley(const FrequencySweep& sweep);

struct FilterMetrics {
    double center_frequency = 0.0;   // midpoint of the 3 dB edges, Hz
    double bandwidth_3db = 0.0;      // Hz (half-power width)
    double percent_bandwidth = 0.0;
    double insertion_loss_db = 0.0;  // 0 dB reference minus peak
    std::optional<double> stopband_rejection_db; // peak minus plateau beyond +-5 BW
    std::optional<double> shape_factor_20db;     // (-20 dB width)/(-3 dB width)
    double ripple_db = 0.0;          // peak-to-valley between passband peaks
};

// Passband metrics of a sweep whose maximum lies at an interior point.
// Optional fields stay empty when the sweep range does not reach the -20 dB
// edges or the +-5 BW plateau.
FilterMetrics filter_metrics(const FrequencySweep& sweep);

struct TerminationResult {
    double rq = 0.0;        // ohm, both ends
    double ripple_db = 0.0; // achieved passband ripple at that termination
};

// Chooses end terminations that flatten the two-peak passband of a symmetric
// 2-resonator spec: deterministic log-grid scan over [Re/100, 100 Re]
// (unimodality asserted on the grid) plus bisection for the smallest R_Q
// meeting the ripple target. errc::target_unreachable reports the best
// achievable ripple when the target cannot be met.
TerminationResult terminate_for_flat_passband(const FilterSpec& spec,
                                              double ripple_target_db);

} // namespace mrt
