#pragma once

#include <optional>
#include <string>

#include "mrt/constants.hpp"

namespace mrt::cli {

enum class Command { mode_freq, lumped, sweep, filter, validate };
enum class OutputFormat { csv, json };

struct SweepRange {
    double lo = 0.0; // SI
    double hi = 0.0;
    int count = 0;
};

// Fully resolved run description, SI units throughout. The binary translates
// the micrometer/nanometer/degree command-line flags into this.
struct RunConfig {
    Command command = Command::validate;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;

    std::string material = "polysilicon";
    std::string materials_file;

    std::string geometry; // disk|wineglass|ccbeam|square-ext|square-flex|ring
    double radius = 0.0;
    double thickness = 0.0;
    double gap = 0.0;
    double electrode_angle = kPi;
    double side = 0.0;
    double beam_length = 0.0;
    double beam_width = 0.0;
    double electrode_width = 0.0;
    double kappa = 1.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    int modes = 1;

    double vdc = 0.0;
    double vi = 0.0;
    double q = 0.0;
    std::optional<double> km;

    std::optional<SweepRange> sweep_radius;    // mode-freq
    std::optional<SweepRange> sweep_gap;       // lumped
    std::optional<SweepRange> sweep_thickness; // lumped

    double fmin = 0.0; // Hz; 0 = auto around resonance
    double fmax = 0.0;
    int points = 401;
    bool feedthrough = false;

    int resonator_count = 2;
    double coupling_cap = 0.0; // F
    double coupling_ks = 0.0;  // N/m
    double rq = 0.0;           // ohm; 0 with ripple target = auto-terminate
    std::optional<double> ripple_target_db;
    double re_direct = 0.0; // direct RLC entry bypassing the disk chain
    double le_direct = 0.0;
    double ce_direct = 0.0;
    double c0_direct = 0.0;
};

struct RunOutput {
    std::string human; // terminal summary (MHz-style units)
    std::string data;  // csv or json payload, deterministic bytes
    int exit_code = 0;
};

// Numbers are printed with 10 significant digits everywhere so identical
// configurations produce byte-identical payloads.
std::string format_double(double v);
double round10(double v);

RunOutput run(const RunConfig& config);
RunOutput run_mode_freq(const RunConfig& config);
RunOutput run_lumped(const RunConfig& config);
RunOutput run_sweep(const RunConfig& config);
RunOutput run_filter(const RunConfig& config);
RunOutput run_validate(const RunConfig& config);

} // namespace mrt::cli
