#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mrt/cli.hpp"
#include "mrt/error.hpp"
#include "mrt/version.hpp"

namespace {

using mrt::cli::RunConfig;

// Command-line values use the bench units (um, nm, degrees, mV, MHz, fF);
// everything is converted to SI here before the runners see it.
struct UnitFlags {
    double radius_um = 0, thickness_um = 0, gap_nm = 0, angle_deg = 180.0;
    double side_um = 0, beam_length_um = 0, beam_width_um = 0, electrode_width_um = 0;
    double inner_radius_um = 0, outer_radius_um = 0;
    double vi_mv = 0, km = 0;
    double fmin_mhz = 0, fmax_mhz = 0;
    double coupling_cap_ff = 0, c0_ff = 0;
    std::vector<double> sweep_radius_um, sweep_gap_nm, sweep_thickness_um;
};

void add_common(CLI::App* cmd, RunConfig& c, std::string& format) {
    cmd->add_option("--material", c.material, "material name (default polysilicon)");
    cmd->add_option("--materials-file", c.materials_file, "extra materials, JSON");
    cmd->add_option("--out", c.out_path, "write the data payload to this path");
    cmd->add_option("--format", format, "csv|json (default csv)");
}

void add_disk(CLI::App* cmd, UnitFlags& u) {
    cmd->add_option("--radius-um", u.radius_um, "disk radius, um");
    cmd->add_option("--thickness-um", u.thickness_um, "structure thickness, um");
    cmd->add_option("--gap-nm", u.gap_nm, "electrode gap, nm");
    cmd->add_option("--electrode-angle-deg", u.angle_deg, "electrode coverage, deg");
}

void add_drive(CLI::App* cmd, RunConfig& c, UnitFlags& u) {
    cmd->add_option("--vdc", c.vdc, "dc bias, V");
    cmd->add_option("--vi-mv", u.vi_mv, "small-signal drive, mV");
    cmd->add_option("--q", c.q, "quality factor (measured or budgeted)");
}

mrt::cli::SweepRange to_range(const std::vector<double>& v, double scale,
                              const char* flag) {
    if (v.size() != 3)
        mrt::raise(mrt::errc::usage, std::string(flag) + " expects LO HI COUNT");
    return {v[0] * scale, v[1] * scale, static_cast<int>(v[2])};
}

void finalize(RunConfig& c, const UnitFlags& u, const std::string& format) {
    c.radius = u.radius_um * 1e-6;
    c.thickness = u.thickness_um * 1e-6;
    c.gap = u.gap_nm * 1e-9;
    c.electrode_angle = u.angle_deg * mrt::kPi / 180.0;
    c.side = u.side_um * 1e-6;
    c.beam_length = u.beam_length_um * 1e-6;
    c.beam_width = u.beam_width_um * 1e-6;
    c.electrode_width = u.electrode_width_um * 1e-6;
    c.inner_radius = u.inner_radius_um * 1e-6;
    c.outer_radius = u.outer_radius_um * 1e-6;
    c.vi = u.vi_mv * 1e-3;
    if (u.km > 0.0) c.km = u.km;
    c.fmin = u.fmin_mhz * 1e6;
    c.fmax = u.fmax_mhz * 1e6;
    c.coupling_cap = u.coupling_cap_ff * 1e-15;
    c.c0_direct = u.c0_ff * 1e-15;
    if (!u.sweep_radius_um.empty())
        c.sweep_radius = to_range(u.sweep_radius_um, 1e-6, "--sweep-radius-um");
    if (!u.sweep_gap_nm.empty())
        c.sweep_gap = to_range(u.sweep_gap_nm, 1e-9, "--sweep-gap-nm");
    if (!u.sweep_thickness_um.empty())
        c.sweep_thickness = to_range(u.sweep_thickness_um, 1e-6, "--sweep-thickness-um");
    if (format == "json") c.format = mrt::cli::OutputFormat::json;
    else if (format == "csv") c.format = mrt::cli::OutputFormat::csv;
    else mrt::raise(mrt::errc::usage, "--format must be csv or json");
}

int emit(const mrt::cli::RunOutput& out, const RunConfig& c) {
    if (!c.out_path.empty()) {
        std::ofstream f(c.out_path, std::ios::binary);
        if (!f) mrt::raise(mrt::errc::usage, "cannot open --out path " + c.out_path);
        f << out.data;
        std::cout << out.human;
    } else {
        std::cout << out.data;
        std::cerr << out.human;
    }
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mrt: capacitive MEMS resonator design toolkit"};
    app.set_version_flag("--version", std::string("mrt ") + mrt::kVersion);
    app.require_subcommand(1);

    RunConfig config;
    UnitFlags units;
    std::string format = "csv";

    CLI::App* mode = app.add_subcommand("mode-freq", "modal resonance frequencies");
    add_common(mode, config, format);
    add_disk(mode, units);
    mode->add_option("--geometry", config.geometry,
                     "disk|wineglass|ccbeam|square-ext|square-flex|ring")
        ->required();
    mode->add_option("--modes", config.modes, "number of modes (disk/ring), 1..8");
    mode->add_option("--side-um", units.side_um, "square plate side, um");
    mode->add_option("--beam-length-um", units.beam_length_um, "beam length, um");
    mode->add_option("--beam-width-um", units.beam_width_um, "beam width, um");
    mode->add_option("--electrode-width-um", units.electrode_width_um,
                     "beam electrode width, um");
    mode->add_option("--kappa", config.kappa, "beam topography factor");
    mode->add_option("--inner-radius-um", units.inner_radius_um, "ring inner radius, um");
    mode->add_option("--outer-radius-um", units.outer_radius_um, "ring outer radius, um");
    mode->add_option("--vdc", config.vdc, "beam dc bias, V");
    mode->add_option("--km", units.km, "beam mechanical stiffness, N/m");
    mode->add_option("--sweep-radius-um", units.sweep_radius_um,
                     "disk radius sweep LO HI COUNT")->expected(3);

    CLI::App* lumped = app.add_subcommand("lumped", "lumped-model extraction for a disk");
    add_common(lumped, config, format);
    add_disk(lumped, units);
    add_drive(lumped, config, units);
    lumped->add_option("--sweep-gap-nm", units.sweep_gap_nm,
                       "gap sweep LO HI COUNT")->expected(3);
    lumped->add_option("--sweep-thickness-um", units.sweep_thickness_um,
                       "thickness sweep LO HI COUNT")->expected(3);

    CLI::App* sweep = app.add_subcommand("sweep", "two-port frequency response");
    add_common(sweep, config, format);
    add_disk(sweep, units);
    add_drive(sweep, config, units);
    sweep->add_option("--fmin-mhz", units.fmin_mhz, "sweep start, MHz (0 = auto)");
    sweep->add_option("--fmax-mhz", units.fmax_mhz, "sweep stop, MHz (0 = auto)");
    sweep->add_option("--points", config.points, "base grid points");
    sweep->add_flag("--feedthrough", config.feedthrough,
                    "include the static C0 feedthrough path");

    CLI::App* filter = app.add_subcommand("filter", "coupled-resonator bandpass filter");
    add_common(filter, config, format);
    add_disk(filter, units);
    add_drive(filter, config, units);
    filter->add_option("--count", config.resonator_count, "resonators in the chain");
    filter->add_option("--coupling-cap-ff", units.coupling_cap_ff,
                       "shunt coupling capacitor, fF");
    filter->add_option("--coupling-ks", config.coupling_ks,
                       "coupling spring stiffness, N/m");
    filter->add_option("--rq", config.rq, "termination resistance, ohm");
    filter->add_option("--ripple-db", [&config](const std::vector<std::string>& v) {
        config.ripple_target_db = std::stod(v[0]);
        return true;
    }, "auto-terminate to this passband ripple, dB");
    filter->add_option("--re-ohm", config.re_direct, "direct resonator Re, ohm");
    filter->add_option("--le-h", config.le_direct, "direct resonator Le, H");
    filter->add_option("--ce-f", config.ce_direct, "direct resonator Ce, F");
    filter->add_option("--c0-ff", units.c0_ff, "direct resonator C0, fF");
    filter->add_option("--fmin-mhz", units.fmin_mhz, "sweep start, MHz (0 = auto)");
    filter->add_option("--fmax-mhz", units.fmax_mhz, "sweep stop, MHz (0 = auto)");
    filter->add_option("--points", config.points, "sweep points");

    CLI::App* validate = app.add_subcommand("validate", "run the built-in fixture list");
    add_common(validate, config, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version -> 0, anything else is usage
    }

    try {
        if (mode->parsed()) config.command = mrt::cli::Command::mode_freq;
        else if (lumped->parsed()) config.command = mrt::cli::Command::lumped;
        else if (sweep->parsed()) config.command = mrt::cli::Command::sweep;
        else if (filter->parsed()) config.command = mrt::cli::Command::filter;
        else config.command = mrt::cli::Command::validate;
        finalize(config, units, format);
        return emit(mrt::cli::run(config), config);
    } catch (const mrt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == mrt::errc::usage ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
