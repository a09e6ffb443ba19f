#include "mrt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "mrt/filters.hpp"
#include "mrt/lumped.hpp"
#include "mrt/modal.hpp"
#include "mrt/response.hpp"
#include "mrt/validation.hpp"
#include "mrt/version.hpp"

namespace mrt::cli {

namespace {

using nlohmann::json;

std::string fmt_mhz(double f_hz) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", f_hz / 1e6);
    return std::string(buf) + " MHz";
}

json inputs_echo(const RunConfig& c) {
    json j;
    j["command"] = static_cast<int>(c.command);
    j["material"] = c.material;
    if (!c.materials_file.empty()) j["materials_file"] = c.materials_file;
    if (!c.geometry.empty()) j["geometry"] = c.geometry;
    const auto put = [&](const char* key, double v) { if (v != 0.0) j[key] = round10(v); };
    put("radius_m", c.radius);
    put("thickness_m", c.thickness);
    put("gap_m", c.gap);
    put("electrode_angle_rad", c.electrode_angle);
    put("side_m", c.side);
    put("beam_length_m", c.beam_length);
    put("beam_width_m", c.beam_width);
    put("electrode_width_m", c.electrode_width);
    if (c.kappa != 1.0) j["kappa"] = round10(c.kappa);
    put("inner_radius_m", c.inner_radius);
    put("outer_radius_m", c.outer_radius);
    if (c.modes != 1) j["modes"] = c.modes;
    put("vdc_v", c.vdc);
    put("vi_v", c.vi);
    put("q", c.q);
    if (c.km) j["km_n_per_m"] = round10(*c.km);
    return j;
}

const Material& resolve_material(const RunConfig& c, MaterialRegistry& registry) {
    if (!c.materials_file.empty()) registry.load_file(c.materials_file);
    return registry.get(c.material);
}

// --- small CSV builder -----------------------------------------------------

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ += header[i] + (i + 1 < header.size() ? "," : "\n");
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ += format_double(values[i]) + (i + 1 < values.size() ? "," : "\n");
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

// --- mode-freq ---------------------------------------------------------------

struct ModeRow {
    std::optional<double> swept_radius;
    ModeSolution sol;
    std::optional<double> quarter_wave;
};

std::vector<ModeRow> solve_geometry(const RunConfig& c, const Material& mat,
                                    double radius_override) {
    const double radius = radius_override > 0.0 ? radius_override : c.radius;
    std::vector<ModeRow> rows;
    if (c.geometry == "disk") {
        const DiskGeometry g{radius, c.thickness, c.gap, c.electrode_angle, 0.0};
        for (int i = 1; i <= c.modes; ++i)
            rows.push_back({std::nullopt, disk_radial_f0(mat, g, i), std::nullopt});
    } else if (c.geometry == "wineglass") {
        const DiskGeometry g{radius, c.thickness, c.gap, c.electrode_angle, 0.0};
        rows.push_back({std::nullopt, wineglass_f0(mat, g), std::nullopt});
    } else if (c.geometry == "ccbeam") {
        const BeamGeometry g{c.beam_length, c.beam_width, c.thickness, c.gap,
                             c.electrode_width, c.kappa};
        rows.push_back({std::nullopt, ccbeam_f0(mat, g, c.vdc, c.km), std::nullopt});
    } else if (c.geometry == "square-ext") {
        rows.push_back({std::nullopt,
                        square_extensional_f0(mat, {c.side, c.thickness, c.gap}),
                        std::nullopt});
    } else if (c.geometry == "square-flex") {
        rows.push_back({std::nullopt,
                        square_flexural_f0(mat, {c.side, c.thickness, c.gap}),
                        std::nullopt});
    } else if (c.geometry == "ring") {
        const RingGeometry g{c.inner_radius, c.outer_radius, c.thickness, 0.0, c.gap};
        for (int i = 1; i <= c.modes; ++i) {
            const ModeSolution sol = ring_contour_f0(mat, g, i);
            rows.push_back({std::nullopt, sol, ring_support_length(mat, sol.f0, 1)});
        }
    } else {
        raise(errc::usage, "mode-freq: unknown geometry '" + c.geometry
              + "' (expected disk|wineglass|ccbeam|square-ext|square-flex|ring)");
    }
    return rows;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double round10(double v) { return std::stod(format_double(v)); }

RunOutput run_mode_freq(const RunConfig& config) {
    MaterialRegistry registry;
    const Material& mat = resolve_material(config, registry);
    if (config.modes < 1 || config.modes > 8)
        raise(errc::usage, "mode-freq: --modes must lie in 1..8");

    std::vector<ModeRow> rows;
    if (config.sweep_radius) {
        if (config.geometry != "disk")
            raise(errc::usage, "mode-freq: --sweep-radius-um applies to the disk geometry");
        const SweepRange& sr = *config.sweep_radius;
        if (sr.count < 2 || !(sr.lo > 0.0) || !(sr.hi > sr.lo))
            raise(errc::usage, "mode-freq: sweep range must be lo < hi with count >= 2");
        for (int k = 0; k < sr.count; ++k) {
            const double r = sr.lo + (sr.hi - sr.lo) * k / (sr.count - 1);
            for (ModeRow& row : solve_geometry(config, mat, r)) {
                row.swept_radius = r;
                rows.push_back(row);
            }
        }
    } else {
        rows = solve_geometry(config, mat, 0.0);
    }

    const bool swept = config.sweep_radius.has_value();
    const bool ring = config.geometry == "ring";
    std::vector<std::string> header;
    if (swept) header.push_back("radius_m");
    header.insert(header.end(), {"mode", "frequency_parameter", "f0_hz",
                                 "omega0_rad_per_s", "wavenumber_per_m",
                                 "wavenumber_zeta"});
    if (ring) header.push_back("quarter_wave_support_m");

    Csv csv(header);
    json out_rows = json::array();
    std::ostringstream human;
    human << "mode table: " << config.geometry << ", " << mat.name << "\n";
    for (const ModeRow& row : rows) {
        std::vector<double> vals;
        json jr;
        if (swept) {
            vals.push_back(*row.swept_radius);
            jr["radius_m"] = round10(*row.swept_radius);
        }
        vals.insert(vals.end(), {static_cast<double>(row.sol.mode_index),
                                 row.sol.frequency_parameter, row.sol.f0,
                                 row.sol.omega0, row.sol.wavenumber,
                                 row.sol.wavenumber_zeta});
        jr["mode"] = row.sol.mode_index;
        jr["frequency_parameter"] = round10(row.sol.frequency_parameter);
        jr["f0_hz"] = round10(row.sol.f0);
        jr["omega0_rad_per_s"] = round10(row.sol.omega0);
        jr["wavenumber_per_m"] = round10(row.sol.wavenumber);
        jr["wavenumber_zeta"] = round10(row.sol.wavenumber_zeta);
        if (row.quarter_wave) {
            vals.push_back(*row.quarter_wave);
            jr["quarter_wave_support_m"] = round10(*row.quarter_wave);
        }
        csv.row(vals);
        out_rows.push_back(std::move(jr));
        human << "  mode " << row.sol.mode_index;
        if (swept) human << " (R=" << *row.swept_radius * 1e6 << " um)";
        human << ": " << fmt_mhz(row.sol.f0) << "\n";
    }

    RunOutput out;
    out.human = human.str();
    if (config.format == OutputFormat::csv) {
        out.data = csv.str();
    } else {
        json doc;
        doc["inputs"] = inputs_echo(config);
        doc["outputs"] = {{"rows", out_rows}};
        doc["version"] = kVersion;
        out.data = doc.dump(2) + "\n";
    }
    return out;
}

namespace {

struct Chain {
    ModeSolution mode;
    LumpedMechanical mech;
    double n = 0.0;
    double c0 = 0.0;
    LumpedElectrical elec;
    double re_formula = 0.0;
    double gm = 0.0;
    WarningList warnings;
};

Chain lumped_chain(const Material& mat, const DiskGeometry& g, double vdc, double q,
                   double vi) {
    Chain ch;
    ch.mode = disk_radial_f0(mat, g, 1);
    ch.mech = extract_mechanical(mat, g, ch.mode, q);
    const DriveCondition drive{vdc, vi};
    ch.n = transduction_factor(g, drive, g.electrode_angle);
    ch.c0 = static_capacitance(g);
    ch.elec = extract_rlc(ch.mech, ch.n, ch.c0); // vdc = 0 -> device_off
    ch.re_formula = motional_resistance_formula(g, q, vdc, &mat, &ch.warnings);
    ch.gm = output_current(ch.mode, ch.mech, g, drive, g.electrode_angle,
                           g.electrode_angle);
    return ch;
}

const std::vector<std::string> kChainColumns = {
    "f0_hz", "frequency_parameter", "m_eff_kg", "k_eff_n_per_m", "b_eff_kg_per_s",
    "q", "n_c_per_m", "c0_f", "re_ohm", "le_h", "ce_f", "re_closed_form_ohm",
    "transconductance_s"};

std::vector<double> chain_values(const Chain& ch) {
    return {ch.mode.f0, ch.mode.frequency_parameter, ch.mech.m_eff, ch.mech.k_eff,
            ch.mech.b_eff, ch.mech.q, ch.n, ch.c0, ch.elec.re, ch.elec.le,
            ch.elec.ce, ch.re_formula, ch.gm};
}

json chain_json(const Chain& ch) {
    json j;
    const auto vals = chain_values(ch);
    for (std::size_t i = 0; i < kChainColumns.size(); ++i)
        j[kChainColumns[i]] = round10(vals[i]);
    return j;
}

DiskGeometry disk_from(const RunConfig& c) {
    return {c.radius, c.thickness, c.gap, c.electrode_angle, 0.0};
}

void require_lumped_inputs(const RunConfig& c) {
    if (!(c.q > 0.0)) raise(errc::usage, "this command requires --q > 0");
    if (!(c.radius > 0.0) || !(c.thickness > 0.0) || !(c.gap > 0.0))
        raise(errc::usage, "this command requires disk geometry flags "
                           "(--radius-um, --thickness-um, --gap-nm)");
}

} // namespace

RunOutput run_lumped(const RunConfig& config) {
    MaterialRegistry registry;
    const Material& mat = resolve_material(config, registry);
    require_lumped_inputs(config);
    if (config.sweep_gap && config.sweep_thickness)
        raise(errc::usage, "lumped: sweep one variable at a time");

    std::ostringstream human;
    RunOutput out;
    json out_rows = json::array();

    const auto emit_single = [&](const Chain& ch) {
        Csv csv(kChainColumns);
        csv.row(chain_values(ch));
        out_rows.push_back(chain_json(ch));
        human << "lumped model, " << mat.name << ", f0 = " << fmt_mhz(ch.mode.f0) << "\n"
              << "  m_eff " << format_double(ch.mech.m_eff) << " kg, k_eff "
              << format_double(ch.mech.k_eff) << " N/m, b_eff "
              << format_double(ch.mech.b_eff) << " kg/s\n"
              << "  Re " << format_double(ch.elec.re) << " ohm, Le "
              << format_double(ch.elec.le) << " H, Ce " << format_double(ch.elec.ce)
              << " F, C0 " << format_double(ch.c0) << " F\n"
              << "  closed-form Re " << format_double(ch.re_formula)
              << " ohm, transconductance " << format_double(ch.gm) << " S\n";
        for (const std::string& w : ch.warnings) human << "  warning: " << w << "\n";
        return csv.str();
    };

    std::string csv_payload;
    if (!config.sweep_gap && !config.sweep_thickness) {
        const Chain ch = lumped_chain(mat, disk_from(config), config.vdc, config.q,
                                      config.vi);
        csv_payload = emit_single(ch);
    } else {
        const bool over_gap = config.sweep_gap.has_value();
        const SweepRange& sr = over_gap ? *config.sweep_gap : *config.sweep_thickness;
        if (sr.count < 2 || !(sr.lo > 0.0) || !(sr.hi > sr.lo))
            raise(errc::usage, "lumped: sweep range must be lo < hi with count >= 2");
        std::vector<std::string> header = kChainColumns;
        header.insert(header.begin(), over_gap ? "gap_m" : "thickness_m");
        Csv csv(header);
        human << "lumped sweep over " << (over_gap ? "gap" : "thickness") << ", "
              << mat.name << "\n";
        for (int k = 0; k < sr.count; ++k) {
            const double v = sr.lo + (sr.hi - sr.lo) * k / (sr.count - 1);
            DiskGeometry g = disk_from(config);
            (over_gap ? g.gap : g.thickness) = v;
            const Chain ch = lumped_chain(mat, g, config.vdc, config.q, config.vi);
            std::vector<double> vals = chain_values(ch);
            vals.insert(vals.begin(), v);
            csv.row(vals);
            json jr = chain_json(ch);
            jr[over_gap ? "gap_m" : "thickness_m"] = round10(v);
            out_rows.push_back(std::move(jr));
            human << "  " << (over_gap ? "gap " : "t ") << v * 1e9 << " nm: Re "
                  << format_double(ch.elec.re) << " ohm\n";
        }
        csv_payload = csv.str();
    }

    out.human = human.str();
    if (config.format == OutputFormat::csv) {
        out.data = csv_payload;
    } else {
        json doc;
        doc["inputs"] = inputs_echo(config);
        doc["outputs"] = {{"rows", out_rows}};
        doc["version"] = kVersion;
        out.data = doc.dump(2) + "\n";
    }
    return out;
}

namespace {

std::string sweep_csv(const FrequencySweep& sweep) {
    Csv csv({"frequency_hz", "real", "imag", "magnitude", "magnitude_db"});
    for (const SweepPoint& p : sweep.points) {
        const double mag = std::abs(p.value);
        csv.row({p.frequency, p.value.real(), p.value.imag(), mag,
                 mag > 0.0 ? 20.0 * std::log10(mag) : -400.0});
    }
    return csv.str();
}

json sweep_json(const FrequencySweep& sweep) {
    json arr = json::array();
    for (const SweepPoint& p : sweep.points) {
        const double mag = std::abs(p.value);
        arr.push_back({{"frequency_hz", round10(p.frequency)},
                       {"real", round10(p.value.real())},
                       {"imag", round10(p.value.imag())},
                       {"magnitude", round10(mag)},
                       {"magnitude_db",
                        round10(mag > 0.0 ? 20.0 * std::log10(mag) : -400.0)}});
    }
    return arr;
}

} // namespace

RunOutput run_sweep(const RunConfig& config) {
    MaterialRegistry registry;
    const Material& mat = resolve_material(config, registry);
    require_lumped_inputs(config);
    const Chain ch = lumped_chain(mat, disk_from(config), config.vdc, config.q,
                                  config.vi);

    const double f0 = ch.mode.f0;
    const double band = 200.0 / ch.mech.q;
    const double f_lo = config.fmin > 0.0 ? config.fmin : f0 * (1.0 - band);
    const double f_hi = config.fmax > 0.0 ? config.fmax : f0 * (1.0 + band);
    const FrequencySweep sweep =
        two_port_response(ch.elec, config.feedthrough, f_lo, f_hi, config.points);

    RunOutput out;
    std::ostringstream human;
    human << "two-port response, " << mat.name << ", f0 = " << fmt_mhz(f0)
          << ", feedthrough " << (config.feedthrough ? "on" : "off") << ", "
          << sweep.points.size() << " points\n";
    out.human = human.str();
    if (config.format == OutputFormat::csv) {
        out.data = sweep_csv(sweep);
    } else {
        json doc;
        doc["inputs"] = inputs_echo(config);
        doc["outputs"] = {{"f0_hz", round10(f0)}, {"points", sweep_json(sweep)}};
        doc["version"] = kVersion;
        out.data = doc.dump(2) + "\n";
    }
    return out;
}

RunOutput run_filter(const RunConfig& config) {
    if (config.resonator_count < 1 || config.resonator_count > 20)
        raise(errc::usage, "filter: --count must lie in 1..20");

    LumpedElectrical res;
    double n_for_coupling = 0.0;
    std::string source_note;
    if (config.re_direct > 0.0) {
        if (!(config.le_direct > 0.0) || !(config.ce_direct > 0.0))
            raise(errc::usage, "filter: direct entry needs --re-ohm, --le-h and --ce-f");
        res.re = config.re_direct;
        res.le = config.le_direct;
        res.ce = config.ce_direct;
        res.c0 = config.c0_direct;
        source_note = "direct RLC entry";
        if (config.coupling_ks > 0.0)
            raise(errc::usage, "filter: spring coupling requires the disk-derived "
                               "resonator (transduction factor unknown)");
    } else {
        MaterialRegistry registry;
        const Material& mat = resolve_material(config, registry);
        require_lumped_inputs(config);
        const Chain ch = lumped_chain(mat, disk_from(config), config.vdc, config.q,
                                      config.vi);
        res = ch.elec;
        n_for_coupling = ch.n;
        source_note = "disk-derived resonator";
    }

    FilterSpec spec;
    spec.resonators.assign(static_cast<std::size_t>(config.resonator_count), res);
    if (config.resonator_count > 1) {
        double cc = config.coupling_cap;
        if (cc <= 0.0 && config.coupling_ks > 0.0)
            cc = n_for_coupling * n_for_coupling / config.coupling_ks;
        if (!(cc > 0.0))
            raise(errc::usage, "filter: coupled chains need --coupling-cap-ff or "
                               "--coupling-ks");
        spec.couplings.assign(static_cast<std::size_t>(config.resonator_count) - 1, cc);
    }

    const double f0 = resonant_frequency(res);
    const double q_branch = branch_quality(res);

    double rq = config.rq;
    std::optional<TerminationResult> term;
    if (rq <= 0.0 && config.ripple_target_db) {
        spec.rq_in = spec.rq_out = res.re; // placeholder for validate()
        term = terminate_for_flat_passband(spec, *config.ripple_target_db);
        rq = term->rq;
    } else if (rq <= 0.0) {
        rq = res.re;
    }
    spec.rq_in = spec.rq_out = rq;

    double split_frac = 0.0;
    if (!spec.couplings.empty())
        split_frac = std::sqrt(1.0 + 2.0 * res.ce / spec.couplings[0]) - 1.0;
    const double margin = 6.0 * split_frac + 40.0 / q_branch;
    const double f_lo = config.fmin > 0.0 ? config.fmin : f0 * (1.0 - margin);
    const double f_hi = config.fmax > 0.0 ? config.fmax
                                          : f0 * (1.0 + split_frac) * (1.0 + margin);
    const int points = config.points > 2 ? std::max(config.points, 801) : 801;
    const FrequencySweep sweep = filter_network_response(spec, f_lo, f_hi, points);
    const FilterMetrics metrics = filter_metrics(sweep);

    Csv mcsv({"center_frequency_hz", "bandwidth_3db_hz", "percent_bandwidth",
              "insertion_loss_db", "stopband_rejection_db", "shape_factor_20db",
              "ripple_db", "rq_ohm"});
    mcsv.row({metrics.center_frequency, metrics.bandwidth_3db,
              metrics.percent_bandwidth, metrics.insertion_loss_db,
              metrics.stopband_rejection_db.value_or(0.0),
              metrics.shape_factor_20db.value_or(0.0), metrics.ripple_db, rq});

    RunOutput out;
    std::ostringstream human;
    human << "filter: " << config.resonator_count << " x " << source_note
          << ", R_Q = " << format_double(rq) << " ohm\n"
          << "  center " << fmt_mhz(metrics.center_frequency) << ", bandwidth "
          << format_double(metrics.bandwidth_3db) << " Hz ("
          << format_double(metrics.percent_bandwidth) << " %)\n"
          << "  insertion loss " << format_double(metrics.insertion_loss_db)
          << " dB, ripple " << format_double(metrics.ripple_db) << " dB\n";
    if (metrics.stopband_rejection_db)
        human << "  stopband rejection " << format_double(*metrics.stopband_rejection_db)
              << " dB\n";
    if (metrics.shape_factor_20db)
        human << "  20 dB shape factor " << format_double(*metrics.shape_factor_20db)
              << "\n";
    if (term)
        human << "  auto-termination ripple " << format_double(term->ripple_db)
              << " dB\n";
    out.human = human.str();

    if (config.format == OutputFormat::csv) {
        out.data = mcsv.str() + "\n" + sweep_csv(sweep);
    } else {
        json doc;
        doc["inputs"] = inputs_echo(config);
        json jm;
        jm["center_frequency_hz"] = round10(metrics.center_frequency);
        jm["bandwidth_3db_hz"] = round10(metrics.bandwidth_3db);
        jm["percent_bandwidth"] = round10(metrics.percent_bandwidth);
        jm["insertion_loss_db"] = round10(metrics.insertion_loss_db);
        jm["stopband_rejection_db"] = round10(metrics.stopband_rejection_db.value_or(0.0));
        jm["shape_factor_20db"] = round10(metrics.shape_factor_20db.value_or(0.0));
        jm["ripple_db"] = round10(metrics.ripple_db);
        jm["rq_ohm"] = round10(rq);
        doc["outputs"] = {{"metrics", jm}, {"sweep", sweep_json(sweep)}};
        doc["version"] = kVersion;
        out.data = doc.dump(2) + "\n";
    }
    return out;
}

RunOutput run_validate(const RunConfig& config) {
    const ValidationReport report = run_validation();
    RunOutput out;
    std::ostringstream human;
    for (const ValidationCheck& c : report.checks) {
        human << (c.passed ? "PASS " : "FAIL ") << c.name
              << ": computed " << format_double(c.computed)
              << ", expected " << format_double(c.expected)
              << ", metric " << format_double(c.metric)
              << " (tol " << format_double(c.tolerance) << ")\n";
    }
    human << (report.all_passed() ? "all checks passed\n"
                                  : "one or more checks FAILED\n");
    out.human = human.str();
    out.data = config.format == OutputFormat::csv ? report_to_csv(report)
                                                  : report_to_json(report);
    out.exit_code = report.all_passed() ? 0 : 1;
    return out;
}

RunOutput run(const RunConfig& config) {
    switch (config.command) {
        case Command::mode_freq: return run_mode_freq(config);
        case Command::lumped: return run_lumped(config);
        case Command::sweep: return run_sweep(config);
        case Command::filter: return run_filter(config);
        case Command::validate: return run_validate(config);
    }
    raise(errc::usage, "unknown command");
}

} // namespace mrt::cli
