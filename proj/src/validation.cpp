#include "mrt/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>

#include <json.hpp>

#include "mrt/filters.hpp"
#include "mrt/lumped.hpp"
#include "mrt/modal.hpp"
#include "mrt/numerics.hpp"
#include "mrt/response.hpp"
#include "mrt/version.hpp"

namespace mrt {

namespace {

// ---------------------------------------------------------------------------
// Double-double ascending-series reference for J_n, independent of the
// production kernel. Two-double arithmetic keeps ~31 digits, which holds the
// series cancellation at x=50 below ~1e-11 absolute.
// ---------------------------------------------------------------------------

struct DD { double hi, lo; };

DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

DD dd_div_d(DD a, double b) {
    const double q1 = a.hi / b;
    DD p = two_prod(q1, b);
    const double r = ((a.hi - p.hi) - p.lo + a.lo) / b;
    return quick_two_sum(q1, r);
}

double bessel_j_series_reference(int n, double x) {
    const DD half{0.5 * x, 0.0}; // exact
    DD term{1.0, 0.0};
    for (int k = 1; k <= n; ++k) term = dd_div_d(dd_mul(term, half), k);
    const DD q = dd_mul(half, half);
    DD sum = term;
    for (int k = 1; k < 600; ++k) {
        term = dd_mul(term, q);
        term = dd_div_d(term, -static_cast<double>(k) * (k + n));
        sum = dd_add(sum, term);
        if (std::fabs(term.hi) < 1e-34 * std::fabs(sum.hi) + 1e-320) break;
    }
    return sum.hi + sum.lo;
}

// ---------------------------------------------------------------------------
// Fixture plumbing
// ---------------------------------------------------------------------------

void add_value_check(ValidationReport& rep, std::string name, std::string source,
                     double expected, double computed, double tolerance) {
    ValidationCheck c;
    c.name = std::move(name);
    c.source = std::move(source);
    c.expected = expected;
    c.computed = computed;
    c.metric = std::fabs(computed - expected) / std::fabs(expected);
    c.tolerance = tolerance;
    c.passed = c.metric <= tolerance;
    rep.checks.push_back(std::move(c));
}

void add_property_check(ValidationReport& rep, std::string name, std::string source,
                        double worst, double tolerance) {
    ValidationCheck c;
    c.name = std::move(name);
    c.source = std::move(source);
    c.expected = 0.0;
    c.computed = worst;
    c.metric = worst;
    c.tolerance = tolerance;
    c.passed = worst <= tolerance;
    rep.checks.push_back(std::move(c));
}

// Reference-device constants: 18 um polysilicon radial-contour disk
// (Wang et al. 2004), the standard model-to-hardware correlation fixture.
struct ReferenceDisk {
    DiskGeometry geometry{18e-6, 2.1e-6, 87e-9, kPi, 0.8e-6};
    double vdc = 6.0;
    double q = 12289.0;
    double published_f0 = 152.4e6;
    double published_meff = 3.83e-12;
    double published_keff = 3.52e6;
    double published_beff = 3.01e-7;
    double published_re = 479.526e3;
    double published_le = 6.20;
    double published_ce = 1.78e-19;
};

void check_lambda_table(ValidationReport& rep, const ValidationOptions& opts) {
    const double kTable[4] = {1.99, 5.37, 8.42, 11.52};
    const double sigma = 0.226;
    for (int i = 1; i <= 4; ++i) {
        double lambda;
        if (opts.bessel_override) {
            const auto& J = opts.bessel_override;
            const auto f = [&](double x) {
                return x * J(0, x) - (1.0 - sigma) * J(1, x);
            };
            lambda = find_roots_ascending(f, 0.05, 30.0, static_cast<std::size_t>(i))[i - 1];
        } else {
            lambda = disk_lambda(sigma, i);
        }
        add_value_check(rep, "radial-lambda/mode" + std::to_string(i),
                        "legacy radial-mode frequency-parameter tabulation",
                        kTable[i - 1], lambda, 0.01);
    }
}

void check_reference_disk(ValidationReport& rep) {
    const ReferenceDisk dev;
    const Material& poly = builtin_material("polysilicon");

    const ModeSolution mode = disk_radial_f0(poly, dev.geometry, 1);
    add_value_check(rep, "reference-disk/f0",
                    "published analysis, 18 um polysilicon disk (Wang et al. 2004)",
                    dev.published_f0, mode.f0, 0.05);

    const double meff = effective_mass(poly, dev.geometry, mode);
    add_value_check(rep, "reference-disk/m-eff",
                    "published analysis (Wang et al. 2004)",
                    dev.published_meff, meff, 0.05);

    // Stiffness and damping validated from the published f0/m_eff pair.
    ModeSolution published_mode;
    published_mode.f0 = dev.published_f0;
    published_mode.omega0 = 2.0 * kPi * dev.published_f0;
    const double keff = effective_stiffness(published_mode, dev.published_meff);
    add_value_check(rep, "reference-disk/k-eff",
                    "published analysis (Wang et al. 2004)",
                    dev.published_keff, keff, 0.01);
    const double beff = damping_factor(published_mode, dev.published_meff, dev.q);
    add_value_check(rep, "reference-disk/b-eff",
                    "published analysis (Wang et al. 2004)",
                    dev.published_beff, beff, 0.02);

    // RLC reflection from the published mechanical elements with the computed
    // transduction factor; absolute values held loosely (the device's true
    // electrode coverage is not published), the n-independent products tightly.
    const DriveCondition drive{dev.vdc, 0.0};
    const double n = transduction_factor(dev.geometry, drive, kPi);
    LumpedMechanical published_mech;
    published_mech.m_eff = dev.published_meff;
    published_mech.k_eff = dev.published_keff;
    published_mech.q = dev.q;
    published_mech.b_eff = std::sqrt(dev.published_keff * dev.published_meff) / dev.q;
    const double c0 = static_capacitance(dev.geometry);
    const LumpedElectrical elec = extract_rlc(published_mech, n, c0);
    add_value_check(rep, "reference-disk/re", "published analysis (Wang et al. 2004)",
                    dev.published_re, elec.re, 0.15);
    add_value_check(rep, "reference-disk/le", "published analysis (Wang et al. 2004)",
                    dev.published_le, elec.le, 0.15);
    add_value_check(rep, "reference-disk/ce", "published analysis (Wang et al. 2004)",
                    dev.published_ce, elec.ce, 0.15);

    const double w0 = 2.0 * kPi * dev.published_f0;
    add_value_check(rep, "reference-disk/le-ce-identity",
                    "series-resonance identity Le*Ce = 1/w0^2 on the published values",
                    1.0 / (w0 * w0), dev.published_le * dev.published_ce, 0.02);
    add_value_check(rep, "reference-disk/re-le-identity",
                    "series-resonance identity Re/Le = w0/Q on the published values",
                    w0 / dev.q, dev.published_re / dev.published_le, 0.02);
}

void check_device_survey(ValidationReport& rep) {
    const Material& poly = builtin_material("polysilicon");

    add_value_check(rep, "devices/square-flexural",
                    "published 16 um square plate, 68 MHz (Demirci & Nguyen 2006)",
                    68e6,
                    square_flexural_f0(poly, {16e-6, 2.2e-6, 90e-9}).f0, 0.03);

    add_value_check(rep, "devices/ccbeam",
                    "published 40 um clamped-clamped beam, 9.34 MHz (Lin et al. 2004)",
                    9.34e6,
                    ccbeam_f0(poly, {40e-6, 8e-6, 2e-6, 100e-9, 0.0, 1.0}).f0, 0.15);

    add_value_check(rep, "devices/wineglass-disk",
                    "published 32 um wine-glass disk, 60 MHz (Lin et al. 2004)",
                    60e6,
                    wineglass_f0(poly, {32e-6, 3e-6, 80e-9, kPi, 0.0}).f0, 0.10);

    add_value_check(rep, "devices/ring",
                    "published hollow-disk ring, 1.2 GHz, third radial mode (Li et al. 2004)",
                    1.2e9,
                    ring_contour_f0(poly, {11.8e-6, 18.7e-6, 2e-6, 0.0, 100e-9}, 3).f0,
                    0.10);
}

void check_re_closed_form(ValidationReport& rep) {
    const DiskGeometry base{18e-6, 2.1e-6, 100e-9, kPi, 0.0};
    add_value_check(rep, "re-closed-form/value",
                    "independent arithmetic on the polysilicon lump constant",
                    34.7e3, motional_resistance_formula(base, 1e4, 30.0), 0.02);

    // Exact quartic gap scaling and inverse-square bias scaling across the
    // published sweep box (gap 50..200 nm, thickness 1..4 um, radius 12/18 um).
    double worst = 0.0;
    const double gaps[] = {50e-9, 87e-9, 120e-9, 200e-9};
    const double thicknesses[] = {1e-6, 2.1e-6, 4e-6};
    const double radii[] = {12e-6, 18e-6};
    for (double r : radii)
        for (double t : thicknesses) {
            const DiskGeometry ref{r, t, gaps[0], kPi, 0.0};
            const double re_ref = motional_resistance_formula(ref, 1e4, 30.0);
            for (double d : gaps) {
                const DiskGeometry g{r, t, d, kPi, 0.0};
                const double re = motional_resistance_formula(g, 1e4, 30.0);
                const double predicted = re_ref * std::pow(d / gaps[0], 4.0);
                worst = std::max(worst, std::fabs(re / predicted - 1.0));
            }
        }
    add_property_check(rep, "re-closed-form/gap-quartic",
                       "worst |Re(d0)/(Re_ref (d0/d_ref)^4) - 1| over the sweep box",
                       worst, 1e-3);

    worst = 0.0;
    const double biases[] = {5.0, 10.0, 30.0, 60.0};
    const double re_ref = motional_resistance_formula(base, 1e4, biases[0]);
    for (double v : biases) {
        const double re = motional_resistance_formula(base, 1e4, v);
        const double predicted = re_ref * (biases[0] * biases[0]) / (v * v);
        worst = std::max(worst, std::fabs(re / predicted - 1.0));
    }
    add_property_check(rep, "re-closed-form/vdc-inverse-square",
                       "worst |Re(V)/(Re_ref (V_ref/V)^2) - 1| over the bias range",
                       worst, 1e-3);
}

void check_filters(ValidationReport& rep) {
    // Closed-form capacitive mode split.
    add_value_check(rep, "filters/coupled-mode-split",
                    "independent arithmetic, pi f0 Cc Re Q = 100 pi",
                    10.0159e6,
                    electrical_mode_split(10e6, 10e3, 1000.0, 1e-12), 1e-5);

    // Spring-coupled split against the 2-DOF eigenvalue closed form.
    double worst = 0.0;
    const double kr = 3.5e6;
    for (double ratio : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 2.0}) {
        const double ks = ratio * kr;
        const double f0 = 10e6;
        const double split = mechanical_mode_split(f0, ks, kr);
        const double eigen = f0 * std::sqrt((kr + 2.0 * ks) / kr);
        worst = std::max(worst, std::fabs(split - eigen) / eigen);
    }
    add_property_check(rep, "filters/spring-split-eigen",
                       "worst relative deviation from the 2-DOF eigenvalue closed form",
                       worst, 1e-14);

    // Network-extracted split of two identical reference-class resonators.
    LumpedElectrical res;
    res.re = 479.526e3;
    res.le = 6.20;
    res.ce = 1.78e-19;
    res.n = 1.0;
    res.c0 = 0.0;
    const double f0 = resonant_frequency(res);
    const double q = branch_quality(res);
    const double cc = 100.0 / (f0 * res.re * q); // pi f0 Cc Re Q = 100 pi
    const double f1 = electrical_mode_split(f0, res.re, q, cc);

    FilterSpec spec;
    spec.resonators = {res, res};
    spec.couplings = {cc};
    spec.rq_in = res.re / 1e4;
    spec.rq_out = res.re / 1e4;
    const double split = f1 - f0;
    const FrequencySweep sweep = filter_network_response(
        spec, f0 - 2.0 * split, f1 + 2.0 * split, 4001);
    const auto peaks = find_sweep_peaks(sweep);
    double metric = 1.0;
    if (peaks.size() == 2) {
        const double err_lo = std::fabs(peaks[0].frequency - f0) / f0;
        const double err_hi = std::fabs(peaks[1].frequency - f1) / f1;
        const double err_split =
            std::fabs((peaks[1].frequency - peaks[0].frequency) - split) / split;
        metric = std::max({err_lo, err_hi, err_split});
    }
    add_property_check(rep, "filters/network-split",
                       "two-peak ladder response vs the closed-form mode pair "
                       "(worst of both locations and the split width)",
                       metric, 0.005);

    // Bandwidth -> quality factor recovery on a synthesized 810 kHz sweep.
    const double target_f0 = 810e3, target_q = 1500.0;
    LumpedElectrical rlc;
    rlc.re = 10e3;
    rlc.le = target_q * rlc.re / (2.0 * kPi * target_f0);
    rlc.ce = 1.0 / (std::pow(2.0 * kPi * target_f0, 2.0) * rlc.le);
    rlc.n = 1.0;
    rlc.c0 = 0.0;
    const FrequencySweep rsweep = two_port_response(rlc, false, 0.8 * target_f0,
                                                    1.25 * target_f0, 1501);
    const FilterMetrics metrics = filter_metrics(rsweep);
    add_value_check(rep, "filters/bandwidth-540hz",
                    "published coupled-beam filter figure, 540 Hz at 810 kHz "
                    "(Pourkamali & Ayazi 2005)",
                    540.0, metrics.bandwidth_3db, 0.02);
    add_value_check(rep, "filters/q-from-bandwidth",
                    "published coupled-beam filter figure, Q = 810 kHz / 540 Hz",
                    target_q,
                    q_from_bandwidth(metrics.center_frequency, metrics.bandwidth_3db),
                    0.02);
}

void check_q_budget(ValidationReport& rep) {
    std::mt19937 gen(12345);
    std::uniform_int_distribution<int> count_dist(1, 6);
    std::uniform_real_distribution<double> exp_dist(1.0, 7.0);
    std::uniform_int_distribution<int> pick(0, 5);

    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = count_dist(gen);
        std::vector<double> qs(6, 0.0);
        std::vector<int> slots{0, 1, 2, 3, 4, 5};
        std::shuffle(slots.begin(), slots.end(), gen);
        std::vector<double> values;
        for (int i = 0; i < n; ++i) {
            const double q = std::pow(10.0, exp_dist(gen));
            qs[slots[i]] = q;
            values.push_back(q);
        }
        const auto to_budget = [](const std::vector<double>& v) {
            QBudget b;
            const auto opt = [](double q) {
                return q > 0.0 ? std::optional<double>(q) : std::nullopt;
            };
            b.air_damping = opt(v[0]);
            b.air_squeezing = opt(v[1]);
            b.anchor_loss = opt(v[2]);
            b.thermoelastic = opt(v[3]);
            b.surface = opt(v[4]);
            b.internal_friction = opt(v[5]);
            return b;
        };
        const double q_total = combine_q(to_budget(qs));

        double inv = 0.0, qmin = std::numeric_limits<double>::infinity();
        for (double q : values) { inv += 1.0 / q; qmin = std::min(qmin, q); }
        if (std::fabs(1.0 / q_total - inv) > 1e-12 * inv) ++violations;
        if (q_total > qmin * (1.0 + 1e-12)) ++violations;
        if (values.size() == 1 && std::fabs(q_total - qmin) > 1e-12 * qmin) ++violations;
        if (values.size() > 1 && !(q_total < qmin)) ++violations;

        // permutation invariance: reshuffle the same values into other slots
        std::vector<double> qs2(6, 0.0);
        std::shuffle(slots.begin(), slots.end(), gen);
        for (int i = 0; i < n; ++i) qs2[slots[i]] = values[i];
        if (std::fabs(combine_q(to_budget(qs2)) - q_total) > 1e-12 * q_total) ++violations;

        // monotonicity: raising one mechanism raises the total
        std::vector<double> qs3 = qs;
        for (double& q : qs3)
            if (q > 0.0) { q *= 1.5; break; }
        if (!(combine_q(to_budget(qs3)) > q_total)) ++violations;
    }
    add_property_check(rep, "q-budget/property-suite",
                       "violations across 1000 seeded random budgets "
                       "(reciprocal sum, <= min, permutation, monotonicity)",
                       violations, 0.0);

    QBudget backsolve;
    backsolve.air_damping = 1.0 / (1.0 / 9316.0 - 1.0 / 12289.0);
    add_value_check(rep, "q-budget/air-backsolve",
                    "vacuum/air pair of the reference disk (Wang et al. 2004)",
                    38510.0, *backsolve.air_damping, 0.01);
}

void check_numerics(ValidationReport& rep) {
    // 200-point grid over [0, 50] against the double-double series reference.
    double worst = 0.0;
    for (int order = 0; order <= 8; ++order)
        for (int i = 0; i < 200; ++i) {
            const double x = 50.0 * i / 199.0;
            worst = std::max(worst, std::fabs(bessel_j(order, x)
                                              - bessel_j_series_reference(order, x)));
        }
    add_property_check(rep, "numerics/bessel-grid",
                       "max |J_n - reference| over orders 0..8 on a 200-point grid [0,50]",
                       worst, 1e-10);

    worst = 0.0;
    for (int n = 1; n <= 7; ++n)
        for (int i = 0; i < 120; ++i) {
            const double x = 0.1 + (50.0 - 0.1) * i / 119.0;
            const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
            worst = std::max(worst, std::fabs(lhs - 2.0 * n / x * bessel_j(n, x)));
        }
    add_property_check(rep, "numerics/recurrence",
                       "max |J_{n-1}+J_{n+1} - (2n/x) J_n| for n in 1..7, x in [0.1, 50]",
                       worst, 1e-8);

    worst = 0.0;
    for (int i = 0; i < 120; ++i) {
        const double x = 0.1 + (50.0 - 0.1) * i / 119.0;
        const double w = bessel_j(1, x) * bessel_y(0, x)
                         - bessel_j(0, x) * bessel_y(1, x);
        worst = std::max(worst, std::fabs(w - 2.0 / (kPi * x)));
    }
    add_property_check(rep, "numerics/wronskian",
                       "max |J1 Y0 - J0 Y1 - 2/(pi x)| (recurrence-form derivatives)",
                       worst, 1e-8);

    // Closed-form effective mass against the kinetic-energy quadrature.
    worst = 0.0;
    const double sigma = 0.226;
    for (int i = 1; i <= 4; ++i) {
        const double lam = disk_lambda(sigma, i);
        const double j0 = bessel_j(0, lam), j1 = bessel_j(1, lam),
                     j2 = bessel_j(2, lam);
        const double closed = 0.5 * (1.0 - j0 * j2 / (j1 * j1));
        const double integral = integrate(
            [lam](double r) { const double j = bessel_j(1, lam * r); return r * j * j; },
            0.0, 1.0) / (j1 * j1);
        worst = std::max(worst, std::fabs(integral - closed) / closed);
    }
    add_property_check(rep, "numerics/quadrature-meff",
                       "worst relative gap between the closed-form and quadrature "
                       "effective-mass routes, first four radial modes",
                       worst, 1e-6);
}

} // namespace

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const ValidationCheck& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ValidationReport run_validation(const ValidationOptions& opts) {
    ValidationReport rep;
    check_lambda_table(rep, opts);
    check_reference_disk(rep);
    check_device_survey(rep);
    check_re_closed_form(rep);
    check_filters(rep);
    check_q_budget(rep);
    check_numerics(rep);
    return rep;
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json doc;
    doc["version"] = kVersion;
    doc["all_passed"] = report.all_passed();
    nlohmann::json arr = nlohmann::json::array();
    for (const ValidationCheck& c : report.checks)
        arr.push_back({{"name", c.name},
                       {"source", c.source},
                       {"expected", c.expected},
                       {"computed", c.computed},
                       {"metric", c.metric},
                       {"tolerance", c.tolerance},
                       {"passed", c.passed}});
    doc["checks"] = std::move(arr);
    return doc.dump(2) + "\n";
}

ValidationReport report_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(errc::parse, std::string("validation report: ") + e.what());
    }
    ValidationReport rep;
    for (const auto& rec : doc.at("checks")) {
        ValidationCheck c;
        c.name = rec.at("name").get<std::string>();
        c.source = rec.at("source").get<std::string>();
        c.expected = rec.at("expected").get<double>();
        c.computed = rec.at("computed").get<double>();
        c.metric = rec.at("metric").get<double>();
        c.tolerance = rec.at("tolerance").get<double>();
        c.passed = rec.at("passed").get<bool>();
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

std::string report_to_csv(const ValidationReport& report) {
    std::string out = "name,expected,computed,metric,tolerance,passed,source\n";
    char buf[512];
    for (const ValidationCheck& c : report.checks) {
        // source strings carry commas: quote that field
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g,%s,\"%s\"\n",
                      c.name.c_str(), c.expected, c.computed, c.metric, c.tolerance,
                      c.passed ? "true" : "false", c.source.c_str());
        out += buf;
    }
    return out;
}

} // namespace mrt
