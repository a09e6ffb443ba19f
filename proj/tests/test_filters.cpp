#include <doctest.h>

#include <cmath>

#include "mrt/filters.hpp"

using mrt::Error;
using mrt::FilterSpec;
using mrt::LumpedElectrical;
using mrt::errc;

namespace {

LumpedElectrical reference_branch() {
    LumpedElectrical e;
    e.re = 479.526e3;
    e.le = 6.20;
    e.ce = 1.78e-19;
    e.n = 8.33e-7;
    e.c0 = 1.2086e-14;
    return e;
}

// symmetric 2-resonator spec with pi f0 Cc Re Q = `strength` * pi
FilterSpec coupled_pair(const LumpedElectrical& res, double strength, double rq) {
    const double f0 = mrt::resonant_frequency(res);
    const double q = mrt::branch_quality(res);
    FilterSpec spec;
    spec.resonators = {res, res};
    spec.couplings = {strength / (f0 * res.re * q)};
    spec.rq_in = spec.rq_out = rq;
    return spec;
}

} // namespace

TEST_CASE("electrical mode split closed form") {
    const double f1 = mrt::electrical_mode_split(10e6, 10e3, 1000.0, 1e-12);
    CHECK(std::fabs(f1 - 10.0159e6) < 100.0); // within 0.1 kHz
    CHECK(f1 == doctest::Approx(10015902.8493).epsilon(1e-9));
    CHECK(f1 > 10e6);

    // strong coupling pushes f1 down to f0
    const double tight = mrt::electrical_mode_split(10e6, 10e3, 1000.0, 1e-9);
    CHECK(tight > 10e6);
    CHECK(tight < f1);

    // vanishing coupling runs away and is flagged
    mrt::WarningList warnings;
    const double loose = mrt::electrical_mode_split(10e6, 10e3, 1000.0, 1e-18, &warnings);
    CHECK(loose > 2.0 * 10e6);
    CHECK(!warnings.empty());

    // f1/f0 decreases as each parameter grows
    const double base = f1 / 10e6;
    CHECK(mrt::electrical_mode_split(10e6, 20e3, 1000.0, 1e-12) / 10e6 < base);
    CHECK(mrt::electrical_mode_split(10e6, 10e3, 2000.0, 1e-12) / 10e6 < base);
    CHECK(mrt::electrical_mode_split(20e6, 10e3, 1000.0, 1e-12) / 20e6 < base);
    CHECK(mrt::electrical_mode_split(10e6, 10e3, 1000.0, 2e-12) / 10e6 < base);
}

TEST_CASE("mechanical mode split equals the 2-DOF eigen pair") {
    CHECK(mrt::mechanical_mode_split(10e6, 0.0, 3.5e6) == 10e6);
    CHECK(mrt::mechanical_mode_split(10e6, 0.01 * 3.5e6, 3.5e6)
          == doctest::Approx(10e6 * std::sqrt(1.02)).epsilon(1e-15));

    // two masses m with grounded springs kr and coupler ks: the stiffness
    // matrix eigenvalues are kr and kr + 2 ks (quadratic formula on the
    // characteristic polynomial), so f1/f0 = sqrt((kr + 2 ks)/kr).
    for (double ks : {1.0, 35.0, 1.2e3, 0.4e6}) {
        const double kr = 3.5e6, m = 3.8e-12, f0 = std::sqrt(kr / m) / (2.0 * mrt::kPi);
        const double b = -(2.0 * (kr + ks)), c = (kr + ks) * (kr + ks) - ks * ks;
        const double disc = std::sqrt(b * b - 4.0 * c);
        const double k_low = (-b - disc) / 2.0, k_high = (-b + disc) / 2.0;
        CHECK(k_low == doctest::Approx(kr).epsilon(1e-12));
        const double eigen_f1 = std::sqrt(k_high / m) / (2.0 * mrt::kPi);
        CHECK(mrt::mechanical_mode_split(f0, ks, kr)
              == doctest::Approx(eigen_f1).epsilon(1e-12));
    }
}

TEST_CASE("network response splits into the closed-form mode pair") {
    const LumpedElectrical res = reference_branch();
    const double f0 = mrt::resonant_frequency(res);
    const double q = mrt::branch_quality(res);
    FilterSpec spec = coupled_pair(res, 100.0, res.re / 1e4);
    const double f1 = mrt::electrical_mode_split(f0, res.re, q, spec.couplings[0]);
    const double split = f1 - f0;

    const auto sweep =
        mrt::filter_network_response(spec, f0 - 2.0 * split, f1 + 2.0 * split, 4001);
    const auto peaks = mrt::find_sweep_peaks(sweep);
    REQUIRE(peaks.size() == 2);
    CHECK(std::fabs(peaks[0].frequency - f0) / f0 < 0.005);
    CHECK(std::fabs(peaks[1].frequency - f1) / f1 < 0.005);
    CHECK(std::fabs((peaks[1].frequency - peaks[0].frequency) - split) / split < 0.005);

    // half-circuit route: out-of-phase mode = one resonator with Cc/2 in series
    const double cc2 = spec.couplings[0] / 2.0;
    const double ce_series = res.ce * cc2 / (res.ce + cc2);
    const double f_half = 1.0 / (2.0 * mrt::kPi * std::sqrt(res.le * ce_series));
    CHECK(std::fabs(peaks[1].frequency - f_half) / f_half < 0.001);
}

TEST_CASE("single resonator ladder reduces to a one-peak response") {
    const LumpedElectrical res = reference_branch();
    FilterSpec spec;
    spec.resonators = {res};
    spec.rq_in = spec.rq_out = res.re / 100.0;
    const double f0 = mrt::resonant_frequency(res);
    const auto sweep = mrt::filter_network_response(spec, 0.999 * f0, 1.001 * f0, 2001);
    const auto peaks = mrt::find_sweep_peaks(sweep);
    REQUIRE(peaks.size() == 1);
    CHECK(std::fabs(peaks[0].frequency - f0) / f0 < 1e-4);
}

TEST_CASE("mode count equals the number of coupled resonators") {
    const LumpedElectrical res = reference_branch();
    const double f0 = mrt::resonant_frequency(res);
    const double q = mrt::branch_quality(res);
    FilterSpec spec;
    spec.resonators = {res, res, res};
    const double cc = 100.0 / (f0 * res.re * q);
    spec.couplings = {cc, cc};
    spec.rq_in = spec.rq_out = res.re / 1e4;
    const double f_top = f0 * std::sqrt(1.0 + 4.0 * res.ce / cc);
    const auto sweep = mrt::filter_network_response(
        spec, f0 * (1.0 - 2.0 * (f_top / f0 - 1.0)), f_top * 1.001, 6001);
    CHECK(mrt::find_sweep_peaks(sweep).size() == 3);
}

TEST_CASE("reciprocity of an asymmetric chain with equal terminations") {
    const LumpedElectrical a = reference_branch();
    LumpedElectrical b = a;
    b.re *= 1.8;
    b.le *= 1.15;
    b.ce /= 1.15; // shifted second pole
    const double f0 = mrt::resonant_frequency(a);

    FilterSpec fwd;
    fwd.resonators = {a, b};
    fwd.couplings = {1e-16};
    fwd.rq_in = fwd.rq_out = 50e3;
    FilterSpec rev = fwd;
    std::swap(rev.resonators[0], rev.resonators[1]);

    const auto sf = mrt::filter_network_response(fwd, 0.99 * f0, 1.02 * f0, 801);
    const auto sr = mrt::filter_network_response(rev, 0.99 * f0, 1.02 * f0, 801);
    for (std::size_t i = 0; i < sf.points.size(); ++i) {
        const double mf = std::abs(sf.points[i].value);
        const double mr = std::abs(sr.points[i].value);
        CHECK(std::fabs(mf - mr) <= 1e-9 * std::max(mf, 1e-30));
    }
}

TEST_CASE("mechanical chain conversion reproduces the spring split") {
    mrt::MechanicalFilterSpec mech;
    mrt::LumpedMechanical r;
    r.m_eff = 3.83e-12;
    r.k_eff = 3.52e6;
    r.q = 12289.0;
    r.b_eff = std::sqrt(r.k_eff * r.m_eff) / r.q;
    mech.resonators = {r, r};
    const double ks = 0.002 * r.k_eff;
    mech.coupling_stiffness = {ks};
    mech.transduction_factor = 8.33e-7;
    mech.c0 = 0.0;
    mech.rq_in = mech.rq_out = 1.0;

    const FilterSpec spec = mrt::to_electrical(mech);
    REQUIRE(spec.couplings.size() == 1);
    CHECK(spec.couplings[0]
          == doctest::Approx(mech.transduction_factor * mech.transduction_factor / ks)
                 .epsilon(1e-12));

    const double f0 = mrt::resonant_frequency(spec.resonators[0]);
    const double f1_spring = mrt::mechanical_mode_split(f0, ks, r.k_eff);
    const double f1_net =
        f0 * std::sqrt(1.0 + 2.0 * spec.resonators[0].ce / spec.couplings[0]);
    CHECK(f1_net == doctest::Approx(f1_spring).epsilon(1e-12));
}

TEST_CASE("termination search flattens the passband") {
    const LumpedElectrical res = reference_branch();
    FilterSpec spec = coupled_pair(res, 100.0, res.re); // rq placeholder
    const double f0 = mrt::resonant_frequency(res);
    const double q = mrt::branch_quality(res);
    const double f1 = mrt::electrical_mode_split(f0, res.re, q, spec.couplings[0]);
    const double split = f1 - f0;

    // near-zero terminations: jagged two-peak response
    FilterSpec jagged = spec;
    jagged.rq_in = jagged.rq_out = res.re / 100.0;
    const auto rough = mrt::filter_network_response(jagged, f0 - 2.0 * split,
                                                    f1 + 2.0 * split, 1601);
    CHECK(mrt::passband_peak_to_valley(rough) > 3.0);

    const auto term = mrt::terminate_for_flat_passband(spec, 1.0);
    CHECK(term.ripple_db <= 1.0);
    CHECK(term.rq > 0.0);

    FilterSpec flat = spec;
    flat.rq_in = flat.rq_out = term.rq;
    const auto smooth = mrt::filter_network_response(flat, f0 - 2.0 * split,
                                                     f1 + 2.0 * split, 1601);
    CHECK(mrt::passband_peak_to_valley(smooth) <= 1.01);

    const auto metrics = mrt::filter_metrics(smooth);
    CHECK(metrics.center_frequency > f0 * 0.9999);
    CHECK(metrics.center_frequency < f1 * 1.0001);
    CHECK(metrics.ripple_db <= 1.01);
}

TEST_CASE("termination search reports unreachable targets") {
    // strong coupling: the peaks never merge inside [Re/100, 100 Re], so a
    // near-zero ripple target cannot be met
    const LumpedElectrical res = reference_branch();
    FilterSpec spec = coupled_pair(res, 3.0, res.re);
    try {
        (void)mrt::terminate_for_flat_passband(spec, 1e-4);
        FAIL("expected target_unreachable");
    } catch (const Error& e) {
        CHECK(e.code() == errc::target_unreachable);
        CHECK(std::string(e.what()).find("best achievable") != std::string::npos);
    }
}

TEST_CASE("narrower filters pay more insertion loss") {
    const LumpedElectrical res = reference_branch();
    const auto il_at = [&](double strength) {
        FilterSpec spec = coupled_pair(res, strength, res.re);
        const double f0 = mrt::resonant_frequency(res);
        const double q = mrt::branch_quality(res);
        const double f1 = mrt::electrical_mode_split(f0, res.re, q, spec.couplings[0]);
        const auto term = mrt::terminate_for_flat_passband(spec, 1.0);
        spec.rq_in = spec.rq_out = term.rq;
        const auto sweep = mrt::filter_network_response(
            spec, f0 - 2.0 * (f1 - f0), f1 + 2.0 * (f1 - f0), 2001);
        return mrt::filter_metrics(sweep).insertion_loss_db;
    };
    // stronger coupling capacitor -> smaller split -> filter Q closer to the
    // resonator Q -> more loss
    CHECK(il_at(400.0) > il_at(100.0));
}

TEST_CASE("optional port capacitances perturb the response without breaking it") {
    LumpedElectrical res = reference_branch();
    res.c0 = 1.2086e-14;
    FilterSpec spec = coupled_pair(res, 100.0, res.re);
    const double f0 = mrt::resonant_frequency(res);
    const double q = mrt::branch_quality(res);
    const double f1 = mrt::electrical_mode_split(f0, res.re, q, spec.couplings[0]);
    const double split = f1 - f0;

    const auto bare = mrt::filter_network_response(spec, f0 - 2.0 * split,
                                                   f1 + 2.0 * split, 1201);
    spec.include_port_capacitance = true;
    const auto loaded = mrt::filter_network_response(spec, f0 - 2.0 * split,
                                                     f1 + 2.0 * split, 1201);
    // At this impedance level (1/(w C0) = 87 kohm against a 480 kohm
    // termination) the port shunts load the dividers hard; the mode pair
    // itself must survive in place.
    double max_rel = 0.0;
    for (std::size_t i = 0; i < bare.points.size(); ++i) {
        const double mb = std::abs(bare.points[i].value);
        max_rel = std::max(max_rel,
                           std::abs(std::abs(loaded.points[i].value) - mb) / mb);
    }
    CHECK(max_rel > 0.01); // the shunts genuinely load the ports
    const auto bare_peaks = mrt::find_sweep_peaks(bare);
    const auto loaded_peaks = mrt::find_sweep_peaks(loaded);
    REQUIRE(bare_peaks.size() == 2);
    REQUIRE(loaded_peaks.size() == 2);
    for (int i = 0; i < 2; ++i)
        CHECK(std::fabs(loaded_peaks[i].frequency - bare_peaks[i].frequency)
              / bare_peaks[i].frequency < 1e-4);
}

TEST_CASE("active cascading multiplies stage transfers") {
    const LumpedElectrical res = reference_branch();
    const double f0 = mrt::resonant_frequency(res);
    const auto stage = mrt::two_port_response(res, false, 0.98 * f0, 1.02 * f0, 1501);
    const auto cascade = mrt::cascade_active({stage, stage}, 2.5);

    REQUIRE(cascade.points.size() == stage.points.size());
    for (std::size_t i = 0; i < stage.points.size(); i += 97)
        CHECK(std::abs(cascade.points[i].value
                       - 2.5 * stage.points[i].value * stage.points[i].value)
              < 1e-18);

    // squaring a one-pole passband narrows the half-power width by
    // sqrt(sqrt(2) - 1) = 0.6436
    const auto m1 = mrt::filter_metrics(stage);
    const auto m2 = mrt::filter_metrics(cascade);
    CHECK(m2.bandwidth_3db / m1.bandwidth_3db
          == doctest::Approx(std::sqrt(std::sqrt(2.0) - 1.0)).epsilon(0.01));

    // grids must match
    auto other = mrt::two_port_response(res, false, 0.97 * f0, 1.02 * f0, 1501);
    CHECK_THROWS_AS((void)mrt::cascade_active({stage, other}, 1.0), Error);
}

TEST_CASE("filter metrics on a single-pole response") {
    // synthesized series-RLC magnitude: the shape factor of a one-pole
    // passband is sqrt(10^2-1)/sqrt(10^0.3-1) = 9.9735
    const double f0 = 810e3, q = 1500.0;
    mrt::FrequencySweep sweep;
    sweep.kind = mrt::SweepKind::transadmittance;
    for (int i = 0; i <= 20000; ++i) {
        const double f = f0 * (0.9 + 0.2 * i / 20000.0);
        const double x = q * (f / f0 - f0 / f);
        sweep.points.push_back({f, mrt::complexd(1.0 / std::sqrt(1.0 + x * x), 0.0)});
    }
    const auto m = mrt::filter_metrics(sweep);
    CHECK(std::fabs(m.bandwidth_3db - 540.0) / 540.0 < 0.02);
    CHECK(std::fabs(m.center_frequency - f0) / f0 < 1e-4);
    REQUIRE(m.shape_factor_20db.has_value());
    CHECK(std::fabs(*m.shape_factor_20db - 9.9735) / 9.9735 < 0.01);
    CHECK(*m.shape_factor_20db >= 1.0);
    REQUIRE(m.stopband_rejection_db.has_value());
    CHECK(*m.stopband_rejection_db > 15.0);
    CHECK(*m.stopband_rejection_db < 25.0);
    CHECK(m.ripple_db == 0.0);
    CHECK(m.insertion_loss_db == doctest::Approx(0.0).epsilon(1e-6));

    // no passband: monotone sweep
    mrt::FrequencySweep ramp;
    ramp.kind = mrt::SweepKind::voltage_ratio;
    for (int i = 0; i < 64; ++i)
        ramp.points.push_back({1e6 + i * 1e3, mrt::complexd(1.0 + i, 0.0)});
    CHECK_THROWS_AS((void)mrt::filter_metrics(ramp), Error);
}

TEST_CASE("filter spec validation") {
    const LumpedElectrical res = reference_branch();
    FilterSpec bad;
    bad.resonators = {res, res};
    bad.couplings = {};
    bad.rq_in = bad.rq_out = 100.0;
    CHECK_THROWS_AS(mrt::validate(bad), Error);
    bad.couplings = {1e-15};
    bad.rq_out = 0.0;
    CHECK_THROWS_AS(mrt::validate(bad), Error);
}
