#include "mrt/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mrt {

namespace {

constexpr double kHalfPowerDb = 3.0102999566398120; // 10 log10(2)

double to_db(double magnitude) {
    return magnitude > 0.0 ? 20.0 * std::log10(magnitude) : -400.0;
}

// Solves the (n x n) complex system in place; partial pivoting.
std::vector<complexd> solve_dense(std::vector<complexd> a, std::vector<complexd> rhs,
                                  std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double mag = std::abs(a[row * n + col]);
            if (mag > best) { best = mag; pivot = row; }
        }
        if (!(best > 1e-300))
            raise(errc::singular_network, "filter network: singular nodal matrix");
        if (pivot != col) {
            for (std::size_t k = col; k < n; ++k)
                std::swap(a[pivot * n + k], a[col * n + k]);
            std::swap(rhs[pivot], rhs[col]);
        }
        const complexd inv = 1.0 / a[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const complexd factor = a[row * n + col] * inv;
            if (factor == complexd(0.0)) continue;
            for (std::size_t k = col; k < n; ++k)
                a[row * n + k] -= factor * a[col * n + k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<complexd> x(n);
    for (std::size_t row = n; row-- > 0;) {
        complexd acc = rhs[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= a[row * n + k] * x[k];
        x[row] = acc / a[row * n + row];
    }
    return x;
}

complexd ladder_transfer(const FilterSpec& spec, double f) {
    const std::size_t nr = spec.resonators.size();
    const std::size_t nodes = nr + 1;
    const double omega = 2.0 * kPi * f;

    std::vector<complexd> y(nodes * nodes, complexd(0.0));
    std::vector<complexd> inj(nodes, complexd(0.0));

    const auto stamp = [&](std::size_t i, std::size_t j, complexd adm) {
        y[i * nodes + i] += adm;
        y[j * nodes + j] += adm;
        y[i * nodes + j] -= adm;
        y[j * nodes + i] -= adm;
    };

    for (std::size_t k = 0; k < nr; ++k) {
        const LumpedElectrical& r = spec.resonators[k];
        const complexd z = complexd(r.re, omega * r.le - 1.0 / (omega * r.ce));
        stamp(k, k + 1, 1.0 / z);
    }
    for (std::size_t j = 0; j < spec.couplings.size(); ++j)
        y[(j + 1) * nodes + (j + 1)] += complexd(0.0, omega * spec.couplings[j]);

    if (spec.include_port_capacitance) {
        y[0] += complexd(0.0, omega * spec.resonators.front().c0);
        y[(nodes - 1) * nodes + (nodes - 1)]
            += complexd(0.0, omega * spec.resonators.back().c0);
    }

    // Thevenin source (vs = 1) behind rq_in; load rq_out to ground.
    y[0] += complexd(1.0 / spec.rq_in);
    inj[0] = complexd(1.0 / spec.rq_in);
    y[(nodes - 1) * nodes + (nodes - 1)] += complexd(1.0 / spec.rq_out);

    return solve_dense(std::move(y), std::move(inj), nodes)[nodes - 1];
}

} // namespace

void validate(const FilterSpec& spec) {
    if (spec.resonators.empty())
        raise(errc::invariant, "filter spec: needs at least one resonator");
    if (spec.couplings.size() + 1 != spec.resonators.size())
        raise(errc::invariant, "filter spec: coupling count must be resonators-1");
    for (const LumpedElectrical& r : spec.resonators)
        if (!(r.re > 0.0) || !(r.le > 0.0) || !(r.ce > 0.0))
            raise(errc::invariant, "filter spec: resonator RLC values must be positive");
    for (double cc : spec.couplings)
        if (!(cc > 0.0))
            raise(errc::invariant, "filter spec: coupling capacitors must be positive");
    if (!(spec.rq_in > 0.0) || !(spec.rq_out > 0.0))
        raise(errc::invariant, "filter spec: terminations must be positive");
}

FilterSpec to_electrical(const MechanicalFilterSpec& spec) {
    if (spec.resonators.empty())
        raise(errc::invariant, "mechanical filter spec: needs at least one resonator");
    if (spec.coupling_stiffness.size() + 1 != spec.resonators.size())
        raise(errc::invariant, "mechanical filter spec: coupling count must be resonators-1");
    const double n = spec.transduction_factor;
    FilterSpec out;
    for (const LumpedMechanical& mech : spec.resonators)
        out.resonators.push_back(extract_rlc(mech, n, spec.c0));
    for (double ks : spec.coupling_stiffness) {
        if (!(ks > 0.0))
            raise(errc::invariant, "mechanical filter spec: coupling stiffness must be positive");
        out.couplings.push_back(n * n / ks);
    }
    out.rq_in = spec.rq_in;
    out.rq_out = spec.rq_out;
    validate(out);
    return out;
}

double electrical_mode_split(double f0, double re, double q, double cc,
                             WarningList* warnings) {
    if (!(f0 > 0.0) || !(re > 0.0) || !(q > 0.0) || !(cc > 0.0))
        raise(errc::domain, "electrical_mode_split: all arguments must be positive");
    const double x = kPi * f0 * cc * re * q;
    const double f1 = f0 * std::sqrt((1.0 + x) / x);
    if (warnings && f1 > 2.0 * f0)
        warnings->push_back("electrical_mode_split: f1 exceeds 2 f0; the weak-coupling "
                            "model no longer applies");
    return f1;
}

double mechanical_mode_split(double f0, double ks12, double kr) {
    if (!(f0 > 0.0)) raise(errc::domain, "mechanical_mode_split: f0 must be > 0");
    if (!(kr > 0.0)) raise(errc::domain, "mechanical_mode_split: kr must be > 0");
    if (ks12 < 0.0) raise(errc::domain, "mechanical_mode_split: ks12 must be >= 0");
    return f0 * std::sqrt(1.0 + 2.0 * ks12 / kr);
}

FrequencySweep filter_network_response(const FilterSpec& spec, double f_lo,
                                       double f_hi, int points) {
    validate(spec);
    if (!(f_lo > 0.0) || !(f_hi > f_lo))
        raise(errc::domain, "filter_network_response: requires 0 < f_lo < f_hi");
    if (points < 3)
        raise(errc::domain, "filter_network_response: needs at least 3 points");

    FrequencySweep sweep;
    sweep.kind = SweepKind::voltage_ratio;
    sweep.points.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = f_lo + (f_hi - f_lo) * i / (points - 1);
        sweep.points.push_back({f, ladder_transfer(spec, f)});
    }
    return sweep;
}

FrequencySweep cascade_active(const std::vector<FrequencySweep>& stages,
                              double stage_gain) {
    if (stages.empty())
        raise(errc::domain, "cascade_active: needs at least one stage");
    FrequencySweep out = stages.front();
    for (std::size_t s = 1; s < stages.size(); ++s) {
        const FrequencySweep& stage = stages[s];
        if (stage.points.size() != out.points.size())
            raise(errc::domain, "cascade_active: stages must share one frequency grid");
        for (std::size_t i = 0; i < out.points.size(); ++i) {
            if (stage.points[i].frequency != out.points[i].frequency)
                raise(errc::domain,
                      "cascade_active: stages must share one frequency grid");
            out.points[i].value *= stage_gain * stage.points[i].value;
        }
    }
    return out;
}

std::vector<SweepPeak> find_sweep_peaks(const FrequencySweep& sweep) {
    const auto& pts = sweep.points;
    std::vector<SweepPeak> peaks;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double prev = std::abs(pts[i - 1].value);
        const double cur = std::abs(pts[i].value);
        const double next = std::abs(pts[i + 1].value);
        if (!(cur > prev && cur >= next)) continue;

        // Newton-form parabola through the three dB samples; vertex gives the
        // refined peak location and level.
        const double x0 = pts[i - 1].frequency, x1 = pts[i].frequency,
                     x2 = pts[i + 1].frequency;
        const double y0 = to_db(prev), y1 = to_db(cur), y2 = to_db(next);
        const double d1 = (y1 - y0) / (x1 - x0);
        const double c2 = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0);
        SweepPeak p{x1, y1};
        if (c2 < 0.0) {
            const double xv = 0.5 * (x0 + x1) - d1 / (2.0 * c2);
            if (xv > x0 && xv < x2) {
                p.frequency = xv;
                p.magnitude_db = y0 + d1 * (xv - x0) + c2 * (xv - x0) * (xv - x1);
            }
        }
        peaks.push_back(p);
    }
    return peaks;
}

FilterMetrics filter_metrics(const FrequencySweep& sweep) {
    const auto& pts = sweep.points;
    if (pts.size() < 3)
        raise(errc::no_passband, "filter_metrics: sweep needs at least 3 points");

    std::vector<double> db(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) db[i] = to_db(std::abs(pts[i].value));

    std::size_t ipk = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (db[i] > db[ipk]) ipk = i;
    if (ipk == 0 || ipk + 1 == pts.size())
        raise(errc::no_passband, "filter_metrics: maximum sits on the sweep edge");
    const double peak_db = db[ipk];

    const auto edge = [&](double drop, int dir) -> std::optional<double> {
        const double level = peak_db - drop;
        std::size_t i = ipk;
        while (true) {
            const std::size_t j = (dir < 0) ? i - 1 : i + 1;
            if (db[j] <= level) {
                // linear interpolation on dB between samples j and i
                const double t = (level - db[i]) / (db[j] - db[i]);
                return pts[i].frequency + t * (pts[j].frequency - pts[i].frequency);
            }
            i = j;
            if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == pts.size()))
                return std::nullopt;
        }
    };

    const auto lo3 = edge(kHalfPowerDb, -1), hi3 = edge(kHalfPowerDb, +1);
    if (!lo3 || !hi3)
        raise(errc::no_passband, "filter_metrics: 3 dB edges lie outside the sweep");

    FilterMetrics metrics;
    metrics.bandwidth_3db = *hi3 - *lo3;
    metrics.center_frequency = 0.5 * (*hi3 + *lo3);
    metrics.percent_bandwidth = 100.0 * metrics.bandwidth_3db / metrics.center_frequency;
    metrics.insertion_loss_db = -peak_db;

    const auto lo20 = edge(20.0, -1), hi20 = edge(20.0, +1);
    if (lo20 && hi20)
        metrics.shape_factor_20db = (*hi20 - *lo20) / metrics.bandwidth_3db;

    // Stopband plateau: worst level beyond +-5 bandwidths from center.
    double plateau = -std::numeric_limits<double>::infinity();
    bool have_lo = false, have_hi = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double off = pts[i].frequency - metrics.center_frequency;
        if (off <= -5.0 * metrics.bandwidth_3db) {
            plateau = std::max(plateau, db[i]);
            have_lo = true;
        } else if (off >= 5.0 * metrics.bandwidth_3db) {
            plateau = std::max(plateau, db[i]);
            have_hi = true;
        }
    }
    if (have_lo && have_hi)
        metrics.stopband_rejection_db = peak_db - plateau;

    // Passband ripple: peak-to-valley between the outermost in-band peaks.
    std::vector<std::size_t> in_band;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double mag = std::abs(pts[i].value);
        if (pts[i].frequency >= *lo3 && pts[i].frequency <= *hi3
            && mag > std::abs(pts[i - 1].value) && mag >= std::abs(pts[i + 1].value))
            in_band.push_back(i);
    }
    if (in_band.size() >= 2) {
        double top = -400.0, valley = 400.0;
        for (std::size_t i = in_band.front(); i <= in_band.back(); ++i) {
            top = std::max(top, db[i]);
            valley = std::min(valley, db[i]);
        }
        metrics.ripple_db = top - valley;
    }
    return metrics;
}

double passband_peak_to_valley(const FrequencySweep& sweep) {
    const auto& pts = sweep.points;
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double mag = std::abs(pts[i].value);
        if (mag > std::abs(pts[i - 1].value) && mag >= std::abs(pts[i + 1].value))
            maxima.push_back(i);
    }
    if (maxima.size() < 2) return 0.0;
    double top = -400.0, valley = 400.0;
    for (std::size_t i = maxima.front(); i <= maxima.back(); ++i)
        valley = std::min(valley, to_db(std::abs(pts[i].value)));
    for (std::size_t i : maxima)
        top = std::max(top, to_db(std::abs(pts[i].value)));
    return top - valley;
}

namespace {

double passband_ripple(const FilterSpec& base, double rq, double f_lo, double f_hi) {
    FilterSpec trial = base;
    trial.rq_in = rq;
    trial.rq_out = rq;
    return passband_peak_to_valley(filter_network_response(trial, f_lo, f_hi, 1601));
}

} // namespace

TerminationResult terminate_for_flat_passband(const FilterSpec& spec,
                                              double ripple_target_db) {
    validate(spec);
    if (spec.resonators.size() != 2)
        raise(errc::domain, "terminate_for_flat_passband: requires a 2-resonator spec");
    if (!(ripple_target_db > 0.0))
        raise(errc::domain, "terminate_for_flat_passband: target must be positive");
    const LumpedElectrical& a = spec.resonators[0];
    const LumpedElectrical& b = spec.resonators[1];
    const auto close = [](double u, double v) {
        return std::fabs(u - v) <= 1e-9 * std::max(std::fabs(u), std::fabs(v));
    };
    if (!close(a.re, b.re) || !close(a.le, b.le) || !close(a.ce, b.ce))
        raise(errc::domain, "terminate_for_flat_passband: resonators must be identical");

    const double f0 = resonant_frequency(a);
    const double f1 = f0 * std::sqrt(1.0 + 2.0 * a.ce / spec.couplings[0]);
    const double split = f1 - f0;
    const double f_lo = std::max(f0 - 2.0 * split, 0.5 * f0);
    const double f_hi = f1 + 2.0 * split;

    constexpr int kGrid = 121;
    const double re = a.re;
    std::vector<double> rqs(kGrid), ripples(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        rqs[i] = re * std::pow(10.0, -2.0 + 4.0 * i / (kGrid - 1));
        ripples[i] = passband_ripple(spec, rqs[i], f_lo, f_hi);
    }

    // The search asserts (not assumes) unimodality across the bracket.
    int imin = 0;
    for (int i = 1; i < kGrid; ++i)
        if (ripples[i] < ripples[imin]) imin = i;
    constexpr double kNoise = 0.05; // dB
    for (int i = 1; i <= imin; ++i)
        if (ripples[i] > ripples[i - 1] + kNoise)
            raise(errc::invariant, "terminate_for_flat_passband: ripple is not "
                                   "unimodal across the search bracket (rising before "
                                   "the minimum)");
    for (int i = imin + 1; i < kGrid; ++i)
        if (ripples[i] < ripples[i - 1] - kNoise)
            raise(errc::invariant, "terminate_for_flat_passband: ripple is not "
                                   "unimodal across the search bracket (falling after "
                                   "the minimum)");

    const double best = ripples[imin];
    if (best > ripple_target_db)
        raise(errc::target_unreachable,
              "terminate_for_flat_passband: best achievable ripple "
              + std::to_string(best) + " dB at R_Q " + std::to_string(rqs[imin])
              + " ohm exceeds the target " + std::to_string(ripple_target_db) + " dB");

    // Smallest termination meeting the target: grid point, then bisection
    // against the previous grid point.
    int first = imin;
    for (int i = 0; i < kGrid; ++i)
        if (ripples[i] <= ripple_target_db) { first = i; break; }
    double hi = rqs[first];
    double result_ripple = ripples[first];
    if (first > 0) {
        double lo = rqs[first - 1];
        for (int iter = 0; iter < 24; ++iter) {
            const double mid = std::sqrt(lo * hi);
            const double r = passband_ripple(spec, mid, f_lo, f_hi);
            if (r <= ripple_target_db) { hi = mid; result_ripple = r; }
            else lo = mid;
        }
    }
    return {hi, result_ripple};
}

} // namespace mrt
