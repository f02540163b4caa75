#include "rydgan/pulse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rydgan/error.hpp"

namespace rydgan {

namespace {

constexpr std::array kCatalog{PulseShape::linear,   PulseShape::triangle,  PulseShape::trapezoid,
                              PulseShape::gaussian, PulseShape::sine_bump, PulseShape::constant};

// Dimensionless seed strength in [0, 1].
double seed_weight(const PulseProgram& p) {
    return std::clamp(std::abs(p.seed_noise) / reference_amplitude(p.kind), 0.0, 1.0);
}

double triangle_peak(double w) { return std::clamp(0.1 + 0.8 * (w - 0.1) / 0.9, 0.1, 0.9); }

double trapezoid_edge(double w) { return 0.05 + 0.4 * (1.0 - w); }

// Interior waveform on u in [0, 1], between the entry and exit ramps.
double interior(const PulseProgram& p, double u) {
    const double w = seed_weight(p);
    switch (p.shape) {
        case PulseShape::linear:
            return p.seed_noise + (p.param - p.seed_noise) * u;
        case PulseShape::triangle: {
            const double peak = triangle_peak(w);
            return u < peak ? p.param * u / peak : p.param * (1.0 - u) / (1.0 - peak);
        }
        case PulseShape::trapezoid: {
            const double edge = trapezoid_edge(w);
            if (u < edge) return p.param * u / edge;
            if (u > 1.0 - edge) return p.param * (1.0 - u) / edge;
            return p.param;
        }
        case PulseShape::gaussian: {
            const double sigma = 0.08 + 0.17 * w;
            const double d = u - 0.5;
            return p.param * std::exp(-d * d / (2.0 * sigma * sigma));
        }
        case PulseShape::sine_bump:
            return p.param * std::abs(std::sin(std::numbers::pi * (u + 0.5 * w)));
        case PulseShape::constant:
            return p.param;
    }
    return 0.0;
}

void check_program(const PulseProgram& p) {
    if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
        throw Error(ErrorKind::config, "pulse duration must be positive and finite");
    }
    if (!(p.ramp_fraction >= 0.0 && p.ramp_fraction <= 0.25)) {
        throw Error(ErrorKind::config, "pulse ramp_fraction must lie in [0, 0.25]");
    }
    if (!std::isfinite(p.param) || !std::isfinite(p.seed_noise)) {
        throw Error(ErrorKind::config, "pulse parameters must be finite");
    }
}

// Breakpoints (as fractions of the duration) of a piecewise-linear shape.
std::vector<double> breakpoints(const PulseProgram& p) {
    if (p.shape == PulseShape::constant) return {0.0, 1.0};
    const double r = p.ramp_fraction;
    const double span = 1.0 - 2.0 * r;
    std::vector<double> taus{0.0, r};
    const double w = seed_weight(p);
    if (p.shape == PulseShape::triangle) {
        taus.push_back(r + span * triangle_peak(w));
    } else if (p.shape == PulseShape::trapezoid) {
        const double edge = trapezoid_edge(w);
        taus.push_back(r + span * edge);
        taus.push_back(r + span * (1.0 - edge));
    }
    taus.push_back(1.0 - r);
    taus.push_back(1.0);
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    return taus;
}

}  // namespace

std::vector<double> derivative_breaks(const PulseProgram& pulse) {
    check_program(pulse);
    std::vector<double> taus;
    if (is_piecewise_linear(pulse.shape)) {
        taus = breakpoints(pulse);
    } else {
        const double r = pulse.ramp_fraction;
        taus = {0.0, r, 1.0 - r, 1.0};
        if (pulse.shape == PulseShape::sine_bump) {
            // |sin| folds where the argument crosses pi.
            const double u = 1.0 - 0.5 * seed_weight(pulse);
            if (u > 0.0 && u < 1.0) taus.push_back(r + (1.0 - 2.0 * r) * u);
        }
        std::sort(taus.begin(), taus.end());
        taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    }
    for (double& tau : taus) tau = std::min(tau * pulse.duration, pulse.duration);
    return taus;
}

std::string_view to_string(PulseShape shape) {
    switch (shape) {
        case PulseShape::linear: return "linear";
        case PulseShape::triangle: return "triangle";
        case PulseShape::trapezoid: return "trapezoid";
        case PulseShape::gaussian: return "gaussian";
        case PulseShape::sine_bump: return "sine_bump";
        case PulseShape::constant: return "constant";
    }
    return "?";
}

std::string_view to_string(PulseKind kind) {
    switch (kind) {
        case PulseKind::rabi: return "rabi";
        case PulseKind::local_detuning: return "local_detuning";
        case PulseKind::global_detuning: return "global_detuning";
    }
    return "?";
}

PulseShape parse_pulse_shape(std::string_view name) {
    for (PulseShape s : kCatalog) {
        if (to_string(s) == name) return s;
    }
    std::string valid;
    for (PulseShape s : kCatalog) {
        if (!valid.empty()) valid += ", ";
        valid += to_string(s);
    }
    throw Error(ErrorKind::config, "unknown pulse shape '" + std::string(name) + "' (valid: " + valid + ")");
}

std::span<const PulseShape> pulse_catalog() { return kCatalog; }

bool is_piecewise_linear(PulseShape shape) {
    return shape == PulseShape::linear || shape == PulseShape::triangle ||
           shape == PulseShape::trapezoid || shape == PulseShape::constant;
}

double reference_amplitude(PulseKind kind) { return kind == PulseKind::rabi ? kRabiMax : kDetuningMax; }

double evaluate(const PulseProgram& pulse, double t) {
    check_program(pulse);
    if (!(t >= 0.0 && t <= pulse.duration)) {
        std::ostringstream msg;
        msg << "pulse evaluated at t=" << t << " outside [0, " << pulse.duration << "]";
        throw Error(ErrorKind::domain, msg.str());
    }
    if (pulse.shape == PulseShape::constant) return pulse.param;

    const double tau = t / pulse.duration;
    const double r = pulse.ramp_fraction;
    if (r > 0.0) {
        if (tau < r) return interior(pulse, 0.0) * tau / r;
        if (tau > 1.0 - r) return interior(pulse, 1.0) * (1.0 - tau) / r;
    }
    const double u = std::clamp((tau - r) / (1.0 - 2.0 * r), 0.0, 1.0);
    return interior(pulse, u);
}

ValidationReport validate(const PulseProgram& pulse, const PulseLimits& limits) {
    ValidationReport report;
    try {
        check_program(pulse);
    } catch (const Error& e) {
        report.push_back({e.what(), 0.0, 0.0});
        return report;
    }

    bool seen_sign = false;
    bool seen_bound = false;
    auto flag = [&](bool& seen, std::string what, double t, double v) {
        if (!seen) report.push_back({std::move(what), t, v});
        seen = true;
    };

    const int points = std::max(limits.grid_points, 2);
    for (int i = 0; i < points; ++i) {
        const double t = pulse.duration * i / (points - 1);
        const double v = evaluate(pulse, t);
        switch (pulse.kind) {
            case PulseKind::rabi:
                if (v < 0.0) flag(seen_sign, "negative Rabi amplitude", t, v);
                if (v > limits.rabi_max) flag(seen_bound, "Rabi amplitude exceeds bound", t, v);
                break;
            case PulseKind::local_detuning:
                if (v > 0.0) flag(seen_sign, "positive local detuning", t, v);
                if (v < limits.local_detuning_min) flag(seen_bound, "local detuning below bound", t, v);
                break;
            case PulseKind::global_detuning:
                if (std::abs(v) > limits.global_detuning_max) {
                    flag(seen_bound, "global detuning exceeds bound", t, v);
                }
                break;
        }
    }

    if (pulse.kind != PulseKind::global_detuning) {
        for (double t : {0.0, pulse.duration}) {
            const double v = evaluate(pulse, t);
            if (v != 0.0) report.push_back({"pulse must start and end at 0", t, v});
        }
    }
    return report;
}

PiecewiseLinear discretize(const PulseProgram& pulse, int max_segments) {
    if (max_segments < 2) throw Error(ErrorKind::argument, "discretize needs max_segments >= 2");
    check_program(pulse);

    std::vector<double> taus;
    bool exact = false;
    if (is_piecewise_linear(pulse.shape)) {
        auto bp = breakpoints(pulse);
        if (static_cast<int>(bp.size()) - 1 <= max_segments) {
            taus = std::move(bp);
            exact = true;
        }
    }
    if (taus.empty()) {
        const double r = pulse.ramp_fraction;
        if (pulse.shape != PulseShape::constant && r > 0.0 && max_segments >= 3) {
            const int inner = max_segments - 2;
            taus.push_back(0.0);
            for (int i = 0; i <= inner; ++i) taus.push_back(r + (1.0 - 2.0 * r) * i / inner);
            taus.push_back(1.0);
        } else {
            for (int i = 0; i <= max_segments; ++i) taus.push_back(static_cast<double>(i) / max_segments);
        }
    }

    PiecewiseLinear out;
    out.exact = exact;
    out.knots.reserve(taus.size());
    for (double tau : taus) {
        const double t = std::min(tau * pulse.duration, pulse.duration);
        out.knots.push_back({t, evaluate(pulse, t)});
    }
    out.knots.front().t = 0.0;
    out.knots.back().t = pulse.duration;

    constexpr int kSamplesPerSegment = 64;
    double err = 0.0;
    for (std::size_t s = 0; s + 1 < out.knots.size(); ++s) {
        const double a = out.knots[s].t;
        const double b = out.knots[s + 1].t;
        for (int i = 0; i <= kSamplesPerSegment; ++i) {
            const double t = a + (b - a) * i / kSamplesPerSegment;
            err = std::max(err, std::abs(evaluate(pulse, t) - interpolate(out, t)));
        }
    }
    out.max_error = err;
    return out;
}

double interpolate(const PiecewiseLinear& waveform, double t) {
    const auto& k = waveform.knots;
    if (k.empty()) throw Error(ErrorKind::argument, "empty waveform");
    if (t <= k.front().t) return k.front().value;
    if (t >= k.back().t) return k.back().value;
    auto hi = std::upper_bound(k.begin(), k.end(), t, [](double x, const Knot& kn) { return x < kn.t; });
    auto lo = hi - 1;
    const double frac = (t - lo->t) / (hi->t - lo->t);
    return lo->value + (hi->value - lo->value) * frac;
}

void write_csv(const PiecewiseLinear& waveform, std::ostream& out) {
    out << "t_us,value_rad_per_us\n";
    out << std::setprecision(17);
    for (const auto& k : waveform.knots) out << k.t << ',' << k.value << '\n';
}

}  // namespace rydgan
