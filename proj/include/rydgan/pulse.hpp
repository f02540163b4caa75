#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rydgan {

enum class PulseShape { linear, triangle, trapezoid, gaussian, sine_bump, constant };

enum class PulseKind { rabi, local_detuning, global_detuning };

// Hardware amplitude references (rad/us). Seed noise is normalized against
// these when a shape uses it as a dimensionless modulation.
inline constexpr double kRabiMax = 15.8;
inline constexpr double kDetuningMax = 125.0;

std::string_view to_string(PulseShape shape);
std::string_view to_string(PulseKind kind);

/// Throws a config error listing the valid shape names.
PulseShape parse_pulse_shape(std::string_view name);

std::span<const PulseShape> pulse_catalog();

/// True for shapes whose waveform is exactly piecewise linear.
bool is_piecewise_linear(PulseShape shape);

double reference_amplitude(PulseKind kind);

/// A single drive waveform: one trainable scalar (`param`) plus the seed
/// noise injected at the pulse start. Non-constant shapes are wrapped in
/// linear entry/exit ramps of `ramp_fraction * duration` so that the
/// waveform starts and ends at zero.
struct PulseProgram {
    PulseShape shape = PulseShape::linear;
    double seed_noise = 0.0;
    double param = 0.0;
    double duration = 1.0;
    PulseKind kind = PulseKind::rabi;
    double ramp_fraction = 0.05;
};

/// Waveform value in rad/us. Throws a domain error for t outside
/// [0, duration] and a config error for a malformed program.
double evaluate(const PulseProgram& pulse, double t);

/// Times in [0, duration] where the waveform's slope may jump, endpoints
/// included. Between consecutive entries the waveform is smooth.
std::vector<double> derivative_breaks(const PulseProgram& pulse);

struct PulseLimits {
    double rabi_max = kRabiMax;
    double local_detuning_min = -kDetuningMax;
    double global_detuning_max = kDetuningMax;
    int grid_points = 1001;
};

struct PulseViolation {
    std::string what;
    double t = 0.0;
    double value = 0.0;
};

using ValidationReport = std::vector<PulseViolation>;

/// Checks kind-specific sign, endpoint, and amplitude constraints on a dense
/// grid. At most one violation per category is reported.
ValidationReport validate(const PulseProgram& pulse, const PulseLimits& limits = {});

struct Knot {
    double t = 0.0;
    double value = 0.0;
};

struct PiecewiseLinear {
    std::vector<Knot> knots;
    double max_error = 0.0;  // sup |evaluate - interpolate| on a dense resampling
    bool exact = false;      // knots reproduce the waveform's own breakpoints
};

PiecewiseLinear discretize(const PulseProgram& pulse, int max_segments);

double interpolate(const PiecewiseLinear& waveform, double t);

/// CSV with columns t_us,value_rad_per_us.
void write_csv(const PiecewiseLinear& waveform, std::ostream& out);

}  // namespace rydgan
