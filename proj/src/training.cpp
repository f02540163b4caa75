#include "rydgan/training.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rydgan/error.hpp"
#include "rydgan/rng.hpp"

namespace rydgan {

namespace {

// Larger than any reachable generator loss; marks hardware-invalid proposals.
constexpr double kInvalidPenalty = 1e6;

// RNG stream ids derived from the master seed.
enum Stream : std::uint64_t {
    init_params = 1,
    discriminator_init = 2,
    real_batches = 3,
    final_seeds = 4,
    fake_seeds = 1'000,
    objective_seeds = 2'000'000,
};

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

RowMatrix sample_rows(const RowMatrix& data, std::size_t count, std::mt19937_64& rng) {
    std::uniform_int_distribution<Eigen::Index> pick(0, data.rows() - 1);
    RowMatrix out(static_cast<Eigen::Index>(count), data.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = data.row(pick(rng));
    return out;
}

void check_scaled(const RowMatrix& features, int n_qubits) {
    const double window = 1.0 / static_cast<double>(Eigen::Index{1} << n_qubits);
    if (features.cols() != (Eigen::Index{1} << n_qubits)) {
        throw Error(ErrorKind::shape, "class features must have 2^n columns");
    }
    constexpr double slack = 1e-9;
    if (features.minCoeff() < -slack || features.maxCoeff() > window + slack) {
        throw Error(ErrorKind::data, "class features are not scaled into the generator window (0, 2^-n]");
    }
}

}  // namespace

std::string_view to_string(ParamGroup group) {
    switch (group) {
        case ParamGroup::positions: return "positions";
        case ParamGroup::rabi: return "rabi";
        case ParamGroup::local: return "local";
        case ParamGroup::global: return "global";
    }
    return "?";
}

ParamGroup parse_param_group(std::string_view name) {
    for (ParamGroup g : {ParamGroup::positions, ParamGroup::rabi, ParamGroup::local, ParamGroup::global}) {
        if (to_string(g) == name) return g;
    }
    throw Error(ErrorKind::config, "unknown parameter group '" + std::string(name) +
                                       "' (valid: positions, rabi, local, global)");
}

void validate_train_config(const TrainConfig& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorKind::config, what);
    };
    require(c.n_qubits >= 1 && c.n_qubits <= kMaxQubits, "n_qubits must lie in [1, 10]");
    require(c.cycles >= 1, "cycles must be positive");
    require(c.nm_iters >= 1, "nm_iters must be positive");
    require(c.disc_steps >= 1, "disc_steps must be positive");
    require(c.gen_batch >= 1, "gen_batch must be positive");
    require(c.disc_batch >= 1, "disc_batch must be positive");
    require(c.hidden >= 1, "hidden must be positive");
    require(c.learning_rate > 0.0, "learning_rate must be positive");
    require(c.beta1 >= 0.0 && c.beta1 < 1.0, "beta1 must lie in [0, 1)");
    require(c.beta2 >= 0.0 && c.beta2 < 1.0, "beta2 must lie in [0, 1)");
    require(c.adam_epsilon > 0.0, "adam_epsilon must be positive");
    require(c.nm_initial_step > 0.0 && c.nm_initial_step <= 1.0, "nm_initial_step must lie in (0, 1]");
    require(!c.stage_order.empty(), "stage_order must not be empty");
    require(c.grid_spacing > 0.0, "grid_spacing must be positive");
    require(c.position_jitter >= 0.0, "position_jitter must be nonnegative");
    require(c.grid_spacing - 2.0 * c.position_jitter >= c.limits.arrangement.min_spacing,
            "grid_spacing minus jitter must respect the minimum atom spacing");
    require(c.ramp_fraction > 0.0 && c.ramp_fraction <= 0.25, "ramp_fraction must lie in (0, 0.25]");
    require(c.steps_per_us >= 1, "steps_per_us must be positive");
    require(c.c6 > 0.0, "c6 must be positive");
}

std::string learner_id(PulseShape rabi, PulseShape local) {
    return std::string(to_string(rabi)) + "__" + std::string(to_string(local));
}

GeneratorParams initial_params(const TrainConfig& config, PulseShape rabi, PulseShape local) {
    std::mt19937_64 rng(derive_seed(config.master_seed, Stream::init_params));
    std::uniform_real_distribution<double> jitter(-config.position_jitter, config.position_jitter);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n = config.n_qubits;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    const auto& field = config.limits.arrangement;
    const double x0 = 0.5 * (field.field_width - (cols - 1) * config.grid_spacing);
    const double y0 = 0.5 * (field.field_height - (rows - 1) * config.grid_spacing);

    GeneratorParams p;
    for (int i = 0; i < n; ++i) {
        const double x = x0 + (i % cols) * config.grid_spacing + jitter(rng);
        const double y = y0 + (i / cols) * config.grid_spacing + jitter(rng);
        p.arrangement.positions.push_back({x, y});
    }
    for (int i = 0; i < n; ++i) p.arrangement.couplings.push_back(unit(rng));
    p.rabi_shape = rabi;
    p.local_shape = local;
    p.rabi_param = 0.5 * config.limits.pulse.rabi_max;
    p.local_param = 0.1 * config.limits.pulse.local_detuning_min;
    p.global_detuning_offset = 0.0;
    p.ramp_fraction = config.ramp_fraction;
    p.steps_per_us = config.steps_per_us;
    p.c6 = config.c6;
    return p;
}

double generator_loss(const GeneratorParams& params, const DiscriminatorNet& net, std::span<const double> seeds,
                      const HardwareLimits& limits) {
    if (seeds.empty()) throw Error(ErrorKind::argument, "generator_loss needs at least one seed");
    const RowMatrix fake = kernels::parallel::generate_batch(params, seeds, ExactMode{}, limits);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < fake.rows(); ++i) {
        const Eigen::RowVectorXd row = fake.row(i);
        loss += softplus(-net.logit({row.data(), static_cast<std::size_t>(row.size())}));
    }
    return loss / static_cast<double>(fake.rows());
}

std::vector<double> group_values(const GeneratorParams& p, ParamGroup group) {
    std::vector<double> v;
    switch (group) {
        case ParamGroup::positions:
            for (const auto& c : p.arrangement.positions) {
                v.push_back(c.x);
                v.push_back(c.y);
            }
            break;
        case ParamGroup::rabi:
            v.push_back(p.rabi_param);
            break;
        case ParamGroup::local:
            v.push_back(p.local_param);
            v.insert(v.end(), p.arrangement.couplings.begin(), p.arrangement.couplings.end());
            break;
        case ParamGroup::global:
            v.push_back(p.global_detuning_offset);
            break;
    }
    return v;
}

void set_group_values(GeneratorParams& p, ParamGroup group, std::span<const double> v) {
    if (v.size() != group_values(p, group).size()) throw Error(ErrorKind::shape, "parameter group size mismatch");
    switch (group) {
        case ParamGroup::positions:
            for (std::size_t i = 0; i < p.arrangement.positions.size(); ++i) {
                p.arrangement.positions[i] = {v[2 * i], v[2 * i + 1]};
            }
            break;
        case ParamGroup::rabi:
            p.rabi_param = v[0];
            break;
        case ParamGroup::local:
            p.local_param = v[0];
            std::copy(v.begin() + 1, v.end(), p.arrangement.couplings.begin());
            break;
        case ParamGroup::global:
            p.global_detuning_offset = v[0];
            break;
    }
}

Bounds group_bounds(const GeneratorParams& p, ParamGroup group, const HardwareLimits& limits) {
    Bounds b;
    switch (group) {
        case ParamGroup::positions:
            for (std::size_t i = 0; i < p.arrangement.positions.size(); ++i) {
                b.lower.insert(b.lower.end(), {0.0, 0.0});
                b.upper.insert(b.upper.end(), {limits.arrangement.field_width, limits.arrangement.field_height});
            }
            break;
        case ParamGroup::rabi:
            b.lower = {0.0};
            b.upper = {limits.pulse.rabi_max};
            break;
        case ParamGroup::local:
            b.lower.assign(1 + p.arrangement.couplings.size(), 0.0);
            b.upper.assign(1 + p.arrangement.couplings.size(), 1.0);
            b.lower[0] = limits.pulse.local_detuning_min;
            b.upper[0] = 0.0;
            break;
        case ParamGroup::global:
            b.lower = {-limits.pulse.global_detuning_max};
            b.upper = {limits.pulse.global_detuning_max};
            break;
    }
    return b;
}

std::vector<double> draw_seeds(std::size_t count, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> u(kSeedMin, kSeedMax);
    std::vector<double> seeds(count);
    for (auto& s : seeds) s = u(rng);
    return seeds;
}

TrainResult layered_train(const TrainConfig& config, const RowMatrix& class_features, PulseShape rabi,
                          PulseShape local) {
    validate_train_config(config);
    if (class_features.rows() < 1) throw Error(ErrorKind::argument, "layered_train needs class data");
    check_scaled(class_features, config.n_qubits);

    const auto& limits = config.limits;
    TrainResult result;
    GeneratorParams params = initial_params(config, rabi, local);
    validate_params(params, limits);
    result.initial = params;

    const int dim = 1 << config.n_qubits;
    DiscriminatorNet net =
        DiscriminatorNet::random(dim, config.hidden, derive_seed(config.master_seed, Stream::discriminator_init));
    net.set_input_window(0.0, 1.0 / dim);
    AdamState adam{config.learning_rate, config.beta1, config.beta2, config.adam_epsilon, {}, {}, 0};
    std::mt19937_64 real_rng(derive_seed(config.master_seed, Stream::real_batches));

    std::uint64_t stage_index = 0;
    for (int cycle = 0; cycle < config.cycles; ++cycle) {
        for (ParamGroup group : config.stage_order) {
            const auto fake_seeds =
                draw_seeds(config.disc_batch, derive_seed(config.master_seed, Stream::fake_seeds + stage_index));
            const RowMatrix fake = kernels::parallel::generate_batch(params, fake_seeds, ExactMode{}, limits);
            double disc_loss = 0.0;
            for (int s = 0; s < config.disc_steps; ++s) {
                const RowMatrix real = sample_rows(class_features, config.disc_batch, real_rng);
                disc_loss = discriminator_step(net, real, fake, adam);
            }

            const auto seeds =
                draw_seeds(config.gen_batch, derive_seed(config.master_seed, Stream::objective_seeds + stage_index));
            auto objective = [&](std::span<const double> values) {
                GeneratorParams trial = params;
                set_group_values(trial, group, values);
                if (!param_violations(trial, limits).empty()) return kInvalidPenalty;
                return generator_loss(trial, net, seeds, limits);
            };
            NelderMeadOptions nm{config.nm_iters, 1e-8, config.nm_initial_step};
            const auto best = nelder_mead(objective, group_values(params, group), group_bounds(params, group, limits), nm);
            GeneratorParams next = params;
            set_group_values(next, group, best.x);
            if (param_violations(next, limits).empty()) params = std::move(next);

            result.stages_run.push_back(group);
            result.log.push_back({cycle, std::string(to_string(group)), best.iterations,
                                  std::min(best.f, kInvalidPenalty), disc_loss});
            ++stage_index;
        }
    }

    const auto final_seeds = draw_seeds(config.gen_batch, derive_seed(config.master_seed, Stream::final_seeds));
    result.learner.id = learner_id(rabi, local);
    result.learner.params = params;
    result.learner.final_loss = generator_loss(params, net, final_seeds, limits);
    result.learner.discriminator = std::move(net);
    result.learner.master_seed = config.master_seed;
    return result;
}

}  // namespace rydgan
