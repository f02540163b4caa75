#include "rydgan/persistence.hpp"

#include "rydgan/error.hpp"
#include "rydgan/io.hpp"

namespace rydgan {

namespace {

constexpr const char* kLearnerFormat = "rydgan-learner";
constexpr const char* kEnsembleFormat = "rydgan-ensemble";
constexpr int kVersion = 1;

void check_header(const nlohmann::json& j, const char* format, const std::string& source) {
    if (!j.is_object() || !j.contains("format") || j.at("format") != format) {
        throw Error(ErrorKind::data, source + ": not a " + std::string(format) + " document");
    }
    if (j.at("version").get<int>() != kVersion) {
        throw Error(ErrorKind::data, source + ": unsupported " + std::string(format) + " version");
    }
}

nlohmann::json learner_json(const Learner& l, const nlohmann::json& config) {
    nlohmann::json j;
    j["format"] = kLearnerFormat;
    j["version"] = kVersion;
    j["id"] = l.id;
    j["rabi_shape"] = to_string(l.params.rabi_shape);
    j["local_shape"] = to_string(l.params.local_shape);
    j["generator"] = to_json(l.params);
    j["final_loss"] = l.final_loss;
    j["validation_fid"] = l.validation_fid ? nlohmann::json(*l.validation_fid) : nlohmann::json(nullptr);
    j["master_seed"] = l.master_seed;
    if (l.discriminator) {
        const auto& d = *l.discriminator;
        const auto& p = d.parameters();
        j["discriminator"] = {{"input_dim", d.input_dim()},
                              {"hidden", d.hidden()},
                              {"input_center", d.input_center()},
                              {"input_scale", d.input_scale()},
                              {"parameters", std::vector<double>(p.begin(), p.end())}};
    }
    j["config"] = config;
    return j;
}

Learner learner_from(const nlohmann::json& j, const std::string& source) {
    check_header(j, kLearnerFormat, source);
    Learner l;
    l.id = j.at("id").get<std::string>();
    l.params = generator_params_from_json(j.at("generator"));
    if (j.contains("config") && j.at("config").is_object()) {
        validate_params(l.params, train_config_from_json(j.at("config")).limits);
    }
    l.final_loss = j.at("final_loss").get<double>();
    if (!j.at("validation_fid").is_null()) l.validation_fid = j.at("validation_fid").get<double>();
    l.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("discriminator")) {
        const auto& d = j.at("discriminator");
        DiscriminatorNet net(d.at("input_dim").get<int>(), d.at("hidden").get<int>());
        net.set_input_normalization(d.at("input_center").get<double>(), d.at("input_scale").get<double>());
        const auto p = d.at("parameters").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(p.size()) != net.parameters().size()) {
            throw Error(ErrorKind::data, source + ": discriminator parameter count mismatch");
        }
        net.parameters() = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
        l.discriminator = std::move(net);
    }
    return l;
}

template <class F>
auto guarded(const std::string& source, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::data, source + ": " + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::data) throw;
        throw Error(ErrorKind::data, source + ": " + e.what());
    }
}

}  // namespace

nlohmann::json to_json(const GeneratorParams& p) {
    nlohmann::json pos = nlohmann::json::array();
    for (const auto& c : p.arrangement.positions) pos.push_back({c.x, c.y});
    return {{"positions_um", pos},
            {"couplings", p.arrangement.couplings},
            {"rabi_shape", to_string(p.rabi_shape)},
            {"rabi_param_rad_per_us", p.rabi_param},
            {"local_shape", to_string(p.local_shape)},
            {"local_param_rad_per_us", p.local_param},
            {"global_detuning_offset_rad_per_us", p.global_detuning_offset},
            {"duration_us", p.duration},
            {"ramp_fraction", p.ramp_fraction},
            {"c6_rad_per_us_um6", p.c6},
            {"steps_per_us", p.steps_per_us}};
}

GeneratorParams generator_params_from_json(const nlohmann::json& j) {
    GeneratorParams p;
    for (const auto& c : j.at("positions_um")) p.arrangement.positions.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    p.arrangement.couplings = j.at("couplings").get<std::vector<double>>();
    p.rabi_shape = parse_pulse_shape(j.at("rabi_shape").get<std::string>());
    p.rabi_param = j.at("rabi_param_rad_per_us").get<double>();
    p.local_shape = parse_pulse_shape(j.at("local_shape").get<std::string>());
    p.local_param = j.at("local_param_rad_per_us").get<double>();
    p.global_detuning_offset = j.at("global_detuning_offset_rad_per_us").get<double>();
    p.duration = j.at("duration_us").get<double>();
    p.ramp_fraction = j.at("ramp_fraction").get<double>();
    p.c6 = j.at("c6_rad_per_us_um6").get<double>();
    p.steps_per_us = j.at("steps_per_us").get<int>();
    return p;
}

nlohmann::json to_json(const TrainConfig& c) {
    nlohmann::json stages = nlohmann::json::array();
    for (auto g : c.stage_order) stages.push_back(to_string(g));
    return {{"n_qubits", c.n_qubits},
            {"cycles", c.cycles},
            {"nm_iters", c.nm_iters},
            {"disc_steps", c.disc_steps},
            {"gen_batch", c.gen_batch},
            {"disc_batch", c.disc_batch},
            {"hidden", c.hidden},
            {"learning_rate", c.learning_rate},
            {"beta1", c.beta1},
            {"beta2", c.beta2},
            {"adam_epsilon", c.adam_epsilon},
            {"nm_initial_step", c.nm_initial_step},
            {"stage_order", stages},
            {"grid_spacing_um", c.grid_spacing},
            {"position_jitter_um", c.position_jitter},
            {"ramp_fraction", c.ramp_fraction},
            {"steps_per_us", c.steps_per_us},
            {"c6", c.c6},
            {"rabi_max", c.limits.pulse.rabi_max},
            {"local_detuning_min", c.limits.pulse.local_detuning_min},
            {"global_detuning_max", c.limits.pulse.global_detuning_max},
            {"min_spacing_um", c.limits.arrangement.min_spacing},
            {"field_width_um", c.limits.arrangement.field_width},
            {"field_height_um", c.limits.arrangement.field_height},
            {"master_seed", c.master_seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.n_qubits = j.at("n_qubits").get<int>();
    c.cycles = j.at("cycles").get<int>();
    c.nm_iters = j.at("nm_iters").get<int>();
    c.disc_steps = j.at("disc_steps").get<int>();
    c.gen_batch = j.at("gen_batch").get<int>();
    c.disc_batch = j.at("disc_batch").get<int>();
    c.hidden = j.at("hidden").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.adam_epsilon = j.at("adam_epsilon").get<double>();
    c.nm_initial_step = j.at("nm_initial_step").get<double>();
    c.stage_order.clear();
    for (const auto& s : j.at("stage_order")) c.stage_order.push_back(parse_param_group(s.get<std::string>()));
    c.grid_spacing = j.at("grid_spacing_um").get<double>();
    c.position_jitter = j.at("position_jitter_um").get<double>();
    c.ramp_fraction = j.at("ramp_fraction").get<double>();
    c.steps_per_us = j.at("steps_per_us").get<int>();
    c.c6 = j.at("c6").get<double>();
    c.limits.pulse.rabi_max = j.at("rabi_max").get<double>();
    c.limits.pulse.local_detuning_min = j.at("local_detuning_min").get<double>();
    c.limits.pulse.global_detuning_max = j.at("global_detuning_max").get<double>();
    c.limits.arrangement.min_spacing = j.at("min_spacing_um").get<double>();
    c.limits.arrangement.field_width = j.at("field_width_um").get<double>();
    c.limits.arrangement.field_height = j.at("field_height_um").get<double>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    return c;
}

std::string serialize_learner(const Learner& learner, const TrainConfig& config) {
    return learner_json(learner, to_json(config)).dump(1) + "\n";
}

Learner parse_learner(const std::string& text, const std::string& source) {
    return guarded(source, [&] { return learner_from(nlohmann::json::parse(text), source); });
}

void save_learner(const Learner& learner, const TrainConfig& config, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_learner(learner, config));
}

Learner load_learner(const std::filesystem::path& path) { return parse_learner(read_file(path), path.string()); }

std::string serialize_ensemble(const Ensemble& e) {
    nlohmann::json j;
    j["format"] = kEnsembleFormat;
    j["version"] = kVersion;
    j["validation_fid"] = e.validation_fid;
    j["fid_trail"] = e.fid_trail;
    auto& ids = j["member_ids"] = nlohmann::json::array();
    auto& members = j["members"] = nlohmann::json::array();
    for (const auto& m : e.members) {
        ids.push_back(m.id);
        members.push_back(learner_json(m, nullptr));
    }
    return j.dump(1) + "\n";
}

Ensemble parse_ensemble(const std::string& text, const std::string& source) {
    return guarded(source, [&] {
        const auto j = nlohmann::json::parse(text);
        check_header(j, kEnsembleFormat, source);
        Ensemble e;
        e.validation_fid = j.at("validation_fid").get<double>();
        e.fid_trail = j.at("fid_trail").get<std::vector<double>>();
        for (const auto& m : j.at("members")) e.members.push_back(learner_from(m, source));
        if (e.members.empty()) throw Error(ErrorKind::data, source + ": ensemble has no members");
        return e;
    });
}

void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_ensemble(ensemble));
}

Ensemble load_ensemble(const std::filesystem::path& path) { return parse_ensemble(read_file(path), path.string()); }

}  // namespace rydgan
