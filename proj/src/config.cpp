#include "rydgan/config.hpp"

#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rydgan/data.hpp"
#include "rydgan/error.hpp"
#include "rydgan/io.hpp"

namespace rydgan {

namespace {

namespace pt = boost::property_tree;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& items) {
    std::string out;
    for (const auto& i : items) {
        if (!out.empty()) out += ",";
        if constexpr (std::is_arithmetic_v<T>) {
            out += std::to_string(i);
        } else {
            out += std::string(to_string(i));
        }
    }
    return out;
}

// Reads keys of one section, remembering which ones were consumed.
class Section {
  public:
    Section(const pt::ptree& root, std::string name, const std::string& source)
        : name_(std::move(name)), source_(source) {
        if (auto child = root.get_child_optional(name_)) tree_ = *child;
    }

    template <class T>
    void read(const char* key, T& value) {
        used_.insert(key);
        auto raw = tree_.get_optional<std::string>(key);
        if (!raw) return;
        try {
            if constexpr (std::is_same_v<T, std::filesystem::path>) {
                value = *raw;
            } else {
                value = tree_.get<T>(key);
            }
        } catch (const pt::ptree_error&) {
            throw Error(ErrorKind::config, source_ + ": [" + name_ + "] " + key + " has invalid value '" + *raw + "'");
        }
    }

    std::optional<std::string> raw(const char* key) {
        used_.insert(key);
        if (auto v = tree_.get_optional<std::string>(key)) return *v;
        return std::nullopt;
    }

    void reject_unknown() const {
        for (const auto& [key, _] : tree_) {
            if (!used_.count(key)) throw Error(ErrorKind::config, source_ + ": unknown key [" + name_ + "] " + key);
        }
    }

  private:
    pt::ptree tree_;
    std::string name_;
    std::string source_;
    std::set<std::string> used_;
};

}  // namespace

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::ideal: return "ideal";
        case RunMode::noisy: return "noisy";
        case RunMode::shots: return "shots";
    }
    return "?";
}

RunMode parse_run_mode(std::string_view name) {
    if (name == "ideal") return RunMode::ideal;
    if (name == "noisy") return RunMode::noisy;
    if (name == "shots") return RunMode::shots;
    throw Error(ErrorKind::config, "unknown mode '" + std::string(name) + "' (valid: ideal, noisy, shots)");
}

void validate_run_config(const RunConfig& c) {
    std::vector<std::string> problems;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    };
    require(c.validation_fraction > 0.0 && c.validation_fraction < 1.0, "validation_fraction must lie in (0, 1)");
    require(c.max_class_images >= 0, "max_class_images must be nonnegative");
    require(!c.classes.empty(), "at least one class is required");
    for (int cls : c.classes) require(cls >= 0 && cls <= 9, "class ids must lie in 0-9");
    require(c.jobs >= 0, "jobs must be nonnegative");
    require(c.components >= 0, "components must be nonnegative");
    require(c.pca_components() <= kImagePixels, "components must not exceed 784");
    require(c.pca_components() == (1 << c.train.n_qubits), "components must equal 2^n_qubits");
    require(!c.rabi_shapes.empty() && !c.local_shapes.empty(), "pulse shape lists must not be empty");
    for (auto s : c.rabi_shapes) require(s != PulseShape::constant, "constant shape is reserved for global detuning");
    for (auto s : c.local_shapes) require(s != PulseShape::constant, "constant shape is reserved for global detuning");
    require(c.noise.detuning_sigma >= 0.0 && c.noise.rabi_rel_sigma >= 0.0 && c.noise.position_sigma >= 0.0,
            "noise sigmas must be nonnegative");
    require(c.count >= 1, "count must be positive");
    require(c.shots >= 1, "shots must be positive");
    require(c.fid_batch >= 2, "fid_batch must be at least 2");
    require(c.montage_columns >= 1, "montage_columns must be positive");
    try {
        validate_train_config(c.train);
    } catch (const Error& e) {
        problems.emplace_back(e.what());
    }
    if (problems.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw Error(ErrorKind::config, msg);
}

RunConfig parse_run_config(const std::string& text, const std::string& source) {
    pt::ptree root;
    try {
        std::istringstream in(text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorKind::config, source + ": " + e.message() + " at line " + std::to_string(e.line()));
    }
    static const std::set<std::string> known{"data", "run", "pca", "pulse", "geometry", "train", "noise", "generate"};
    for (const auto& [name, child] : root) {
        if (!known.count(name) || child.empty()) {
            throw Error(ErrorKind::config, source + ": unknown section or top-level key '" + name + "'");
        }
    }

    RunConfig c;
    auto& t = c.train;

    Section data(root, "data", source);
    data.read("train_images", c.train_images);
    data.read("train_labels", c.train_labels);
    data.read("validation_fraction", c.validation_fraction);
    data.read("split_seed", c.split_seed);
    data.read("max_class_images", c.max_class_images);
    data.reject_unknown();

    Section run(root, "run", source);
    if (auto v = run.raw("classes")) {
        c.classes.clear();
        for (const auto& s : split_list(*v)) {
            try {
                c.classes.push_back(std::stoi(s));
            } catch (const std::exception&) {
                throw Error(ErrorKind::config, source + ": bad class id '" + s + "'");
            }
        }
    }
    run.read("out", c.out_dir);
    run.read("jobs", c.jobs);
    run.read("seed", c.seed);
    run.read("n_qubits", t.n_qubits);
    run.reject_unknown();

    Section pca(root, "pca", source);
    pca.read("components", c.components);
    pca.reject_unknown();

    Section pulse(root, "pulse", source);
    for (auto [key, list] : {std::pair{"rabi_shapes", &c.rabi_shapes}, std::pair{"local_shapes", &c.local_shapes}}) {
        if (auto v = pulse.raw(key)) {
            list->clear();
            for (const auto& s : split_list(*v)) list->push_back(parse_pulse_shape(s));
        }
    }
    pulse.read("ramp_fraction", t.ramp_fraction);
    pulse.read("rabi_max", t.limits.pulse.rabi_max);
    pulse.read("local_detuning_min", t.limits.pulse.local_detuning_min);
    pulse.read("global_detuning_max", t.limits.pulse.global_detuning_max);
    pulse.reject_unknown();

    Section geo(root, "geometry", source);
    geo.read("min_spacing", t.limits.arrangement.min_spacing);
    geo.read("field_width", t.limits.arrangement.field_width);
    geo.read("field_height", t.limits.arrangement.field_height);
    geo.read("c6", t.c6);
    geo.read("steps_per_us", t.steps_per_us);
    geo.read("grid_spacing", t.grid_spacing);
    geo.read("position_jitter", t.position_jitter);
    geo.reject_unknown();

    Section train(root, "train", source);
    train.read("cycles", t.cycles);
    train.read("nm_iters", t.nm_iters);
    train.read("nm_initial_step", t.nm_initial_step);
    train.read("disc_steps", t.disc_steps);
    train.read("gen_batch", t.gen_batch);
    train.read("disc_batch", t.disc_batch);
    train.read("hidden", t.hidden);
    train.read("learning_rate", t.learning_rate);
    train.read("beta1", t.beta1);
    train.read("beta2", t.beta2);
    train.read("adam_epsilon", t.adam_epsilon);
    if (auto v = train.raw("stage_order")) {
        t.stage_order.clear();
        for (const auto& s : split_list(*v)) t.stage_order.push_back(parse_param_group(s));
    }
    train.reject_unknown();

    Section noise(root, "noise", source);
    noise.read("detuning_sigma", c.noise.detuning_sigma);
    noise.read("rabi_rel_sigma", c.noise.rabi_rel_sigma);
    noise.read("position_sigma", c.noise.position_sigma);
    noise.reject_unknown();

    Section gen(root, "generate", source);
    gen.read("count", c.count);
    if (auto v = gen.raw("mode")) c.mode = parse_run_mode(*v);
    gen.read("shots", c.shots);
    gen.read("fid_batch", c.fid_batch);
    gen.read("montage_columns", c.montage_columns);
    gen.reject_unknown();

    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error&) {
        throw Error(ErrorKind::config, "cannot read config file " + path.string());
    }
    return parse_run_config(text, path.string());
}

std::string echo_config(const RunConfig& c) {
    const auto& t = c.train;
    std::ostringstream o;
    o.precision(17);
    o << "[data]\n"
      << "train_images = " << c.train_images.string() << "\n"
      << "train_labels = " << c.train_labels.string() << "\n"
      << "validation_fraction = " << c.validation_fraction << "\n"
      << "split_seed = " << c.split_seed << "\n"
      << "max_class_images = " << c.max_class_images << "\n\n"
      << "[run]\n"
      << "classes = " << join(c.classes) << "\n"
      << "out = " << c.out_dir.string() << "\n"
      << "jobs = " << c.jobs << "\n"
      << "seed = " << c.seed << "\n"
      << "n_qubits = " << t.n_qubits << "\n\n"
      << "[pca]\n"
      << "components = " << c.pca_components() << "\n\n"
      << "[pulse]\n"
      << "rabi_shapes = " << join(c.rabi_shapes) << "\n"
      << "local_shapes = " << join(c.local_shapes) << "\n"
      << "ramp_fraction = " << t.ramp_fraction << "\n"
      << "rabi_max = " << t.limits.pulse.rabi_max << "\n"
      << "local_detuning_min = " << t.limits.pulse.local_detuning_min << "\n"
      << "global_detuning_max = " << t.limits.pulse.global_detuning_max << "\n\n"
      << "[geometry]\n"
      << "min_spacing = " << t.limits.arrangement.min_spacing << "\n"
      << "field_width = " << t.limits.arrangement.field_width << "\n"
      << "field_height = " << t.limits.arrangement.field_height << "\n"
      << "c6 = " << t.c6 << "\n"
      << "steps_per_us = " << t.steps_per_us << "\n"
      << "grid_spacing = " << t.grid_spacing << "\n"
      << "position_jitter = " << t.position_jitter << "\n\n"
      << "[train]\n"
      << "cycles = " << t.cycles << "\n"
      << "nm_iters = " << t.nm_iters << "\n"
      << "nm_initial_step = " << t.nm_initial_step << "\n"
      << "disc_steps = " << t.disc_steps << "\n"
      << "gen_batch = " << t.gen_batch << "\n"
      << "disc_batch = " << t.disc_batch << "\n"
      << "hidden = " << t.hidden << "\n"
      << "learning_rate = " << t.learning_rate << "\n"
      << "beta1 = " << t.beta1 << "\n"
      << "beta2 = " << t.beta2 << "\n"
      << "adam_epsilon = " << t.adam_epsilon << "\n"
      << "stage_order = " << join(t.stage_order) << "\n\n"
      << "[noise]\n"
      << "detuning_sigma = " << c.noise.detuning_sigma << "\n"
      << "rabi_rel_sigma = " << c.noise.rabi_rel_sigma << "\n"
      << "position_sigma = " << c.noise.position_sigma << "\n\n"
      << "[generate]\n"
      << "count = " << c.count << "\n"
      << "mode = " << to_string(c.mode) << "\n"
      << "shots = " << c.shots << "\n"
      << "fid_batch = " << c.fid_batch << "\n"
      << "montage_columns = " << c.montage_columns << "\n";
    return o.str();
}

}  // namespace rydgan
