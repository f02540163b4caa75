#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rydgan/commands.hpp"
#include "rydgan/error.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<int> cls;
    std::optional<std::string> mode;
    std::optional<int> count;
    std::optional<int> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

rydgan::RunConfig resolve(const Overrides& o) {
    rydgan::RunConfig config = o.config_path.empty() ? rydgan::RunConfig{} : rydgan::load_run_config(o.config_path);
    if (o.cls) config.classes = {*o.cls};
    if (o.mode) config.mode = rydgan::parse_run_mode(*o.mode);
    if (o.count) config.count = *o.count;
    if (o.jobs) config.jobs = *o.jobs;
    if (o.seed) config.seed = *o.seed;
    if (o.out) config.out_dir = *o.out;
    rydgan::validate_run_config(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-level quantum GAN ensemble for image generation"};
    app.require_subcommand(1);

    Overrides o;
    app.add_option("--config", o.config_path, "INI configuration file");
    app.add_option("--class", o.cls, "Digit class (overrides [run] classes)");
    app.add_option("--mode", o.mode, "Generation mode")->check(CLI::IsMember({"ideal", "noisy", "shots"}));
    app.add_option("--count", o.count, "Images to generate");
    app.add_option("--jobs", o.jobs, "Worker threads");
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--out", o.out, "Output directory");

    using Command = void (*)(const rydgan::RunConfig&, std::ostream&);
    const std::pair<const char*, Command> commands[] = {
        {"fit-pca", rydgan::cmd_fit_pca},   {"train", rydgan::cmd_train},       {"select", rydgan::cmd_select},
        {"generate", rydgan::cmd_generate}, {"evaluate", rydgan::cmd_evaluate},
    };
    const char* help[] = {"Fit per-class PCA and feature scaling", "Train one learner per shape pair",
                          "Greedy ensemble selection over trained learners",
                          "Generate images from the selected ensemble",
                          "Ideal vs. noisy FID and variation report"};
    Command chosen = nullptr;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->fallthrough();
        sub->callback([&chosen, c = commands[i].second] { chosen = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        chosen(resolve(o), std::cout);
    } catch (const rydgan::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rydgan::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
