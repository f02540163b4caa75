#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rydgan/commands.hpp"
#include "rydgan/error.hpp"
#include "rydgan/image_io.hpp"
#include "rydgan/io.hpp"
#include "rydgan/metrics.hpp"
#include "rydgan/persistence.hpp"
#include "test_support.hpp"

using namespace rydgan;
namespace fs = std::filesystem;

namespace {

std::string tiny_ini(const fs::path& out) {
    return "[data]\n"
           "train_images = " + test::images_file().string() + "\n"
           "train_labels = " + test::labels_file().string() + "\n"
           "max_class_images = 120\n"
           "[run]\n"
           "classes = 1\n"
           "n_qubits = 2\n"
           "out = " + out.string() + "\n"
           "seed = 5\n"
           "[pulse]\n"
           "rabi_shapes = triangle\n"
           "local_shapes = linear, gaussian\n"
           "[geometry]\n"
           "steps_per_us = 100\n"
           "[train]\n"
           "cycles = 1\n"
           "nm_iters = 4\n"
           "disc_steps = 5\n"
           "gen_batch = 4\n"
           "disc_batch = 8\n"
           "hidden = 8\n"
           "[generate]\n"
           "count = 16\n"
           "fid_batch = 12\n"
           "montage_columns = 4\n";
}

RunConfig tiny_config(const fs::path& out) { return parse_run_config(tiny_ini(out)); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::argument;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    ADD_FAILURE() << "no error thrown";
    return {};
}

void run_pipeline(const RunConfig& c) {
    std::ostringstream log;
    cmd_fit_pca(c, log);
    cmd_train(c, log);
    cmd_select(c, log);
    cmd_generate(c, log);
}

std::vector<std::string> directory_bytes(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().filename() != "config.ini") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> out;
    for (const auto& f : files) out.push_back(fs::relative(f, dir).string() + "\n" + read_file(f));
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RYDGAN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, DefaultsValid) {
    EXPECT_NO_THROW(validate_run_config(RunConfig{}));
    EXPECT_EQ(RunConfig{}.pca_components(), 16);
    EXPECT_EQ(RunConfig{}.rabi_shapes.size() * RunConfig{}.local_shapes.size(), 25u);
}

TEST(Config, ParsesSections) {
    const auto c = tiny_config("/tmp/x");
    EXPECT_EQ(c.classes, std::vector<int>{1});
    EXPECT_EQ(c.n_qubits(), 2);
    EXPECT_EQ(c.pca_components(), 4);
    EXPECT_EQ(c.local_shapes, (std::vector<PulseShape>{PulseShape::linear, PulseShape::gaussian}));
    EXPECT_EQ(c.train.nm_iters, 4);
    EXPECT_EQ(c.train.steps_per_us, 100);
    EXPECT_EQ(c.out_dir, fs::path("/tmp/x"));
}

TEST(Config, EchoRoundTrips) {
    const auto c = tiny_config("/tmp/x");
    const auto text = echo_config(c);
    EXPECT_EQ(echo_config(parse_run_config(text)), text);
}

TEST(Config, UnknownKeyAndSectionRejected) {
    EXPECT_EQ(kind_of([] { parse_run_config("[train]\nepochs = 3\n"); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { parse_run_config("[optimizer]\nlr = 3\n"); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { parse_run_config("[train]\ncycles = many\n"); }), ErrorKind::config);
}

TEST(Config, InvalidShapeListsCatalog) {
    const auto msg = message_of([] { parse_run_config("[pulse]\nrabi_shapes = square\n"); });
    for (auto s : pulse_catalog()) EXPECT_NE(msg.find(std::string(to_string(s))), std::string::npos) << msg;
}

TEST(Config, EmptyClassListIsUsageError) {
    auto c = tiny_config("/tmp/x");
    c.classes.clear();
    EXPECT_EQ(kind_of([&] { cmd_evaluate(c, std::cout); }), ErrorKind::config);
}

TEST(Config, TooManyComponentsRejectedBeforeIo) {
    test::TempDir dir("cli");
    auto c = tiny_config(dir / "out");
    c.components = 1000;
    c.train_images = "/nonexistent/images";
    const auto msg = message_of([&] { cmd_fit_pca(c, std::cout); });
    EXPECT_NE(msg.find("784"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Config, MissingDatasetNamesPath) {
    test::TempDir dir("cli");
    auto c = tiny_config(dir / "out");
    c.train_images = "/nonexistent/images-file";
    EXPECT_NE(message_of([&] { cmd_fit_pca(c, std::cout); }).find("/nonexistent/images-file"), std::string::npos);
}

TEST(Commands, FullPipeline) {
    test::TempDir dir("cli");
    const auto c = tiny_config(dir / "out");
    run_pipeline(c);
    const RunPaths paths{c.out_dir};

    EXPECT_EQ(load_pca(paths.pca(1)).k(), 4);
    EXPECT_EQ(learner_files(c, 1).size(), 2u);
    EXPECT_TRUE(fs::exists(paths.logs(1) / "train_triangle__linear.csv"));
    const auto log = read_file(paths.logs(1) / "train_triangle__gaussian.csv");
    EXPECT_EQ(log.rfind("cycle,stage,iteration,generator_loss,discriminator_loss\n", 0), 0u);

    const auto e = load_ensemble(paths.ensemble(1));
    ASSERT_FALSE(e.members.empty());
    for (std::size_t i = 1; i < e.fid_trail.size(); ++i) EXPECT_LT(e.fid_trail[i], e.fid_trail[i - 1]);

    const auto gen = paths.generated(1, RunMode::ideal);
    for (int i = 0; i < 16; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "img_%04d.pgm", i);
        EXPECT_TRUE(fs::exists(gen / name)) << name;
    }
    EXPECT_FALSE(fs::exists(gen / "img_0016.pgm"));
    EXPECT_TRUE(fs::exists(gen / "montage.pgm"));
    EXPECT_TRUE(fs::exists(gen / "metrics.csv"));
    EXPECT_TRUE(fs::exists(gen / "variation.csv"));
    EXPECT_TRUE(fs::exists(gen / "config.ini"));
    EXPECT_TRUE(fs::exists(c.out_dir / "config.ini"));
    EXPECT_EQ(read_file(c.out_dir / "config.ini"), echo_config(c));
}

TEST(Commands, RerunIsByteIdentical) {
    test::TempDir dir("cli");
    const auto a = tiny_config(dir / "a");
    const auto b = tiny_config(dir / "b");
    run_pipeline(a);
    run_pipeline(b);
    const auto ba = directory_bytes(a.out_dir), bb = directory_bytes(b.out_dir);
    ASSERT_EQ(ba.size(), bb.size());
    for (std::size_t i = 0; i < ba.size(); ++i) EXPECT_TRUE(ba[i] == bb[i]) << ba[i].substr(0, ba[i].find('\n'));
}

TEST(Commands, ModesBehave) {
    test::TempDir dir("cli");
    auto c = tiny_config(dir / "out");
    run_pipeline(c);
    const RunPaths paths{c.out_dir};
    std::ostringstream log;
    c.mode = RunMode::noisy;
    cmd_generate(c, log);
    EXPECT_NE(read_file(paths.generated(1, RunMode::noisy) / "variation.csv"),
              read_file(paths.generated(1, RunMode::ideal) / "variation.csv"));

    c.mode = RunMode::shots;
    cmd_generate(c, log);
    const auto first = read_file(paths.generated(1, RunMode::shots) / "variation.csv");
    cmd_generate(c, log);
    EXPECT_EQ(read_file(paths.generated(1, RunMode::shots) / "variation.csv"), first);
    c.seed = 6;
    cmd_generate(c, log);
    EXPECT_NE(read_file(paths.generated(1, RunMode::shots) / "variation.csv"), first);
}

TEST(Commands, EvaluateReport) {
    test::TempDir dir("cli");
    const auto c = tiny_config(dir / "out");
    run_pipeline(c);
    std::ostringstream log;
    cmd_evaluate(c, log);
    const RunPaths paths{c.out_dir};
    const auto report = read_file(paths.evaluate() / "report.csv");
    std::istringstream in(report);
    std::string header, ideal, noisy, extra;
    std::getline(in, header);
    std::getline(in, ideal);
    std::getline(in, noisy);
    EXPECT_FALSE(std::getline(in, extra));
    EXPECT_EQ(header, "class,mode,count,fid,mean_variation");
    EXPECT_EQ(ideal.rfind("1,ideal,12,", 0), 0u);
    EXPECT_EQ(noisy.rfind("1,noisy,12,", 0), 0u);
    EXPECT_TRUE(fs::exists(paths.evaluate() / "summary.txt"));
    EXPECT_TRUE(fs::exists(paths.evaluate() / "variation.csv"));

    // FID column equals a direct fid() call on the same batch.
    const auto pca = load_pca(paths.pca(1));
    const auto ensemble = load_ensemble(paths.ensemble(1));
    const auto [train, val] = load_class_split(c, 1);
    const auto seeds = evaluation_seeds(c, 1, 12);
    const RowMatrix images = features_to_images(pca, ensemble_generate_batch(ensemble, seeds, ExactMode{}));
    const double direct = fid(summarize(val.pixels), summarize(images), kImageFidJitter);
    const double reported = std::stod(ideal.substr(11, ideal.rfind(',') - 11));
    EXPECT_NEAR(reported, direct, 1e-9);
}

TEST(Commands, SelectErrors) {
    test::TempDir dir("cli");
    const auto c = tiny_config(dir / "out");
    std::ostringstream log;
    cmd_fit_pca(c, log);
    EXPECT_EQ(kind_of([&] { cmd_select(c, log); }), ErrorKind::argument);
    EXPECT_EQ(kind_of([&] { cmd_generate(c, log); }), ErrorKind::io);

    cmd_train(c, log);
    const RunPaths paths{c.out_dir};
    // A single learner yields a single-member manifest.
    fs::remove(paths.learners(1) / "triangle__gaussian.json");
    cmd_select(c, log);
    EXPECT_EQ(load_ensemble(paths.ensemble(1)).members.size(), 1u);

    write_file_atomic(paths.learners(1) / "zz_corrupt.json", "{ not json");
    const auto msg = message_of([&] { cmd_select(c, log); });
    EXPECT_NE(msg.find("zz_corrupt.json"), std::string::npos) << msg;
    EXPECT_EQ(kind_of([&] { cmd_select(c, log); }), ErrorKind::data);
}

TEST(Cli, ExitCodes) {
    test::TempDir dir("cli");
    write_file_atomic(dir / "ok.ini", tiny_ini(dir / "out"));
    write_file_atomic(dir / "bad_shape.ini", "[pulse]\nrabi_shapes = square\n");
    write_file_atomic(dir / "missing_data.ini", "[data]\ntrain_images = /nonexistent/x\n");

    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("bogus"), 2);
    EXPECT_EQ(run_cli("fit-pca --config " + (dir / "bad_shape.ini").string()), 2);
    EXPECT_EQ(run_cli("fit-pca --config " + (dir / "missing_data.ini").string() + " --out " + (dir / "o").string()), 3);
    EXPECT_EQ(run_cli("fit-pca --config " + (dir / "nope.ini").string()), 2);
    EXPECT_EQ(run_cli("generate --mode sideways --config " + (dir / "ok.ini").string()), 2);
    EXPECT_EQ(run_cli("fit-pca --config " + (dir / "ok.ini").string() + " --class 3 --jobs 1"), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "class3" / "pca.json"));
    EXPECT_EQ(run_cli("generate --config " + (dir / "ok.ini").string() + " --class 3"), 3);
}
