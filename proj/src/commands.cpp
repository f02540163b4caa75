#include "rydgan/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rydgan/error.hpp"
#include "rydgan/image_io.hpp"
#include "rydgan/io.hpp"
#include "rydgan/kernels.hpp"
#include "rydgan/metrics.hpp"
#include "rydgan/persistence.hpp"
#include "rydgan/rng.hpp"

namespace rydgan {

namespace {

namespace fs = std::filesystem;

// Stream ids for derive_seed.
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kEvalSeedStream = 2;
constexpr std::uint64_t kGenerateSeedStream = 3;
constexpr std::uint64_t kModeStream = 4;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void prepare(const RunConfig& config, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
    write_file_atomic(dir / "config.ini", echo_config(config));
}

void begin(const RunConfig& config) {
    validate_run_config(config);
    if (config.jobs > 0) kernels::set_threads(config.jobs);
    prepare(config, config.out_dir);
}

PcaModel require_pca(const RunPaths& paths, int cls) {
    const auto path = paths.pca(cls);
    if (!fs::exists(path)) throw Error(ErrorKind::io, "missing PCA model " + path.string() + " (run fit-pca first)");
    return load_pca(path);
}

Ensemble require_ensemble(const RunPaths& paths, int cls) {
    const auto path = paths.ensemble(cls);
    if (!fs::exists(path)) throw Error(ErrorKind::io, "missing ensemble " + path.string() + " (run select first)");
    return load_ensemble(path);
}

struct Batch {
    RowMatrix images;
    std::vector<double> variation;
    double fid = 0.0;
};

Batch generate_batch_images(const Ensemble& ensemble, const PcaModel& pca, std::span<const double> seeds,
                            const GenerationMode& mode, const RunConfig& config, const FidReference* reference) {
    Batch b;
    const RowMatrix features = ensemble_generate_batch(ensemble, seeds, mode, config.train.limits);
    b.images = features_to_images(pca, features);
    b.variation = variation_scores(b.images);
    if (reference && b.images.rows() >= 2) b.fid = reference->distance_to(summarize(b.images));
    return b;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::pair<ImageSet, ImageSet> load_class_split(const RunConfig& config, int cls) {
    ImageSet all = load_idx(config.train_images, config.train_labels).filter_class(cls);
    if (config.max_class_images > 0) all = all.head(static_cast<std::size_t>(config.max_class_images));
    if (all.size() < 4) {
        throw Error(ErrorKind::data, "class " + std::to_string(cls) + " has only " + std::to_string(all.size()) +
                                         " images in " + config.train_images.string());
    }
    return split_train_validation(all, config.validation_fraction, derive_seed(config.split_seed, cls));
}

GenerationMode make_generation_mode(const RunConfig& config, RunMode mode, std::uint64_t seed) {
    switch (mode) {
        case RunMode::ideal: return ExactMode{};
        case RunMode::shots: return ShotsMode{config.shots, seed};
        case RunMode::noisy: {
            ErrorModel model = config.noise;
            model.rng_seed = seed;
            return NoisyMode{model, std::nullopt};
        }
    }
    return ExactMode{};
}

std::vector<double> evaluation_seeds(const RunConfig& config, int cls, std::size_t count) {
    return draw_seeds(count, derive_seed(derive_seed(config.seed, kEvalSeedStream), cls));
}

std::vector<fs::path> learner_files(const RunConfig& config, int cls) {
    std::vector<fs::path> files;
    const auto dir = RunPaths{config.out_dir}.learners(cls);
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

void cmd_fit_pca(const RunConfig& config, std::ostream& log) {
    begin(config);
    const RunPaths paths{config.out_dir};
    for (int cls : config.classes) {
        const auto [train, val] = load_class_split(config, cls);
        const PcaModel pca = fit_pca(train, config.pca_components());
        prepare(config, paths.class_dir(cls));
        save_pca(pca, paths.pca(cls));

        const double total = pca.eigenvalues.sum();
        log << "class " << cls << ": " << train.size() << " train / " << val.size() << " validation images, k = "
            << pca.k() << "\n";
        double cumulative = 0.0;
        for (int i = 0; i < pca.k(); ++i) {
            cumulative += pca.eigenvalues[i];
            log << "  pc" << i << "  eigenvalue " << pca.eigenvalues[i] << "  cumulative "
                << (total > 0 ? cumulative / total : 0.0) << "\n";
        }
    }
}

void cmd_train(const RunConfig& config, std::ostream& log) {
    begin(config);
    const RunPaths paths{config.out_dir};
    for (int cls : config.classes) {
        const PcaModel pca = require_pca(paths, cls);
        if (pca.k() != config.pca_components()) {
            throw Error(ErrorKind::data, paths.pca(cls).string() + ": model has " + std::to_string(pca.k()) +
                                             " components, config expects " +
                                             std::to_string(config.pca_components()));
        }
        const auto [train, val] = load_class_split(config, cls);
        const RowMatrix features = scale_batch(pca, transform_batch(pca, train.pixels));
        prepare(config, paths.learners(cls));
        prepare(config, paths.logs(cls));

        std::uint64_t pair_index = 0;
        for (PulseShape rabi : config.rabi_shapes) {
            for (PulseShape local : config.local_shapes) {
                const std::string id = learner_id(rabi, local);
                TrainConfig tc = config.train;
                tc.master_seed = derive_seed(derive_seed(derive_seed(config.seed, kTrainStream), cls), pair_index++);
                TrainResult result;
                try {
                    result = layered_train(tc, features, rabi, local);
                } catch (const Error& e) {
                    throw Error(e.kind(), "learner " + id + ": " + e.what());
                }
                save_learner(result.learner, tc, paths.learners(cls) / (id + ".json"));

                std::string csv = "cycle,stage,iteration,generator_loss,discriminator_loss\n";
                for (const auto& row : result.log) {
                    csv += std::to_string(row.cycle) + "," + row.stage + "," + std::to_string(row.iteration) + "," +
                           num(row.generator_loss) + "," + num(row.discriminator_loss) + "\n";
                }
                write_file_atomic(paths.logs(cls) / ("train_" + id + ".csv"), csv);
                log << "class " << cls << " learner " << id << ": final generator loss "
                    << result.learner.final_loss << "\n";
            }
        }
    }
}

void cmd_select(const RunConfig& config, std::ostream& log) {
    begin(config);
    const RunPaths paths{config.out_dir};
    for (int cls : config.classes) {
        const auto files = learner_files(config, cls);
        if (files.empty()) {
            throw Error(ErrorKind::argument, "no learner files in " + paths.learners(cls).string());
        }
        const PcaModel pca = require_pca(paths, cls);
        std::vector<Learner> learners;
        for (const auto& f : files) learners.push_back(load_learner(f));
        const auto [train, val] = load_class_split(config, cls);
        const auto seeds = evaluation_seeds(config, cls, static_cast<std::size_t>(config.fid_batch));
        const Ensemble ensemble = greedy_select(learners, val, seeds, pca, ExactMode{}, config.train.limits);
        save_ensemble(ensemble, paths.ensemble(cls));

        log << "class " << cls << ": " << ensemble.members.size() << " of " << learners.size()
            << " learners selected, validation FID " << ensemble.validation_fid << "\n";
        for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
            log << "  + " << ensemble.members[i].id << "  FID " << ensemble.fid_trail[i] << "\n";
        }
    }
}

void cmd_generate(const RunConfig& config, std::ostream& log) {
    begin(config);
    const RunPaths paths{config.out_dir};
    for (int cls : config.classes) {
        const PcaModel pca = require_pca(paths, cls);
        const Ensemble ensemble = require_ensemble(paths, cls);
        const auto [train, val] = load_class_split(config, cls);
        const FidReference reference(summarize(val.pixels), kImageFidJitter);

        const std::uint64_t base = derive_seed(derive_seed(config.seed, kGenerateSeedStream), cls);
        const auto seeds = draw_seeds(static_cast<std::size_t>(config.count), base);
        const auto mode = make_generation_mode(config, config.mode, derive_seed(base, kModeStream));
        const Batch batch = generate_batch_images(ensemble, pca, seeds, mode, config, &reference);

        const fs::path dir = paths.generated(cls, config.mode);
        prepare(config, dir);
        for (Eigen::Index i = 0; i < batch.images.rows(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "img_%04d.pgm", static_cast<int>(i));
            write_pgm(dir / name, std::span<const double>(batch.images.row(i).data(), kImagePixels));
        }
        write_montage(dir / "montage.pgm", batch.images, config.montage_columns);

        std::string per_image = "index,seed,variation\n";
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            per_image += std::to_string(i) + "," + num(seeds[i]) + "," + num(batch.variation[i]) + "\n";
        }
        write_file_atomic(dir / "variation.csv", per_image);

        const bool has_fid = batch.images.rows() >= 2;
        std::string metrics = "class,mode,count,fid,mean_variation\n";
        metrics += std::to_string(cls) + "," + std::string(to_string(config.mode)) + "," +
                   std::to_string(config.count) + "," + (has_fid ? num(batch.fid) : std::string("nan")) + "," +
                   num(mean_of(batch.variation)) + "\n";
        write_file_atomic(dir / "metrics.csv", metrics);

        log << "class " << cls << " (" << to_string(config.mode) << "): " << config.count << " images in "
            << dir.string();
        if (has_fid) log << ", FID " << batch.fid;
        log << ", mean variation " << mean_of(batch.variation) << "\n";
    }
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
    begin(config);
    const RunPaths paths{config.out_dir};
    prepare(config, paths.evaluate());

    std::string report = "class,mode,count,fid,mean_variation\n";
    std::string per_image = "class,mode,index,variation\n";
    std::ostringstream summary;
    summary << "class  mode   count  fid  mean_variation\n";
    for (int cls : config.classes) {
        const PcaModel pca = require_pca(paths, cls);
        const Ensemble ensemble = require_ensemble(paths, cls);
        const auto [train, val] = load_class_split(config, cls);
        const FidReference reference(summarize(val.pixels), kImageFidJitter);
        const auto seeds = evaluation_seeds(config, cls, static_cast<std::size_t>(config.fid_batch));
        const std::uint64_t mode_seed = derive_seed(derive_seed(config.seed, kModeStream), cls);

        for (RunMode mode : {RunMode::ideal, RunMode::noisy}) {
            const Batch batch = generate_batch_images(ensemble, pca, seeds, make_generation_mode(config, mode, mode_seed),
                                                      config, &reference);
            const double mv = mean_of(batch.variation);
            const std::string m(to_string(mode));
            report += std::to_string(cls) + "," + m + "," + std::to_string(config.fid_batch) + "," + num(batch.fid) +
                      "," + num(mv) + "\n";
            for (std::size_t i = 0; i < batch.variation.size(); ++i) {
                per_image += std::to_string(cls) + "," + m + "," + std::to_string(i) + "," + num(batch.variation[i]) +
                             "\n";
            }
            summary << cls << "  " << m << "  " << config.fid_batch << "  " << batch.fid << "  " << mv << "\n";
        }
    }
    write_file_atomic(paths.evaluate() / "report.csv", report);
    write_file_atomic(paths.evaluate() / "variation.csv", per_image);
    write_file_atomic(paths.evaluate() / "summary.txt", summary.str());
    log << summary.str();
}

}  // namespace rydgan
