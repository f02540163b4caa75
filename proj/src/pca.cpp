#include "rydgan/pca.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "rydgan/error.hpp"
#include "rydgan/io.hpp"

namespace rydgan {

namespace {

constexpr const char* kPcaFormat = "rydgan-pca";
constexpr int kPcaVersion = 1;

void check_width(const PcaModel& m, Eigen::Index n, Eigen::Index expected, const char* what) {
    if (n != expected) {
        throw Error(ErrorKind::shape, std::string(what) + " has length " + std::to_string(n) + ", expected " +
                                          std::to_string(expected));
    }
    (void)m;
}

void check_scale(const PcaModel& m) {
    if (m.scale_lo.size() != m.k() || m.scale_hi.size() != m.k()) {
        throw Error(ErrorKind::data, "PCA model has no scale bounds");
    }
    for (int j = 0; j < m.k(); ++j) {
        if (!(m.scale_lo[j] < m.scale_hi[j])) {
            throw Error(ErrorKind::data, "degenerate scale bounds for feature " + std::to_string(j));
        }
    }
}

nlohmann::json to_json(const Eigen::Ref<const Eigen::VectorXd>& v) { return std::vector<double>(v.begin(), v.end()); }

Eigen::VectorXd vector_from(const nlohmann::json& j, Eigen::Index expected, const std::string& what) {
    const auto v = j.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != expected) {
        throw Error(ErrorKind::data, what + " has " + std::to_string(v.size()) + " values, header says " +
                                         std::to_string(expected));
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), expected);
}

}  // namespace

PcaModel fit_pca(const ImageSet& train, int k) {
    const Eigen::Index n = train.pixels.rows();
    const Eigen::Index d = train.pixels.cols();
    if (k < 1 || k > d) throw Error(ErrorKind::config, "component count must lie in [1, " + std::to_string(d) + "]");
    if (n < k + 1) {
        throw Error(ErrorKind::data, "PCA with k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) +
                                         " samples, got " + std::to_string(n));
    }

    PcaModel m;
    m.mean = train.pixels.colwise().mean().transpose();
    const Eigen::MatrixXd cov = kernels::parallel::covariance(train.pixels, m.mean);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::numeric, "covariance eigendecomposition failed");

    // Eigen returns ascending eigenvalues.
    m.components.resize(k, d);
    m.eigenvalues.resize(k);
    for (int c = 0; c < k; ++c) {
        const Eigen::Index src = d - 1 - c;
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0.0) v = -v;
        m.components.row(c) = v.transpose();
        m.eigenvalues[c] = std::max(solver.eigenvalues()[src], 0.0);
    }

    const RowMatrix weights = transform_batch(m, train.pixels);
    m.scale_lo = weights.colwise().minCoeff().transpose();
    m.scale_hi = weights.colwise().maxCoeff().transpose();
    return m;
}

Eigen::VectorXd transform(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& image) {
    check_width(model, image.size(), model.dim(), "image");
    return model.components * (image - model.mean);
}

Eigen::VectorXd inverse_transform(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& weights) {
    check_width(model, weights.size(), model.k(), "weight vector");
    return model.mean + model.components.transpose() * weights;
}

RowMatrix transform_batch(const PcaModel& model, const RowMatrix& images) {
    check_width(model, images.cols(), model.dim(), "image rows");
    RowMatrix centered = images.rowwise() - model.mean.transpose();
    return centered * model.components.transpose();
}

RowMatrix inverse_transform_batch(const PcaModel& model, const RowMatrix& weights) {
    check_width(model, weights.cols(), model.k(), "weight rows");
    RowMatrix out = weights * model.components;
    out.rowwise() += model.mean.transpose();
    return out;
}

Eigen::VectorXd scale_features(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& weights) {
    check_width(model, weights.size(), model.k(), "weight vector");
    check_scale(model);
    const double top = model.window();
    const Eigen::ArrayXd t = (weights - model.scale_lo).array() / (model.scale_hi - model.scale_lo).array();
    return (kScaleFloor + t * (top - kScaleFloor)).matrix();
}

Eigen::VectorXd unscale_features(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& scaled) {
    check_width(model, scaled.size(), model.k(), "scaled vector");
    check_scale(model);
    const double top = model.window();
    const Eigen::ArrayXd t = (scaled.array() - kScaleFloor) / (top - kScaleFloor);
    return (model.scale_lo.array() + t * (model.scale_hi - model.scale_lo).array()).matrix();
}

RowMatrix scale_batch(const PcaModel& model, const RowMatrix& weights) {
    RowMatrix out(weights.rows(), weights.cols());
    for (Eigen::Index i = 0; i < weights.rows(); ++i) out.row(i) = scale_features(model, weights.row(i).transpose());
    return out;
}

RowMatrix unscale_batch(const PcaModel& model, const RowMatrix& scaled) {
    RowMatrix out(scaled.rows(), scaled.cols());
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) out.row(i) = unscale_features(model, scaled.row(i).transpose());
    return out;
}

RowMatrix features_to_images(const PcaModel& model, const RowMatrix& features) {
    return inverse_transform_batch(model, unscale_batch(model, features));
}

std::string serialize_pca(const PcaModel& m) {
    nlohmann::json j;
    j["format"] = kPcaFormat;
    j["version"] = kPcaVersion;
    j["components_rows"] = m.k();
    j["components_cols"] = m.dim();
    j["mean"] = to_json(m.mean);
    j["eigenvalues"] = to_json(m.eigenvalues);
    j["scale_lo"] = to_json(m.scale_lo);
    j["scale_hi"] = to_json(m.scale_hi);
    j["scale_floor"] = kScaleFloor;
    auto& rows = j["components"] = nlohmann::json::array();
    for (int r = 0; r < m.k(); ++r) rows.push_back(to_json(m.components.row(r).transpose()));
    return j.dump(1) + "\n";
}

PcaModel parse_pca(const std::string& text, const std::string& source) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("format") != kPcaFormat) throw Error(ErrorKind::data, source + ": not a PCA model file");
        if (j.at("version").get<int>() != kPcaVersion) {
            throw Error(ErrorKind::data, source + ": unsupported PCA model version");
        }
        const int k = j.at("components_rows").get<int>();
        const int d = j.at("components_cols").get<int>();
        if (k < 1 || d < k) throw Error(ErrorKind::data, source + ": bad component shape header");
        PcaModel m;
        m.mean = vector_from(j.at("mean"), d, "mean");
        m.eigenvalues = vector_from(j.at("eigenvalues"), k, "eigenvalues");
        m.scale_lo = vector_from(j.at("scale_lo"), k, "scale_lo");
        m.scale_hi = vector_from(j.at("scale_hi"), k, "scale_hi");
        const auto& rows = j.at("components");
        if (static_cast<int>(rows.size()) != k) throw Error(ErrorKind::data, source + ": component row count mismatch");
        m.components.resize(k, d);
        for (int r = 0; r < k; ++r) m.components.row(r) = vector_from(rows[r], d, "component row").transpose();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::data, source + ": " + e.what());
    }
}

void save_pca(const PcaModel& model, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_pca(model));
}

PcaModel load_pca(const std::filesystem::path& path) { return parse_pca(read_file(path), path.string()); }

}  // namespace rydgan
