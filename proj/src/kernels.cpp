#include "rydgan/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rydgan/error.hpp"

namespace rydgan::kernels {

namespace {

void check_covariance_input(const RowMatrix& data, const Eigen::VectorXd& mean) {
    if (data.rows() < 2) throw Error(ErrorKind::argument, "covariance needs at least two samples");
    if (mean.size() != data.cols()) throw Error(ErrorKind::shape, "mean length differs from sample width");
}

// Column-major copy of the centered data so every covariance entry is one
// contiguous dot product.
Eigen::MatrixXd centered(const RowMatrix& data, const Eigen::VectorXd& mean) {
    Eigen::MatrixXd x = data;
    x.rowwise() -= mean.transpose();
    return x;
}

double covariance_entry(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j) {
    return x.col(i).dot(x.col(j)) / static_cast<double>(x.rows() - 1);
}

void fill_row(RowMatrix& out, Eigen::Index row, const GeneratorParams& params, double seed,
              const GenerationMode& mode, const HardwareLimits& limits) {
    const auto f = generate_features(params, seed, mode_for_item(mode, static_cast<std::uint64_t>(row)), limits);
    for (std::size_t j = 0; j < f.size(); ++j) out(row, static_cast<Eigen::Index>(j)) = f[j];
}

// Plain in-order sums, so the scores do not depend on SIMD reduction order.
Eigen::RowVectorXd pixel_mean(const RowMatrix& images) {
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(images.cols());
    for (Eigen::Index r = 0; r < images.rows(); ++r) {
        for (Eigen::Index j = 0; j < images.cols(); ++j) mu[j] += images(r, j);
    }
    return mu / static_cast<double>(images.rows());
}

double row_score(const RowMatrix& images, const Eigen::RowVectorXd& mu, Eigen::Index r) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < images.cols(); ++j) {
        const double d = mu[j] - images(r, j);
        s += d * d;
    }
    return s;
}

}  // namespace

namespace serial {

RowMatrix generate_batch(const GeneratorParams& params, std::span<const double> seeds, const GenerationMode& mode,
                         const HardwareLimits& limits) {
    validate_params(params, limits);
    RowMatrix out(static_cast<Eigen::Index>(seeds.size()), Eigen::Index{1} << params.n_qubits());
    for (Eigen::Index i = 0; i < out.rows(); ++i) fill_row(out, i, params, seeds[i], mode, limits);
    return out;
}

Eigen::MatrixXd covariance(const RowMatrix& data, const Eigen::VectorXd& mean) {
    check_covariance_input(data, mean);
    const auto x = centered(data, mean);
    const Eigen::Index d = x.cols();
    Eigen::MatrixXd c(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i; j < d; ++j) c(i, j) = c(j, i) = covariance_entry(x, i, j);
    }
    return c;
}

std::vector<double> variation_scores(const RowMatrix& images) {
    if (images.rows() < 1) throw Error(ErrorKind::argument, "variation needs a nonempty batch");
    const Eigen::RowVectorXd mu = pixel_mean(images);
    std::vector<double> s(static_cast<std::size_t>(images.rows()));
    for (Eigen::Index r = 0; r < images.rows(); ++r) s[r] = row_score(images, mu, r);
    return s;
}

}  // namespace serial

namespace parallel {

RowMatrix generate_batch(const GeneratorParams& params, std::span<const double> seeds, const GenerationMode& mode,
                         const HardwareLimits& limits) {
    validate_params(params, limits);
    RowMatrix out(static_cast<Eigen::Index>(seeds.size()), Eigen::Index{1} << params.n_qubits());
    const long rows = static_cast<long>(out.rows());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < rows; ++i) {
        try {
            fill_row(out, i, params, seeds[i], mode, limits);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

Eigen::MatrixXd covariance(const RowMatrix& data, const Eigen::VectorXd& mean) {
    check_covariance_input(data, mean);
    const auto x = centered(data, mean);
    const long d = static_cast<long>(x.cols());
    Eigen::MatrixXd c(d, d);
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < d; ++i) {
        for (long j = i; j < d; ++j) c(i, j) = c(j, i) = covariance_entry(x, i, j);
    }
    return c;
}

std::vector<double> variation_scores(const RowMatrix& images) {
    if (images.rows() < 1) throw Error(ErrorKind::argument, "variation needs a nonempty batch");
    const Eigen::RowVectorXd mu = pixel_mean(images);
    const long rows = static_cast<long>(images.rows());
    std::vector<double> s(static_cast<std::size_t>(rows));
#pragma omp parallel for
    for (long r = 0; r < rows; ++r) s[r] = row_score(images, mu, r);
    return s;
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace rydgan::kernels
