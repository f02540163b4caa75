#include "rydgan/discriminator.hpp"

#include <cmath>
#include <random>

#include "rydgan/error.hpp"

namespace rydgan {

namespace {

using ConstMatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct Offsets {
    Eigen::Index w1, b1, w2, b2, w3, b3, total;
};

Offsets offsets(int in, int h) {
    Offsets o{};
    o.w1 = 0;
    o.b1 = o.w1 + Eigen::Index{h} * in;
    o.w2 = o.b1 + h;
    o.b2 = o.w2 + Eigen::Index{h} * h;
    o.w3 = o.b2 + h;
    o.b3 = o.w3 + h;
    o.total = o.b3 + 1;
    return o;
}

}  // namespace

struct DiscriminatorNet::Views {
    ConstMatMap w1;
    ConstVecMap b1;
    ConstMatMap w2;
    ConstVecMap b2;
    ConstVecMap w3;
    double b3;
};

DiscriminatorNet::DiscriminatorNet(int input_dim, int hidden) : input_(input_dim), hidden_(hidden) {
    if (input_dim < 1 || hidden < 1) throw Error(ErrorKind::config, "discriminator sizes must be positive");
    params_ = Eigen::VectorXd::Zero(parameter_count(input_dim, hidden));
}

Eigen::Index DiscriminatorNet::parameter_count(int input_dim, int hidden) { return offsets(input_dim, hidden).total; }

DiscriminatorNet DiscriminatorNet::random(int input_dim, int hidden, std::uint64_t seed) {
    DiscriminatorNet net(input_dim, hidden);
    const auto o = offsets(input_dim, hidden);
    std::mt19937_64 rng(seed);
    auto fill = [&](Eigen::Index from, Eigen::Index count, int fan_in) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double limit = std::sqrt(6.0 / fan_in);
        for (Eigen::Index i = 0; i < count; ++i) net.params_[from + i] = limit * u(rng);
    };
    fill(o.w1, o.b1 - o.w1, input_dim);
    fill(o.w2, o.b2 - o.w2, hidden);
    fill(o.w3, o.b3 - o.w3, hidden);
    return net;
}

void DiscriminatorNet::set_input_window(double lo, double hi) {
    if (!(hi > lo)) throw Error(ErrorKind::config, "discriminator input window must be nonempty");
    set_input_normalization(0.5 * (lo + hi), 2.0 / (hi - lo));
}

void DiscriminatorNet::set_input_normalization(double center, double scale) {
    if (!std::isfinite(center) || !(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorKind::config, "bad discriminator input normalization");
    }
    center_ = center;
    scale_ = scale;
}

DiscriminatorNet::Views DiscriminatorNet::views() const {
    const auto o = offsets(input_, hidden_);
    const double* p = params_.data();
    return Views{ConstMatMap(p + o.w1, hidden_, input_), ConstVecMap(p + o.b1, hidden_),
                 ConstMatMap(p + o.w2, hidden_, hidden_), ConstVecMap(p + o.b2, hidden_),
                 ConstVecMap(p + o.w3, hidden_),          p[o.b3]};
}

double DiscriminatorNet::logit(std::span<const double> features) const {
    if (static_cast<int>(features.size()) != input_) throw Error(ErrorKind::shape, "discriminator input size mismatch");
    for (double f : features) {
        if (!std::isfinite(f)) throw Error(ErrorKind::numeric, "non-finite discriminator input");
    }
    const auto v = views();
    const Eigen::VectorXd x = (ConstVecMap(features.data(), input_).array() - center_) * scale_;
    const Eigen::VectorXd a1 = (v.w1 * x + v.b1).cwiseMax(0.0);
    const Eigen::VectorXd a2 = (v.w2 * a1 + v.b2).cwiseMax(0.0);
    return v.w3.dot(a2) + v.b3;
}

double DiscriminatorNet::forward(std::span<const double> features) const { return sigmoid(logit(features)); }

double DiscriminatorNet::bce_loss(const RowMatrix& real, const RowMatrix& fake, Eigen::VectorXd* gradient) const {
    if (real.rows() < 1 || fake.rows() < 1) throw Error(ErrorKind::argument, "BCE needs nonempty real and fake batches");
    if (real.cols() != input_ || fake.cols() != input_) throw Error(ErrorKind::shape, "batch width mismatch");
    if (!real.allFinite() || !fake.allFinite()) throw Error(ErrorKind::numeric, "non-finite discriminator input");

    const auto v = views();
    const auto o = offsets(input_, hidden_);
    const double n = static_cast<double>(real.rows() + fake.rows());
    if (gradient) gradient->setZero(o.total);

    double loss = 0.0;
    auto accumulate = [&](const RowMatrix& batch, double target) {
        // Batched forward: columns are samples.
        const Eigen::MatrixXd x = (batch.transpose().array() - center_) * scale_;
        const Eigen::MatrixXd z1 = (v.w1 * x).colwise() + v.b1;
        const Eigen::MatrixXd a1 = z1.cwiseMax(0.0);
        const Eigen::MatrixXd z2 = (v.w2 * a1).colwise() + v.b2;
        const Eigen::MatrixXd a2 = z2.cwiseMax(0.0);
        const Eigen::RowVectorXd z3 = (v.w3.transpose() * a2).array() + v.b3;

        Eigen::RowVectorXd dz3(z3.size());
        for (Eigen::Index s = 0; s < z3.size(); ++s) {
            loss += target > 0.5 ? softplus(-z3[s]) : softplus(z3[s]);
            dz3[s] = (sigmoid(z3[s]) - target) / n;
        }
        if (!gradient) return;

        double* g = gradient->data();
        VecMap(g + o.w3, hidden_) += a2 * dz3.transpose();
        g[o.b3] += dz3.sum();
        const Eigen::MatrixXd dz2 = ((v.w3 * dz3).array() * (z2.array() > 0.0).cast<double>()).matrix();
        MatMap(g + o.w2, hidden_, hidden_) += dz2 * a1.transpose();
        VecMap(g + o.b2, hidden_) += dz2.rowwise().sum();
        const Eigen::MatrixXd dz1 = ((v.w2.transpose() * dz2).array() * (z1.array() > 0.0).cast<double>()).matrix();
        MatMap(g + o.w1, hidden_, input_) += dz1 * x.transpose();
        VecMap(g + o.b1, hidden_) += dz1.rowwise().sum();
    };
    accumulate(real, 1.0);
    accumulate(fake, 0.0);
    return loss / n;
}

void adam_update(Eigen::VectorXd& params, const Eigen::VectorXd& gradient, AdamState& s) {
    if (s.m.size() != params.size()) {
        s.m = Eigen::VectorXd::Zero(params.size());
        s.v = Eigen::VectorXd::Zero(params.size());
        s.step = 0;
    }
    ++s.step;
    s.m = s.beta1 * s.m + (1.0 - s.beta1) * gradient;
    s.v = s.beta2 * s.v + (1.0 - s.beta2) * gradient.cwiseAbs2();
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    params.array() -= s.learning_rate * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.epsilon);
}

double discriminator_step(DiscriminatorNet& net, const RowMatrix& real_batch, const RowMatrix& fake_batch,
                          AdamState& adam) {
    Eigen::VectorXd grad;
    const double loss = net.bce_loss(real_batch, fake_batch, &grad);
    adam_update(net.parameters(), grad, adam);
    return loss;
}

double discriminator_accuracy(const DiscriminatorNet& net, const RowMatrix& real, const RowMatrix& fake) {
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < real.rows(); ++i) {
        const Eigen::RowVectorXd r = real.row(i);
        correct += net.logit({r.data(), static_cast<std::size_t>(r.size())}) > 0.0;
    }
    for (Eigen::Index i = 0; i < fake.rows(); ++i) {
        const Eigen::RowVectorXd r = fake.row(i);
        correct += net.logit({r.data(), static_cast<std::size_t>(r.size())}) <= 0.0;
    }
    return static_cast<double>(correct) / static_cast<double>(real.rows() + fake.rows());
}

}  // namespace rydgan
