#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "rydgan/kernels.hpp"

namespace rydgan {

/// Fully connected classifier: in -> hidden (ReLU) -> hidden (ReLU) -> 1
/// (logistic). All weights live in one flat vector, laid out as
/// W1 (hidden x in, row-major), b1, W2 (hidden x hidden), b2, W3 (1 x hidden), b3.
/// Inputs pass through a fixed affine map (x - center) * scale first.
class DiscriminatorNet {
  public:
    DiscriminatorNet(int input_dim, int hidden);

    /// He-uniform weights, zero biases.
    static DiscriminatorNet random(int input_dim, int hidden, std::uint64_t seed);

    int input_dim() const noexcept { return input_; }
    int hidden() const noexcept { return hidden_; }
    static Eigen::Index parameter_count(int input_dim, int hidden);

    /// Maps the window [lo, hi] onto [-1, 1] before the first layer.
    void set_input_window(double lo, double hi);
    double input_center() const noexcept { return center_; }
    double input_scale() const noexcept { return scale_; }
    void set_input_normalization(double center, double scale);

    Eigen::VectorXd& parameters() noexcept { return params_; }
    const Eigen::VectorXd& parameters() const noexcept { return params_; }

    /// Pre-sigmoid output.
    double logit(std::span<const double> features) const;
    /// D(x) in (0, 1). Throws a numeric error on non-finite input.
    double forward(std::span<const double> features) const;

    /// Mean binary cross-entropy over real (target 1) and fake (target 0)
    /// rows; fills `gradient` with d(loss)/d(parameters) when non-null.
    double bce_loss(const RowMatrix& real, const RowMatrix& fake, Eigen::VectorXd* gradient = nullptr) const;

  private:
    struct Views;
    Views views() const;

    int input_;
    int hidden_;
    double center_ = 0.0;
    double scale_ = 1.0;
    Eigen::VectorXd params_;
};

struct AdamState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long step = 0;
};

void adam_update(Eigen::VectorXd& params, const Eigen::VectorXd& gradient, AdamState& state);

/// One Adam step on the BCE loss; returns the loss before the update.
double discriminator_step(DiscriminatorNet& net, const RowMatrix& real_batch, const RowMatrix& fake_batch,
                          AdamState& adam);

/// Fraction of rows classified correctly at threshold 0.5.
double discriminator_accuracy(const DiscriminatorNet& net, const RowMatrix& real, const RowMatrix& fake);

}  // namespace rydgan
