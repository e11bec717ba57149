#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "wordmap/embedding.hpp"

namespace wordmap {

/// Feed-forward binary classifier: `layers` hidden layers of width `hidden`
/// with LeakyReLU(0.2), a scalar logit output, dropout on the input.
/// Weights start uniform in +-1/sqrt(fan_in).
class Discriminator {
public:
    Discriminator(std::size_t input_dim, std::size_t hidden, std::size_t layers,
                  double input_dropout, std::uint64_t seed);

    /// Logits in evaluation mode (no dropout).
    Vector logits(const Matrix& x) const;

    /// Mean binary cross-entropy of sigmoid(logit) against `targets`.
    double loss(const Matrix& x, const Vector& targets) const;

    /// One SGD step on the mean BCE loss, with input dropout. Returns the
    /// loss before the step.
    double train_step(const Matrix& x, const Vector& targets, double lr, std::mt19937_64& rng);

    /// d(mean BCE)/d(x) in evaluation mode; parameters untouched.
    Matrix input_gradient(const Matrix& x, const Vector& targets, double* loss = nullptr) const;

    /// Flattened parameters, for finite-difference checks.
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& params);
    /// Gradient of mean BCE w.r.t. parameters (evaluation mode), same order.
    std::vector<double> parameter_gradient(const Matrix& x, const Vector& targets) const;

private:
    struct Layer {
        Eigen::MatrixXd weight;  // out x in
        Eigen::VectorXd bias;
    };
    struct Pass {
        std::vector<Matrix> pre;   // pre-activations per layer
        std::vector<Matrix> post;  // post[0] = (dropped) input
    };

    Pass forward(const Matrix& x, const Matrix* dropout_mask) const;
    // Returns d loss / d input; fills layer gradients when non-null.
    Matrix backward(const Pass& pass, const Vector& targets, std::vector<Layer>* grads) const;

    std::vector<Layer> layers_;
    double input_dropout_;
};

}  // namespace wordmap
