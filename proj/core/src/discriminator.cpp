#include "wordmap/discriminator.hpp"

#include <cmath>

#include "wordmap/errors.hpp"

namespace wordmap {
namespace {

constexpr double kSlope = 0.2;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
    return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

Discriminator::Discriminator(std::size_t input_dim, std::size_t hidden, std::size_t layers,
                             double input_dropout, std::uint64_t seed)
    : input_dropout_(input_dropout) {
    if (input_dim < 1 || hidden < 1) throw ArgumentError("discriminator: sizes must be >= 1");
    if (input_dropout < 0 || input_dropout >= 1)
        throw ArgumentError("discriminator: dropout must be in [0, 1)");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> widths{input_dim};
    for (std::size_t l = 0; l < layers; ++l) widths.push_back(hidden);
    widths.push_back(1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const auto in = static_cast<Eigen::Index>(widths[l]);
        const auto out = static_cast<Eigen::Index>(widths[l + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> u(-bound, bound);
        Layer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out)};
        for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = u(rng);
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = u(rng);
        layers_.push_back(std::move(layer));
    }
}

Discriminator::Pass Discriminator::forward(const Matrix& x, const Matrix* mask) const {
    Pass p;
    p.post.push_back(mask ? Matrix(x.cwiseProduct(*mask)) : x);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        Matrix z = p.post.back() * layers_[l].weight.transpose();
        z.rowwise() += layers_[l].bias.transpose();
        p.pre.push_back(z);
        if (l + 1 < layers_.size())
            p.post.push_back(z.unaryExpr([](double v) { return v > 0 ? v : kSlope * v; }));
    }
    return p;
}

Matrix Discriminator::backward(const Pass& pass, const Vector& targets,
                               std::vector<Layer>* grads) const {
    const auto n = static_cast<double>(targets.size());
    const Matrix& logits = pass.pre.back();
    Matrix dz(logits.rows(), 1);
    for (Eigen::Index i = 0; i < logits.rows(); ++i) dz(i, 0) = (sigmoid(logits(i, 0)) - targets(i)) / n;

    if (grads) grads->resize(layers_.size());
    Matrix d_in;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        if (grads) {
            (*grads)[l].weight = dz.transpose() * pass.post[l];
            (*grads)[l].bias = dz.colwise().sum().transpose();
        }
        d_in = dz * layers_[l].weight;
        if (l > 0) {
            const Matrix& pre = pass.pre[l - 1];
            dz = d_in.cwiseProduct(pre.unaryExpr([](double v) { return v > 0 ? 1.0 : kSlope; }));
        }
    }
    return d_in;
}

Vector Discriminator::logits(const Matrix& x) const {
    return forward(x, nullptr).pre.back().col(0);
}

double Discriminator::loss(const Matrix& x, const Vector& targets) const {
    Vector z = logits(x);
    double total = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) total += softplus(z(i)) - targets(i) * z(i);
    return total / static_cast<double>(z.size());
}

double Discriminator::train_step(const Matrix& x, const Vector& targets, double lr,
                                 std::mt19937_64& rng) {
    Matrix mask;
    if (input_dropout_ > 0) {
        std::bernoulli_distribution keep(1.0 - input_dropout_);
        const double scale = 1.0 / (1.0 - input_dropout_);
        mask.resize(x.rows(), x.cols());
        for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(rng) ? scale : 0.0;
    }
    Pass pass = forward(x, input_dropout_ > 0 ? &mask : nullptr);
    double total = 0;
    const Matrix& z = pass.pre.back();
    for (Eigen::Index i = 0; i < z.rows(); ++i) total += softplus(z(i, 0)) - targets(i) * z(i, 0);

    std::vector<Layer> grads;
    backward(pass, targets, &grads);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        layers_[l].weight -= lr * grads[l].weight;
        layers_[l].bias -= lr * grads[l].bias;
    }
    return total / static_cast<double>(z.rows());
}

Matrix Discriminator::input_gradient(const Matrix& x, const Vector& targets, double* loss_out) const {
    Pass pass = forward(x, nullptr);
    if (loss_out) {
        const Matrix& z = pass.pre.back();
        double total = 0;
        for (Eigen::Index i = 0; i < z.rows(); ++i) total += softplus(z(i, 0)) - targets(i) * z(i, 0);
        *loss_out = total / static_cast<double>(z.rows());
    }
    return backward(pass, targets, nullptr);
}

std::vector<double> Discriminator::parameters() const {
    std::vector<double> out;
    for (const auto& l : layers_) {
        out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.size());
        out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
    }
    return out;
}

void Discriminator::set_parameters(const std::vector<double>& params) {
    std::size_t pos = 0;
    for (auto& l : layers_) {
        for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = params.at(pos++);
        for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = params.at(pos++);
    }
}

std::vector<double> Discriminator::parameter_gradient(const Matrix& x, const Vector& targets) const {
    std::vector<Layer> grads;
    backward(forward(x, nullptr), targets, &grads);
    std::vector<double> out;
    for (const auto& g : grads) {
        out.insert(out.end(), g.weight.data(), g.weight.data() + g.weight.size());
        out.insert(out.end(), g.bias.data(), g.bias.data() + g.bias.size());
    }
    return out;
}

}  // namespace wordmap
