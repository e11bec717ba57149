#include <gtest/gtest.h>

#include "support.hpp"
#include "wordmap/discriminator.hpp"

namespace wordmap {
namespace {

struct Problem {
    Matrix x;
    Vector y;
};

Problem problem(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    Problem p{testing::gaussian(n, d, rng), Vector(static_cast<Eigen::Index>(n))};
    for (Eigen::Index i = 0; i < p.y.size(); ++i) p.y(i) = i % 2 ? 0.9 : 0.1;
    return p;
}

TEST(Discriminator, ParameterGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(1);
    auto p = problem(rng, 12, 5);
    Discriminator d(5, 7, 2, 0.0, 3);
    auto theta = d.parameters();
    auto grad = d.parameter_gradient(p.x, p.y);
    ASSERT_EQ(grad.size(), theta.size());
    const double h = 1e-6;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        auto t = theta;
        t[i] += h;
        d.set_parameters(t);
        const double up = d.loss(p.x, p.y);
        t[i] -= 2 * h;
        d.set_parameters(t);
        const double down = d.loss(p.x, p.y);
        EXPECT_NEAR(grad[i], (up - down) / (2 * h), 1e-6) << "parameter " << i;
    }
}

TEST(Discriminator, InputGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(2);
    auto p = problem(rng, 6, 4);
    Discriminator d(4, 9, 1, 0.3, 4);
    double loss = 0;
    Matrix g = d.input_gradient(p.x, p.y, &loss);
    EXPECT_DOUBLE_EQ(loss, d.loss(p.x, p.y));
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < p.x.rows(); ++i)
        for (Eigen::Index j = 0; j < p.x.cols(); ++j) {
            Matrix a = p.x, b = p.x;
            a(i, j) += h;
            b(i, j) -= h;
            EXPECT_NEAR(g(i, j), (d.loss(a, p.y) - d.loss(b, p.y)) / (2 * h), 1e-7);
        }
}

TEST(Discriminator, LearnsSeparableData) {
    std::mt19937_64 rng(3);
    Matrix x = testing::gaussian(200, 3, rng);
    Vector y(200);
    for (Eigen::Index i = 0; i < 200; ++i) y(i) = x(i, 0) > 0 ? 1.0 : 0.0;
    Discriminator d(3, 16, 2, 0.0, 5);
    const double before = d.loss(x, y);
    for (int s = 0; s < 500; ++s) d.train_step(x, y, 0.5, rng);
    EXPECT_LT(d.loss(x, y), 0.5 * before);
    const Vector z = d.logits(x);
    int correct = 0;
    for (Eigen::Index i = 0; i < 200; ++i) correct += (z(i) > 0) == (y(i) > 0.5);
    EXPECT_GE(correct, 190);
}

TEST(Discriminator, SeededInitIsDeterministicAndBounded) {
    Discriminator a(10, 4, 1, 0.1, 7), b(10, 4, 1, 0.1, 7);
    EXPECT_EQ(a.parameters(), b.parameters());
    // First layer 4x10 weights + 4 biases within 1/sqrt(10).
    auto p = a.parameters();
    for (std::size_t i = 0; i < 44; ++i) EXPECT_LE(std::abs(p[i]), 1.0 / std::sqrt(10.0));
}

}  // namespace
}  // namespace wordmap
