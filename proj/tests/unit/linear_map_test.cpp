#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "wordmap/errors.hpp"
#include "wordmap/linear_map.hpp"

namespace wordmap {
namespace {

Eigen::MatrixXd rot90() { return (Eigen::MatrixXd(2, 2) << 0, -1, 1, 0).finished(); }

TEST(ApplyMap, IdentityAndRotation) {
    auto e = testing::make_embedding("w", (Matrix(2, 2) << 1, 0, 0.5, 2).finished());
    EXPECT_EQ(apply_map(LinearMap::identity(2), e).vectors(), e.vectors());
    auto r = apply_map({rot90(), true}, e);
    EXPECT_EQ(r.row(0), (Eigen::RowVector2d(0, 1)));
    EXPECT_EQ(&r.vocab(), &e.vocab());
    EXPECT_THROW(apply_map(LinearMap::identity(3), e), ArgumentError);
}

TEST(ApplyMap, OrthogonalIsInvertedByTranspose) {
    std::mt19937_64 rng(4);
    auto e = testing::make_embedding("w", testing::gaussian(40, 9, rng));
    Eigen::MatrixXd q = testing::random_orthogonal(9, rng);
    auto back = apply_map({q.transpose(), true}, apply_map({q, true}, e));
    EXPECT_LE((back.vectors() - e.vectors()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(LinearMapIo, RoundTripIsExact) {
    std::mt19937_64 rng(5);
    LinearMap m{testing::random_orthogonal(6, rng), true};
    std::stringstream buf;
    write_linear_map(buf, m);
    auto back = read_linear_map(buf);
    EXPECT_EQ(back.matrix, m.matrix);
    EXPECT_TRUE(back.orthogonal);

    std::stringstream s2("2\n1 2\n3 4\n");
    EXPECT_FALSE(read_linear_map(s2).orthogonal);
}

TEST(LinearMapIo, MalformedNamesLine) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_linear_map(in);
        } catch (const FormatError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("2\n1 0\n0\n"), 3u);
    EXPECT_EQ(line_of("x\n"), 1u);
    EXPECT_EQ(line_of("2\n1 0\n"), 3u);
    EXPECT_EQ(line_of("2\n1 0\n0 y\n"), 3u);
}

TEST(OrthogonalizeStep, FixesOrthogonalMatrices) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd q = testing::random_orthogonal(20, rng);
        Eigen::MatrixXd w = q;
        orthogonalize_step(w, 0.01);
        EXPECT_LE((w - q).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(OrthogonalizeStep, ContractsTowardsOrthogonality) {
    std::mt19937_64 rng(7);
    Eigen::MatrixXd w = testing::random_orthogonal(10, rng) + 0.05 * Eigen::MatrixXd(testing::gaussian(10, 10, rng));
    const double before = LinearMap{w, false}.orthogonality_error();
    for (int i = 0; i < 200; ++i) orthogonalize_step(w, 0.1);
    EXPECT_LT((LinearMap{w, false}.orthogonality_error()), before * 1e-3);
}

TEST(NearestOrthogonal, IsOrthogonalAndClosest) {
    std::mt19937_64 rng(8);
    Eigen::MatrixXd m = testing::gaussian(8, 8, rng);
    Eigen::MatrixXd w = nearest_orthogonal(m);
    EXPECT_LE((LinearMap{w, true}.orthogonality_error()), 1e-12);
    for (int t = 0; t < 100; ++t)
        EXPECT_LE((w - m).norm(), (testing::random_orthogonal(8, rng) - m).norm() + 1e-12);
}

TEST(SpectralBall, ClipsSingularValues) {
    std::mt19937_64 rng(9);
    Eigen::MatrixXd m = 3.0 * Eigen::MatrixXd(testing::gaussian(6, 6, rng));
    Eigen::MatrixXd p = project_spectral_ball(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
    EXPECT_LE(svd.singularValues()(0), 1.0 + 1e-12);
    Eigen::MatrixXd small = 0.01 * m;
    EXPECT_LE((project_spectral_ball(small) - small).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace wordmap
