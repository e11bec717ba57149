#include "wordmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "wordmap/errors.hpp"

namespace wordmap {

CloudShape parse_cloud_shape(std::string_view name) {
    if (name == "isotropic") return CloudShape::isotropic;
    if (name == "anisotropic") return CloudShape::anisotropic;
    throw ArgumentError("unknown cloud shape '" + std::string(name) + "'");
}

std::string_view to_string(CloudShape shape) {
    return shape == CloudShape::isotropic ? "isotropic" : "anisotropic";
}

namespace {

Matrix unit_rows(Matrix m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double n = m.row(i).norm();
        if (n > 0) m.row(i) /= n;
    }
    return m;
}

Vocabulary names(char prefix, std::size_t n) {
    std::vector<std::string> words;
    words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) words.push_back(prefix + std::to_string(i));
    return Vocabulary(std::move(words));
}

}  // namespace

SynthInstance generate(std::size_t n, std::size_t d, double noise_sigma, std::uint64_t seed,
                       CloudShape shape) {
    if (d < 1) throw ArgumentError("generate: d must be >= 1");
    if (n < d) throw ArgumentError("generate: n (" + std::to_string(n) + ") must be >= d (" +
                                   std::to_string(d) + ")");
    if (!(noise_sigma >= 0)) throw ArgumentError("generate: noise_sigma must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto rows = static_cast<Eigen::Index>(n);
    const auto dim = static_cast<Eigen::Index>(d);

    Matrix x(rows, dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    if (shape == CloudShape::anisotropic) {
        // Per-axis scale decays from 1 to 0.1; the mean is one scale unit
        // per axis with a random sign pattern and magnitude.
        Eigen::RowVectorXd scale(dim), mean(dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            scale(j) = dim > 1 ? std::pow(0.1, static_cast<double>(j) / static_cast<double>(dim - 1)) : 1.0;
            mean(j) = scale(j) * normal(rng);
        }
        for (Eigen::Index i = 0; i < rows; ++i)
            x.row(i) = x.row(i).cwiseProduct(scale) + mean;
    }
    x = unit_rows(std::move(x));

    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // Column signs from R's diagonal make Q Haar-distributed.
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;

    Matrix y = x * q.transpose();
    if (noise_sigma > 0) {
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] += noise(rng);
    }
    y = unit_rows(std::move(y));

    SynthInstance inst;
    inst.src = EmbeddingMatrix(names('s', n), std::move(x));
    inst.tgt = EmbeddingMatrix(names('t', n), std::move(y));
    inst.truth = LinearMap{std::move(q), true};
    for (std::size_t i = 0; i < n; ++i)
        inst.lexicon.add("s" + std::to_string(i), "t" + std::to_string(i));
    inst.noise_sigma = noise_sigma;
    return inst;
}

HoldoutSplit holdout_split(const BilingualLexicon& lex, std::size_t n_train, std::size_t n_test,
                           std::uint64_t seed) {
    if (n_train + n_test > lex.size())
        throw ArgumentError("holdout_split: " + std::to_string(n_train + n_test) +
                            " pairs requested from " + std::to_string(lex.size()));
    std::vector<std::size_t> order(lex.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    HoldoutSplit out;
    for (std::size_t i = 0; i < n_train + n_test; ++i) {
        const auto& p = lex.pairs()[order[i]];
        (i < n_train ? out.train : out.test).add(p.src, p.tgt);
    }
    return out;
}

void write_instance(const std::filesystem::path& dir, const SynthInstance& inst) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw EncodingError("cannot open " + (dir / name).string() + " for writing");
        return f;
    };
    {
        auto f = open("src.vec");
        write_embedding(f, inst.src);
    }
    {
        auto f = open("tgt.vec");
        write_embedding(f, inst.tgt);
    }
    {
        auto f = open("lexicon.txt");
        write_lexicon(f, inst.lexicon);
    }
    {
        auto f = open("truth.map");
        write_linear_map(f, inst.truth);
    }
}

}  // namespace wordmap
