#include "wordmap/linear_map.hpp"

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "number_format.hpp"
#include "text.hpp"
#include "wordmap/errors.hpp"

namespace wordmap {

LinearMap LinearMap::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return {Eigen::MatrixXd::Identity(n, n), true};
}

double LinearMap::orthogonality_error() const {
    if (matrix.size() == 0) return 0.0;
    const auto n = matrix.cols();
    return (matrix.transpose() * matrix - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

void write_linear_map(std::ostream& out, const LinearMap& map) {
    std::string buf = std::to_string(map.dim()) + '\n';
    for (Eigen::Index i = 0; i < map.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < map.matrix.cols(); ++j) {
            if (j) buf += ' ';
            detail::append_double(buf, map.matrix(i, j));
        }
        buf += '\n';
    }
    out << buf;
    if (!out) throw EncodingError("linear map: write failed");
}

LinearMap read_linear_map(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!text::split_whitespace(line).empty()) return true;
        }
        return false;
    };
    if (!next()) throw FormatError("linear map: missing dimension line", line_no + 1);
    auto head = text::split_whitespace(line);
    std::optional<std::size_t> d;
    if (head.size() == 1) d = detail::parse_integer<std::size_t>(head[0]);
    if (!d || *d == 0) throw FormatError("linear map: expected a positive dimension", line_no);

    const auto n = static_cast<Eigen::Index>(*d);
    LinearMap map{Eigen::MatrixXd(n, n), false};
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!next()) throw FormatError("linear map: missing row " + std::to_string(i + 1), line_no + 1);
        auto fields = text::split_whitespace(line);
        if (static_cast<Eigen::Index>(fields.size()) != n)
            throw FormatError("linear map: expected " + std::to_string(n) + " values", line_no);
        for (Eigen::Index j = 0; j < n; ++j) {
            auto v = detail::parse_double(fields[static_cast<std::size_t>(j)]);
            if (!v || !std::isfinite(*v)) throw FormatError("linear map: bad value", line_no);
            map.matrix(i, j) = *v;
        }
    }
    map.orthogonal = map.orthogonality_error() <= LinearMap::kOrthogonalityTolerance;
    return map;
}

EmbeddingMatrix apply_map(const LinearMap& map, const EmbeddingMatrix& emb) {
    if (map.dim() != emb.dim())
        throw ArgumentError("apply_map: map dimension " + std::to_string(map.dim()) +
                            " != embedding dimension " + std::to_string(emb.dim()));
    Matrix mapped = emb.vectors() * map.matrix.transpose();
    return emb.with_vectors(std::move(mapped));
}

Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& m) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

Eigen::MatrixXd project_spectral_ball(const Eigen::MatrixXd& m) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

void orthogonalize_step(Eigen::MatrixXd& w, double beta) {
    Eigen::MatrixXd wwt_w = (w * w.transpose()) * w;
    w = (1.0 + beta) * w - beta * wwt_w;
}

}  // namespace wordmap
