#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>

#include "wordmap/embedding.hpp"

namespace wordmap {

/// Square map from source space into target space: a source row x becomes
/// W x. When `orthogonal` is set, max |W^T W - I| <= kOrthogonalityTolerance.
struct LinearMap {
    static constexpr double kOrthogonalityTolerance = 1e-6;

    Eigen::MatrixXd matrix;
    bool orthogonal = false;

    static LinearMap identity(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix.rows()); }

    /// max |W^T W - I| over all entries.
    double orthogonality_error() const;

    /// True when the flag is unset or the matrix meets the tolerance.
    bool flag_valid() const { return !orthogonal || orthogonality_error() <= kOrthogonalityTolerance; }
};

/// "d" on the first line, then d rows of d numbers in shortest round-trip
/// form. Reading sets the orthogonal flag when the matrix meets the
/// tolerance. read throws FormatError naming the line.
void write_linear_map(std::ostream& out, const LinearMap& map);
LinearMap read_linear_map(std::istream& in);

/// Each row x becomes W x; vocabulary is shared. Throws ArgumentError on a
/// dimension mismatch.
EmbeddingMatrix apply_map(const LinearMap& map, const EmbeddingMatrix& emb);

/// U V^T from the SVD U S V^T of `m`: the closest orthogonal matrix in
/// Frobenius norm.
Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& m);

/// Singular values clipped to at most 1.
Eigen::MatrixXd project_spectral_ball(const Eigen::MatrixXd& m);

/// One step of W <- (1 + beta) W - beta (W W^T) W, which pulls W towards
/// the orthogonal manifold and leaves orthogonal matrices fixed.
void orthogonalize_step(Eigen::MatrixXd& w, double beta);

}  // namespace wordmap
