#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wordmap/vocabulary.hpp"

namespace wordmap {

/// Row-major dense matrix; row i of an embedding is the vector of word i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// N x d word vectors bound to a vocabulary of size N.
///
/// The vocabulary is shared between copies and mapped versions of the same
/// embedding, so applying a linear map does not copy the word list.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;

    /// Throws ArgumentError when rows != vocab size, dim < 1, or an entry is
    /// not finite.
    EmbeddingMatrix(std::shared_ptr<const Vocabulary> vocab, Matrix vectors);
    EmbeddingMatrix(Vocabulary vocab, Matrix vectors);

    const Vocabulary& vocab() const { return *vocab_; }
    const std::shared_ptr<const Vocabulary>& shared_vocab() const { return vocab_; }
    const Matrix& vectors() const noexcept { return vectors_; }

    std::size_t size() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }

    auto row(std::size_t i) const { return vectors_.row(static_cast<Eigen::Index>(i)); }
    /// Throws LookupError for unknown words.
    auto row(std::string_view word) const {
        return vectors_.row(static_cast<Eigen::Index>(vocab_->at(word)));
    }

    /// Same vocabulary, new vectors (same row count required).
    EmbeddingMatrix with_vectors(Matrix vectors) const;

private:
    std::shared_ptr<const Vocabulary> vocab_ = std::make_shared<Vocabulary>();
    Matrix vectors_ = Matrix(0, 1);
};

struct EmbeddingReadInfo {
    bool had_header = false;
    std::size_t duplicates_skipped = 0;
};

/// Parses "word v1 ... vd" lines with an optional leading "N d" header.
/// The dimension comes from the header when present, else from the first
/// vector line. Duplicate words keep their first row. Throws FormatError
/// naming the line on a dimension mismatch or an unparsable component.
EmbeddingMatrix read_embedding(std::istream& in, EmbeddingReadInfo* info = nullptr);

/// Writes the "N d" header and one line per word in vocabulary order, with
/// numbers in shortest round-trip form. Throws EncodingError for words that
/// are empty or contain whitespace.
void write_embedding(std::ostream& out, const EmbeddingMatrix& emb);

struct WarmStart {
    EmbeddingMatrix embedding;
    /// 1 where the row was copied from the pretrained embedding.
    std::vector<std::uint8_t> copied;
    double coverage = 0.0;
};

/// Rows for words known to `pretrained` are copied bit-for-bit; the others
/// get i.i.d. uniform entries in [-0.5/dim, 0.5/dim] from a generator seeded
/// with `seed`. Throws ArgumentError when pretrained.dim() != dim.
WarmStart init_from_pretrained(const EmbeddingMatrix& pretrained, const Vocabulary& target_vocab,
                               std::size_t dim, std::uint64_t seed);

enum class NormScheme { none, unit, center_unit };

/// Accepts "none", "unit", "center_unit" (also "center"); throws ArgumentError.
NormScheme parse_norm_scheme(std::string_view name);
std::string_view to_string(NormScheme scheme);

/// Zero rows stay zero; their count is reported through warn() and
/// `zero_rows` when given.
EmbeddingMatrix normalize(const EmbeddingMatrix& emb, NormScheme scheme,
                          std::size_t* zero_rows = nullptr);

/// True when every non-zero row has Euclidean norm within tol of 1.
bool is_unit_normalized(const EmbeddingMatrix& emb, double tol = 1e-6);

}  // namespace wordmap
