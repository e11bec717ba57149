#include "wordmap/embedding.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

#include "number_format.hpp"
#include "text.hpp"
#include "wordmap/diagnostics.hpp"
#include "wordmap/errors.hpp"

namespace wordmap {

EmbeddingMatrix::EmbeddingMatrix(std::shared_ptr<const Vocabulary> vocab, Matrix vectors)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)) {
    if (!vocab_) throw ArgumentError("embedding: null vocabulary");
    if (vectors_.cols() < 1) throw ArgumentError("embedding: dimension must be >= 1");
    if (static_cast<std::size_t>(vectors_.rows()) != vocab_->size())
        throw ArgumentError("embedding: " + std::to_string(vectors_.rows()) + " rows for " +
                            std::to_string(vocab_->size()) + " words");
    if (!vectors_.allFinite()) throw ArgumentError("embedding: non-finite entry");
}

EmbeddingMatrix::EmbeddingMatrix(Vocabulary vocab, Matrix vectors)
    : EmbeddingMatrix(std::make_shared<const Vocabulary>(std::move(vocab)), std::move(vectors)) {}

EmbeddingMatrix EmbeddingMatrix::with_vectors(Matrix vectors) const {
    return EmbeddingMatrix(vocab_, std::move(vectors));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

EmbeddingMatrix read_embedding(std::istream& in, EmbeddingReadInfo* info) {
    EmbeddingReadInfo local;
    std::vector<std::string> words;
    std::vector<double> values;
    std::unordered_set<std::string> seen;
    std::size_t dim = 0;
    std::size_t declared_rows = 0;
    bool first = true;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_fields(line);
        if (fields.empty()) continue;

        if (first) {
            first = false;
            if (fields.size() == 2) {
                auto n = detail::parse_integer<std::size_t>(fields[0]);
                auto d = detail::parse_integer<std::size_t>(fields[1]);
                if (n && d) {
                    if (*d == 0) throw FormatError("header declares dimension 0", line_no);
                    local.had_header = true;
                    declared_rows = *n;
                    dim = *d;
                    continue;
                }
            }
        }

        const std::size_t row_dim = fields.size() - 1;
        if (row_dim == 0) throw FormatError("word without vector components", line_no);
        if (dim == 0) dim = row_dim;
        if (row_dim != dim)
            throw FormatError("expected " + std::to_string(dim) + " components, got " +
                                  std::to_string(row_dim),
                              line_no);

        std::string word(fields[0]);
        if (!seen.insert(word).second) {
            ++local.duplicates_skipped;
            continue;
        }
        for (std::size_t k = 1; k < fields.size(); ++k) {
            auto v = detail::parse_double(fields[k]);
            if (!v || !std::isfinite(*v))
                throw FormatError("bad vector component '" + std::string(fields[k]) + "'", line_no);
            values.push_back(*v);
        }
        words.push_back(std::move(word));
    }

    if (local.duplicates_skipped)
        warn("embedding: skipped " + std::to_string(local.duplicates_skipped) + " duplicate words");
    if (local.had_header && declared_rows != words.size() + local.duplicates_skipped)
        warn("embedding: header declares " + std::to_string(declared_rows) + " rows, read " +
             std::to_string(words.size()));
    if (dim == 0) dim = 1;

    Matrix m = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(words.size()),
                                        static_cast<Eigen::Index>(dim));
    if (info) *info = local;
    return EmbeddingMatrix(Vocabulary(std::move(words)), std::move(m));
}

void write_embedding(std::ostream& out, const EmbeddingMatrix& emb) {
    std::string buf;
    buf += std::to_string(emb.size());
    buf += ' ';
    buf += std::to_string(emb.dim());
    buf += '\n';
    out << buf;
    const auto& m = emb.vectors();
    for (std::size_t i = 0; i < emb.size(); ++i) {
        const auto& word = emb.vocab().word(i);
        if (word.empty() || text::has_whitespace(word))
            throw EncodingError("embedding: word '" + word + "' is empty or contains whitespace");
        buf.clear();
        buf += word;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            buf += ' ';
            detail::append_double(buf, m(static_cast<Eigen::Index>(i), j));
        }
        buf += '\n';
        out << buf;
    }
    if (!out) throw EncodingError("embedding: write failed");
}

WarmStart init_from_pretrained(const EmbeddingMatrix& pretrained, const Vocabulary& target_vocab,
                               std::size_t dim, std::uint64_t seed) {
    if (pretrained.dim() != dim)
        throw ArgumentError("init_from_pretrained: pretrained dimension " +
                            std::to_string(pretrained.dim()) + " != " + std::to_string(dim));
    std::mt19937_64 rng(seed);
    const double bound = 0.5 / static_cast<double>(dim);
    std::uniform_real_distribution<double> uniform(-bound, bound);

    Matrix m(static_cast<Eigen::Index>(target_vocab.size()), static_cast<Eigen::Index>(dim));
    std::vector<std::uint8_t> copied(target_vocab.size(), 0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < target_vocab.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (auto src = pretrained.vocab().index_of(target_vocab.word(i))) {
            m.row(r) = pretrained.row(*src);
            copied[i] = 1;
            ++hits;
        } else {
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(r, j) = uniform(rng);
        }
    }
    WarmStart out;
    out.embedding = EmbeddingMatrix(target_vocab, std::move(m));
    out.copied = std::move(copied);
    out.coverage = target_vocab.empty()
                       ? 0.0
                       : static_cast<double>(hits) / static_cast<double>(target_vocab.size());
    return out;
}

NormScheme parse_norm_scheme(std::string_view name) {
    if (name == "none") return NormScheme::none;
    if (name == "unit") return NormScheme::unit;
    if (name == "center_unit" || name == "center") return NormScheme::center_unit;
    throw ArgumentError("unknown normalization scheme '" + std::string(name) + "'");
}

std::string_view to_string(NormScheme scheme) {
    switch (scheme) {
        case NormScheme::none: return "none";
        case NormScheme::unit: return "unit";
        case NormScheme::center_unit: return "center_unit";
    }
    return "none";
}

EmbeddingMatrix normalize(const EmbeddingMatrix& emb, NormScheme scheme, std::size_t* zero_rows) {
    if (zero_rows) *zero_rows = 0;
    if (scheme == NormScheme::none) return emb;

    Matrix m = emb.vectors();
    if (scheme == NormScheme::center_unit && m.rows() > 0) {
        Eigen::RowVectorXd mean = m.colwise().mean();
        m.rowwise() -= mean;
    }
    std::size_t zeros = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double n = m.row(i).norm();
        if (n > 0)
            m.row(i) /= n;
        else
            ++zeros;
    }
    if (zeros) warn("normalize: " + std::to_string(zeros) + " zero rows left unscaled");
    if (zero_rows) *zero_rows = zeros;
    return emb.with_vectors(std::move(m));
}

bool is_unit_normalized(const EmbeddingMatrix& emb, double tol) {
    const auto& m = emb.vectors();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double n = m.row(i).norm();
        if (n != 0 && std::abs(n - 1.0) > tol) return false;
    }
    return true;
}

}  // namespace wordmap
