#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wordmap/embedding.hpp"
#include "wordmap/lexicon.hpp"

namespace wordmap::testing {

/// Haar-random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Eigen::MatrixXd random_orthogonal(std::size_t d, std::mt19937_64& rng);

Matrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

Matrix unit_rows(Matrix m);

/// Words "<prefix>0" .. "<prefix>{n-1}".
std::vector<std::string> names(const std::string& prefix, std::size_t n);

EmbeddingMatrix make_embedding(const std::string& prefix, Matrix vectors);

/// (src_i, tgt_i) for the given indices.
BilingualLexicon index_lexicon(const std::vector<std::size_t>& idx, const std::string& src_prefix = "s",
                               const std::string& tgt_prefix = "t");

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& content);

/// Collects warn() messages while alive.
class WarningCapture {
public:
    WarningCapture();
    ~WarningCapture();
    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
};

}  // namespace wordmap::testing
