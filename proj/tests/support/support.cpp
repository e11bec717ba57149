#include "support.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "wordmap/diagnostics.hpp"

namespace wordmap::testing {

Matrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

Eigen::MatrixXd random_orthogonal(std::size_t d, std::mt19937_64& rng) {
    Eigen::MatrixXd g = gaussian(d, d, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

Matrix unit_rows(Matrix m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i).normalize();
    return m;
}

std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

EmbeddingMatrix make_embedding(const std::string& prefix, Matrix vectors) {
    const auto n = static_cast<std::size_t>(vectors.rows());
    return EmbeddingMatrix(Vocabulary(names(prefix, n)), std::move(vectors));
}

BilingualLexicon index_lexicon(const std::vector<std::size_t>& idx, const std::string& src_prefix,
                               const std::string& tgt_prefix) {
    BilingualLexicon lex;
    for (auto i : idx) lex.add(src_prefix + std::to_string(i), tgt_prefix + std::to_string(i));
    return lex;
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("wordmap-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
}

WarningCapture::WarningCapture() {
    set_warning_handler([this](std::string_view m) { messages_.emplace_back(m); });
}

WarningCapture::~WarningCapture() { set_warning_handler(nullptr); }

}  // namespace wordmap::testing
