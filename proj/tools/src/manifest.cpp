#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "wordmap/errors.hpp"

namespace wordmap::cli {

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw DataError("sha256: digest initialisation failed");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) throw DataError("error reading " + path.string());

    std::array<unsigned char, EVP_MAX_MD_SIZE> md;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 0xf];
    }
    return s;
}

Manifest::Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

void Manifest::param(std::string key, std::string value) {
    params_.emplace_back(std::move(key), std::move(value));
}

void Manifest::input(const std::string& key, const std::filesystem::path& path) {
    inputs_.emplace_back(key, file_sha256(path));
}

std::string Manifest::str() const {
    std::string s = "subcommand\t" + subcommand_ + "\ntool_version\t" WORDMAP_VERSION "\n";
    for (const auto& [k, v] : params_) s += "param." + k + '\t' + v + '\n';
    for (const auto& [k, v] : inputs_) s += "input." + k + ".sha256\t" + v + '\n';
    return s;
}

void Manifest::write_for(const std::filesystem::path& output) const {
    auto path = output;
    path += ".manifest";
    std::ofstream f(path, std::ios::binary);
    f << str();
    if (!f) throw EncodingError("cannot write " + path.string());
}

}  // namespace wordmap::cli
