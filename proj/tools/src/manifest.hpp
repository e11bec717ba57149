#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace wordmap::cli {

/// Hex SHA-256 of a file's bytes. Throws DataError when it cannot be read.
std::string file_sha256(const std::filesystem::path& path);

/// Key/value record written next to every output file as <file>.manifest.
/// Holds only what determines the output: no paths, hosts or timestamps.
class Manifest {
public:
    explicit Manifest(std::string subcommand);

    void param(std::string key, std::string value);
    void input(const std::string& key, const std::filesystem::path& path);

    /// Writes `<output>.manifest`.
    void write_for(const std::filesystem::path& output) const;

    std::string str() const;

private:
    std::string subcommand_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<std::pair<std::string, std::string>> inputs_;
};

}  // namespace wordmap::cli
