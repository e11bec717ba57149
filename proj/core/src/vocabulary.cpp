#include "wordmap/vocabulary.hpp"

#include <utility>

#include "wordmap/errors.hpp"

namespace wordmap {

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts,
                       std::uint64_t min_count)
    : words_(std::move(words)), counts_(std::move(counts)), min_count_(min_count) {
    if (counts_.empty()) counts_.assign(words_.size(), 0);
    if (counts_.size() != words_.size())
        throw ArgumentError("vocabulary: counts length does not match word count");
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (counts_[i] < min_count_)
            throw ArgumentError("vocabulary: count of '" + words_[i] + "' is below min_count");
        if (!index_.emplace(words_[i], i).second)
            throw ArgumentError("vocabulary: duplicate word '" + words_[i] + "'");
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Vocabulary::at(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) throw LookupError("unknown word '" + std::string(word) + "'");
    return it->second;
}

}  // namespace wordmap
