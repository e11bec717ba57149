#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordmap {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

/// Ordered word <-> index map with per-word occurrence counts.
///
/// Index i refers to words()[i]. Vocabularies read from embedding files carry
/// zero counts and a zero threshold; file order is taken as frequency order.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Throws ArgumentError on duplicate words, on a counts vector whose
    /// length differs from words (an empty counts vector means all zero), or
    /// on a count below min_count.
    explicit Vocabulary(std::vector<std::string> words,
                        std::vector<std::uint64_t> counts = {},
                        std::uint64_t min_count = 0);

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

    const std::string& word(std::size_t index) const { return words_.at(index); }
    std::uint64_t count(std::size_t index) const { return counts_.at(index); }
    std::uint64_t min_count() const noexcept { return min_count_; }

    const std::vector<std::string>& words() const noexcept { return words_; }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

    std::optional<std::size_t> index_of(std::string_view word) const;
    bool contains(std::string_view word) const { return index_of(word).has_value(); }

    /// Like index_of but throws LookupError for unknown words.
    std::size_t at(std::string_view word) const;

    bool operator==(const Vocabulary& other) const {
        return words_ == other.words_ && counts_ == other.counts_;
    }

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t min_count_ = 0;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

}  // namespace wordmap
