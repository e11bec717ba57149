// UTF-8 helpers shared by the corpus and lexicon readers.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wordmap::text {

/// Byte offset of the first malformed sequence, or nullopt for valid UTF-8.
/// Overlong forms, surrogates and code points above U+10FFFF are rejected.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

/// Lowercases ASCII and Latin-1 letters; other code points pass through.
/// Input must be valid UTF-8.
std::string lowercase(std::string_view s);

struct TokenizeOptions {
    bool lowercase = true;
    bool strip_punctuation = true;
};

/// Splits on ASCII and common unicode whitespace. With strip_punctuation,
/// apostrophes are deleted and every other punctuation mark (ASCII set,
/// unicode quotes, dashes, ellipsis) acts as a separator.
std::vector<std::string> tokenize(std::string_view s, const TokenizeOptions& opts);

/// Splits on ASCII whitespace only, no other processing.
std::vector<std::string> split_whitespace(std::string_view s);

bool has_whitespace(std::string_view s);

}  // namespace wordmap::text
