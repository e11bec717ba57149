#include "text.hpp"

#include <cstdint>

namespace wordmap::text {
namespace {

struct Decoded {
    char32_t cp;
    std::size_t len;  // 0 on malformed input
};

Decoded decode(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};

    std::size_t len;
    char32_t cp;
    char32_t min;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
        return {0, 0};
    }
    if (pos + len > s.size()) return {0, 0};
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return {0, 0};
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {0, 0};
    return {cp, len};
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
        case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000: case 0xFEFF:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200B;
    }
}

bool is_apostrophe(char32_t cp) {
    return cp == U'\'' || cp == 0x2018 || cp == 0x2019 || cp == 0x02BC;
}

bool is_punctuation(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
        case 0x00A1: case 0x00AB: case 0x00BB: case 0x00BF:
        case 0x201A: case 0x201B: case 0x201C: case 0x201D: case 0x201E: case 0x201F:
        case 0x2039: case 0x203A: case 0x2026:
            return true;
        default:
            return cp >= 0x2010 && cp <= 0x2015;
    }
}

}  // namespace

std::optional<std::size_t> find_invalid_utf8(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto d = decode(s, pos);
        if (d.len == 0) return pos;
        pos += d.len;
    }
    return std::nullopt;
}

std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto d = decode(s, pos);
        if (d.len == 0) {
            out.push_back(s[pos++]);
            continue;
        }
        encode(to_lower(d.cp), out);
        pos += d.len;
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view s, const TokenizeOptions& opts) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto d = decode(s, pos);
        if (d.len == 0) {
            current.push_back(s[pos++]);
            continue;
        }
        pos += d.len;
        char32_t cp = d.cp;
        if (is_space(cp)) {
            flush();
            continue;
        }
        if (opts.strip_punctuation) {
            if (is_apostrophe(cp)) continue;
            if (is_punctuation(cp)) {
                flush();
                continue;
            }
        }
        encode(opts.lowercase ? to_lower(cp) : cp, current);
    }
    flush();
    return tokens;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; };
    while (i < s.size()) {
        while (i < s.size() && ws(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !ws(s[j])) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool has_whitespace(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto d = decode(s, pos);
        if (d.len == 0) {
            ++pos;
            continue;
        }
        if (is_space(d.cp)) return true;
        pos += d.len;
    }
    return false;
}

}  // namespace wordmap::text
