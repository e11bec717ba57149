#include "wordmap/lexicon.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "text.hpp"
#include "wordmap/errors.hpp"

namespace wordmap {

BilingualLexicon::BilingualLexicon(const std::vector<WordPair>& pairs) {
    for (const auto& p : pairs) add(p.src, p.tgt);
}

bool BilingualLexicon::add(std::string src, std::string tgt) {
    WordPair p{std::move(src), std::move(tgt)};
    if (!index_.insert(p).second) return false;
    pairs_.push_back(std::move(p));
    return true;
}

std::vector<std::string> BilingualLexicon::source_words() const {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& p : pairs_)
        if (seen.insert(p.src).second) out.push_back(p.src);
    return out;
}

std::vector<std::string> BilingualLexicon::target_words() const {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& p : pairs_)
        if (seen.insert(p.tgt).second) out.push_back(p.tgt);
    return out;
}

BilingualLexicon load_lexicon(std::istream& in) {
    BilingualLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto bad = text::find_invalid_utf8(line))
            throw ParseError("invalid UTF-8 at byte " + std::to_string(*bad), line_no);

        std::vector<std::string> fields;
        if (line.find('\t') != std::string::npos) {
            std::size_t start = 0;
            while (true) {
                auto tab = line.find('\t', start);
                auto field = text::split_whitespace(line.substr(start, tab - start));
                if (field.size() != 1) {
                    throw ParseError("expected 2 tab-separated words, got a field with " +
                                         std::to_string(field.size()) + " words",
                                     line_no);
                }
                fields.push_back(std::move(field.front()));
                if (tab == std::string::npos) break;
                start = tab + 1;
            }
        } else {
            fields = text::split_whitespace(line);
            if (fields.empty()) continue;
        }
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), line_no);
        lex.add(text::lowercase(fields[0]), text::lowercase(fields[1]));
    }
    return lex;
}

void write_lexicon(std::ostream& out, const BilingualLexicon& lex) {
    for (const auto& p : lex.pairs()) out << p.src << '\t' << p.tgt << '\n';
}

FilteredLexicon filter_lexicon(const BilingualLexicon& lex, const Vocabulary& src_vocab,
                               const Vocabulary& tgt_vocab) {
    FilteredLexicon out;
    for (const auto& p : lex.pairs()) {
        if (src_vocab.contains(p.src) && tgt_vocab.contains(p.tgt))
            out.lexicon.add(p.src, p.tgt);
        else
            ++out.dropped;
    }
    return out;
}

LexiconSplit split_lexicon(const BilingualLexicon& lex, std::size_t n_val, std::uint64_t seed) {
    if (n_val == 0 || n_val >= lex.size())
        throw ArgumentError("split_lexicon: n_val must be in [1, " +
                            std::to_string(lex.size() ? lex.size() - 1 : 0) + "], got " +
                            std::to_string(n_val));

    const auto sources = lex.source_words();
    std::unordered_map<std::string_view, std::size_t> group_size;
    for (const auto& p : lex.pairs()) ++group_size[p.src];

    std::vector<std::size_t> order(sources.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::unordered_set<std::string_view> val_sources;
    std::size_t taken = 0;
    for (std::size_t g : order) {
        if (taken == n_val) break;
        const std::size_t n = group_size[sources[g]];
        if (taken + n > n_val) continue;
        val_sources.insert(sources[g]);
        taken += n;
    }
    if (val_sources.empty()) {
        // Every group is larger than n_val: take the first group that still
        // leaves a non-empty train side.
        for (std::size_t g : order) {
            if (group_size[sources[g]] < lex.size()) {
                val_sources.insert(sources[g]);
                break;
            }
        }
        if (val_sources.empty())
            throw ArgumentError("split_lexicon: all pairs share one source word");
    }

    LexiconSplit split;
    for (const auto& p : lex.pairs())
        (val_sources.contains(p.src) ? split.val : split.train).add(p.src, p.tgt);
    return split;
}

}  // namespace wordmap
