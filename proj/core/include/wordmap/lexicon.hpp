#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wordmap/vocabulary.hpp"

namespace wordmap {

struct WordPair {
    std::string src;
    std::string tgt;

    auto operator<=>(const WordPair&) const = default;
};

/// Ordered list of translation pairs without exact duplicates. A source word
/// may appear with several targets.
class BilingualLexicon {
public:
    BilingualLexicon() = default;
    explicit BilingualLexicon(const std::vector<WordPair>& pairs);

    /// Returns false (and keeps the lexicon unchanged) for an exact duplicate.
    bool add(std::string src, std::string tgt);

    const std::vector<WordPair>& pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    bool contains(const WordPair& p) const { return index_.contains(p); }

    /// Distinct source words in order of first appearance.
    std::vector<std::string> source_words() const;
    /// Distinct target words in order of first appearance.
    std::vector<std::string> target_words() const;

    bool operator==(const BilingualLexicon& other) const { return pairs_ == other.pairs_; }

private:
    std::vector<WordPair> pairs_;
    std::set<WordPair> index_;
};

/// One "src<TAB>tgt" pair per line; a single run of spaces separates the two
/// fields when the line has no tab. Pairs are lowercased. Blank lines are
/// skipped. Throws ParseError naming the line for any other field count.
BilingualLexicon load_lexicon(std::istream& in);
void write_lexicon(std::ostream& out, const BilingualLexicon& lex);

struct FilteredLexicon {
    BilingualLexicon lexicon;
    std::size_t dropped = 0;
};

/// Keeps pairs whose source is in src_vocab and target is in tgt_vocab.
FilteredLexicon filter_lexicon(const BilingualLexicon& lex, const Vocabulary& src_vocab,
                               const Vocabulary& tgt_vocab);

struct LexiconSplit {
    BilingualLexicon train;
    BilingualLexicon val;
};

/// Seeded split that keeps all pairs of a source word on one side. Source
/// groups are shuffled and taken into val while they fit within n_val, so
/// val holds exactly n_val pairs when every source word is unique. Both
/// sides keep the input order. Throws ArgumentError unless
/// 0 < n_val < lex.size().
LexiconSplit split_lexicon(const BilingualLexicon& lex, std::size_t n_val, std::uint64_t seed);

}  // namespace wordmap
