#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "wordmap/errors.hpp"
#include "wordmap/lexicon.hpp"

namespace wordmap {
namespace {

BilingualLexicon parse(const std::string& text) {
    std::istringstream in(text);
    return load_lexicon(in);
}

TEST(LoadLexicon, TabSeparated) {
    auto lex = parse("wahala\ttrouble\n");
    ASSERT_EQ(lex.size(), 1u);
    EXPECT_EQ(lex.pairs()[0], (WordPair{"wahala", "trouble"}));
}

TEST(LoadLexicon, DuplicateLineCollapses) {
    EXPECT_EQ(parse("a\tb\na\tb\n").size(), 1u);
}

TEST(LoadLexicon, MalformedLineNamesLine) {
    try {
        parse("one two three\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        parse("a\tb\n\nlonely\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(LoadLexicon, SpacesLowercaseAndCarriageReturns) {
    auto lex = parse("Pikin  Child\r\n\nabeg\tplease\r\n");
    EXPECT_EQ(lex.pairs(), (std::vector<WordPair>{{"pikin", "child"}, {"abeg", "please"}}));
}

TEST(LoadLexicon, WriteRoundTrip) {
    auto lex = parse("a\tx\na\ty\nb\tx\n");
    std::ostringstream out;
    write_lexicon(out, lex);
    EXPECT_EQ(out.str(), "a\tx\na\ty\nb\tx\n");
    EXPECT_EQ(parse(out.str()), lex);
    EXPECT_EQ(lex.source_words(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(lex.target_words(), (std::vector<std::string>{"x", "y"}));
}

TEST(FilterLexicon, Examples) {
    BilingualLexicon lex({{"a", "x"}, {"b", "y"}});
    auto f = filter_lexicon(lex, Vocabulary({"a"}), Vocabulary({"x", "y"}));
    EXPECT_EQ(f.lexicon.pairs(), (std::vector<WordPair>{{"a", "x"}}));
    EXPECT_EQ(f.dropped, 1u);
    EXPECT_TRUE(filter_lexicon({}, Vocabulary({"a"}), Vocabulary({"x"})).lexicon.empty());
    EXPECT_EQ(filter_lexicon(lex, Vocabulary({"a", "b"}), Vocabulary({"x", "y"})).lexicon, lex);
}

BilingualLexicon unique_sources(std::size_t n) {
    BilingualLexicon lex;
    for (std::size_t i = 0; i < n; ++i) lex.add("p" + std::to_string(i), "e" + std::to_string(i));
    return lex;
}

TEST(SplitLexicon, SizesWithUniqueSources) {
    auto split = split_lexicon(unique_sources(1097), 108, 1);
    EXPECT_EQ(split.train.size(), 989u);
    EXPECT_EQ(split.val.size(), 108u);
}

TEST(SplitLexicon, RejectsDegenerateSizes) {
    auto lex = unique_sources(10);
    EXPECT_THROW(split_lexicon(lex, 10, 1), ArgumentError);
    EXPECT_THROW(split_lexicon(lex, 0, 1), ArgumentError);
}

TEST(SplitLexicon, DeterministicPerSeed) {
    auto lex = unique_sources(200);
    auto a = split_lexicon(lex, 30, 7);
    auto b = split_lexicon(lex, 30, 7);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.val, b.val);
    EXPECT_NE(split_lexicon(lex, 30, 8).val, a.val);
}

TEST(SplitLexicon, PartitionKeepsSourceGroupsTogether) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        BilingualLexicon lex;
        const std::size_t n = 20 + rng() % 200;
        for (std::size_t i = 0; i < n; ++i)
            lex.add("s" + std::to_string(rng() % (n / 2 + 1)), "t" + std::to_string(rng() % n));
        if (lex.size() < 2) continue;
        const std::size_t n_val = 1 + rng() % (lex.size() - 1);
        auto split = split_lexicon(lex, n_val, rng());

        std::multiset<WordPair> all(lex.pairs().begin(), lex.pairs().end());
        std::multiset<WordPair> joined(split.train.pairs().begin(), split.train.pairs().end());
        joined.insert(split.val.pairs().begin(), split.val.pairs().end());
        EXPECT_EQ(joined, all);
        EXPECT_LE(split.val.size(), n_val);
        EXPECT_FALSE(split.val.empty());

        std::set<std::string> train_src;
        for (const auto& p : split.train.pairs()) train_src.insert(p.src);
        for (const auto& p : split.val.pairs()) EXPECT_FALSE(train_src.count(p.src)) << p.src;
    }
}

}  // namespace
}  // namespace wordmap
