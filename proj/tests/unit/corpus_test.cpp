#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "wordmap/corpus.hpp"
#include "wordmap/errors.hpp"

namespace wordmap {
namespace {

std::vector<Sentence> sentences(std::initializer_list<const char*> lines) {
    std::string text;
    for (auto* l : lines) text += std::string(l) + "\n";
    std::istringstream in(text);
    return read_sentences(in);
}

std::vector<Sentence> clean(const std::string& text, CleaningRules rules = {}) {
    std::istringstream in(text);
    return clean_corpus(in, rules);
}

TEST(Clean, PaperExample) {
    auto out = clean("Dem say na serious GBEGE!\n");
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].tokens, (std::vector<std::string>{"dem", "say", "na", "serious", "gbege"}));
}

TEST(Clean, BlankLineEmitsNothing) {
    EXPECT_TRUE(clean("\n").empty());
    EXPECT_TRUE(clean("   \n!!!\n").empty());
}

TEST(Clean, DuplicateSentencesFollowRule) {
    const std::string text = "a b.\na b.\n";
    CleaningRules keep;
    keep.drop_duplicates = false;
    EXPECT_EQ(clean(text, keep).size(), 2u);
    EXPECT_EQ(clean(text).size(), 1u);
    // Dedup is global and applies after normalisation.
    EXPECT_EQ(clean("A b\nc\na B!\n").size(), 2u);
}

TEST(Clean, ReportsLineOfInvalidUtf8) {
    CorpusCleaner cleaner;
    EXPECT_TRUE(cleaner.feed("fine"));
    try {
        cleaner.feed("bad \xFF byte");
        FAIL();
    } catch (const IngestionError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Clean, CountsLinesAndDuplicates) {
    CorpusCleaner cleaner;
    cleaner.feed("x y");
    cleaner.feed("X Y");
    cleaner.feed("");
    EXPECT_EQ(cleaner.lines_read(), 3u);
    EXPECT_EQ(cleaner.duplicates_dropped(), 1u);
}

TEST(Clean, IsIdempotent) {
    std::mt19937_64 rng(3);
    const std::string alphabet[] = {"Wahala", "dey", "O!", "na", "GBEGE,", "\xE2\x80\x9Cyes\xE2\x80\x9D",
                                    "don't", "--", "sha", "\xC3\x89go"};
    for (int trial = 0; trial < 20; ++trial) {
        std::string text;
        for (int l = 0; l < 30; ++l) {
            for (int w = 0; w < 6; ++w) text += alphabet[rng() % 10] + (rng() % 3 ? " " : "");
            text += '\n';
        }
        auto once = clean(text);
        std::ostringstream buf;
        write_sentences(buf, once);
        EXPECT_EQ(clean(buf.str()), once);
    }
}

TEST(ReadSentences, RoundTripsWithWrite) {
    auto s = sentences({"a b", "", "  c  d e "});
    ASSERT_EQ(s.size(), 2u);
    std::ostringstream out;
    write_sentences(out, s);
    EXPECT_EQ(out.str(), "a b\nc d e\n");
}

TEST(Vocabulary, CountsAndThreshold) {
    auto corpus = sentences({"a b a", "b c"});
    auto v1 = build_vocabulary(corpus, 1);
    EXPECT_EQ(v1.words(), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(v1.counts(), (std::vector<std::uint64_t>{2, 2, 1}));
    auto v2 = build_vocabulary(corpus, 2);
    EXPECT_EQ(v2.words(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(v2.size(), 2u);
    EXPECT_THROW(build_vocabulary(corpus, 0), ArgumentError);
}

TEST(Vocabulary, OrderedByCountThenBytes) {
    auto v = build_vocabulary(sentences({"z y y x x x", "w"}), 1);
    EXPECT_EQ(v.words(), (std::vector<std::string>{"x", "y", "w", "z"}));
    EXPECT_EQ(v.at("y"), 1u);
    EXPECT_FALSE(v.index_of("q"));
}

TEST(Vocabulary, RejectsBadConstruction) {
    EXPECT_THROW(Vocabulary({"a", "a"}), ArgumentError);
    EXPECT_THROW(Vocabulary({"a"}, {1, 2}), ArgumentError);
    EXPECT_THROW(Vocabulary({"a"}, {1}, 2), ArgumentError);
    EXPECT_THROW(Vocabulary({"a"}).at("b"), LookupError);
}

std::vector<Sentence> random_corpus(std::mt19937_64& rng, std::size_t n) {
    std::vector<Sentence> out(n);
    std::geometric_distribution<int> word(0.15);
    std::uniform_int_distribution<int> len(0, 12);
    for (auto& s : out)
        for (int i = len(rng); i > 0; --i) s.tokens.push_back("w" + std::to_string(word(rng)));
    return out;
}

TEST(Vocabulary, PermutationInvariant) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto corpus = random_corpus(rng, 300);
        auto ref = build_vocabulary(corpus, 2);
        std::shuffle(corpus.begin(), corpus.end(), rng);
        EXPECT_EQ(build_vocabulary(corpus, 2), ref);
    }
}

TEST(Vocabulary, ShardedEqualsSingleThreaded) {
    std::mt19937_64 rng(12);
    auto corpus = random_corpus(rng, 2000);
    auto ref = build_vocabulary(corpus, 1, 1);
    for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(build_vocabulary(corpus, 1, t), ref);
}

TEST(Vocabulary, MatchesBruteForceCount) {
    std::mt19937_64 rng(13);
    auto corpus = random_corpus(rng, 200);
    auto v = build_vocabulary(corpus, 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t n = 0;
        for (const auto& s : corpus) n += static_cast<std::uint64_t>(std::count(s.tokens.begin(), s.tokens.end(), v.word(i)));
        EXPECT_EQ(v.count(i), n) << v.word(i);
    }
}

TEST(Stats, Examples) {
    EXPECT_EQ(corpus_stats({}), (CorpusStats{0, 0, 0}));
    EXPECT_EQ(corpus_stats(sentences({"a b a"})), (CorpusStats{1, 3, 2}));
}

TEST(Stats, UniqueWordsEqualVocabularySize) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        auto corpus = random_corpus(rng, 100);
        EXPECT_EQ(corpus_stats(corpus).n_unique_words, build_vocabulary(corpus, 1).size());
    }
}

}  // namespace
}  // namespace wordmap
