#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordmap/vocabulary.hpp"

namespace wordmap {

/// A tokenized sentence. Tokens are non-empty and contain no whitespace.
struct Sentence {
    std::vector<std::string> tokens;

    bool operator==(const Sentence&) const = default;
};

struct CleaningRules {
    bool lowercase = true;
    bool strip_punctuation = true;
    /// Drop any sentence identical to one already emitted (global, not only
    /// consecutive repeats).
    bool drop_duplicates = true;
};

/// Line-at-a-time corpus cleaner. Keeps the line counter and the set of
/// sentences seen so far.
class CorpusCleaner {
public:
    explicit CorpusCleaner(CleaningRules rules = {}) : rules_(rules) {}

    /// Cleans the next input line. Returns nullopt when the line is empty
    /// after cleaning or is a duplicate. Throws IngestionError on invalid
    /// UTF-8, naming the 1-based line number.
    std::optional<Sentence> feed(std::string_view line);

    std::size_t lines_read() const noexcept { return line_no_; }
    std::size_t duplicates_dropped() const noexcept { return duplicates_; }

private:
    CleaningRules rules_;
    std::size_t line_no_ = 0;
    std::size_t duplicates_ = 0;
    std::unordered_set<std::string> seen_;
};

std::vector<Sentence> clean_corpus(std::istream& in, const CleaningRules& rules = {});

/// Reads an already-clean corpus: one sentence per line, whitespace tokens,
/// blank lines skipped. Throws IngestionError on invalid UTF-8.
std::vector<Sentence> read_sentences(std::istream& in);

void write_sentences(std::ostream& out, std::span<const Sentence> sentences);

using WordCounts = std::unordered_map<std::string, std::uint64_t>;

WordCounts count_words(std::span<const Sentence> sentences);
void merge_counts(WordCounts& into, const WordCounts& from);

/// Words with count >= min_count, by descending count then ascending bytes.
Vocabulary vocabulary_from_counts(const WordCounts& counts, std::uint64_t min_count);

/// Same result for any thread count: shards are counted independently and
/// merged before ordering. Throws ArgumentError when min_count < 1.
Vocabulary build_vocabulary(std::span<const Sentence> sentences, std::uint64_t min_count,
                            unsigned threads = 1);

struct CorpusStats {
    std::uint64_t n_sentences = 0;
    std::uint64_t n_tokens = 0;
    std::uint64_t n_unique_words = 0;

    bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(std::span<const Sentence> sentences);

}  // namespace wordmap
