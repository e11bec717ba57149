#include "wordmap/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <thread>

#include "text.hpp"
#include "wordmap/errors.hpp"

namespace wordmap {
namespace {

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace

std::optional<Sentence> CorpusCleaner::feed(std::string_view line) {
    ++line_no_;
    if (auto bad = text::find_invalid_utf8(line))
        throw IngestionError("invalid UTF-8 at byte " + std::to_string(*bad), line_no_);

    Sentence s{text::tokenize(line, {rules_.lowercase, rules_.strip_punctuation})};
    if (s.tokens.empty()) return std::nullopt;
    if (rules_.drop_duplicates && !seen_.insert(join(s.tokens)).second) {
        ++duplicates_;
        return std::nullopt;
    }
    return s;
}

std::vector<Sentence> clean_corpus(std::istream& in, const CleaningRules& rules) {
    CorpusCleaner cleaner(rules);
    std::vector<Sentence> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto s = cleaner.feed(line)) out.push_back(std::move(*s));
    }
    return out;
}

std::vector<Sentence> read_sentences(std::istream& in) {
    std::vector<Sentence> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto bad = text::find_invalid_utf8(line))
            throw IngestionError("invalid UTF-8 at byte " + std::to_string(*bad), line_no);
        auto tokens = text::split_whitespace(line);
        if (!tokens.empty()) out.push_back(Sentence{std::move(tokens)});
    }
    return out;
}

void write_sentences(std::ostream& out, std::span<const Sentence> sentences) {
    for (const auto& s : sentences) out << join(s.tokens) << '\n';
}

WordCounts count_words(std::span<const Sentence> sentences) {
    WordCounts counts;
    for (const auto& s : sentences)
        for (const auto& t : s.tokens) ++counts[t];
    return counts;
}

void merge_counts(WordCounts& into, const WordCounts& from) {
    for (const auto& [word, n] : from) into[word] += n;
}

Vocabulary vocabulary_from_counts(const WordCounts& counts, std::uint64_t min_count) {
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (const auto& [word, n] : counts)
        if (n >= min_count) kept.emplace_back(word, n);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> words;
    std::vector<std::uint64_t> freq;
    words.reserve(kept.size());
    freq.reserve(kept.size());
    for (auto& [w, n] : kept) {
        words.push_back(std::move(w));
        freq.push_back(n);
    }
    return Vocabulary(std::move(words), std::move(freq), min_count);
}

Vocabulary build_vocabulary(std::span<const Sentence> sentences, std::uint64_t min_count,
                            unsigned threads) {
    if (min_count < 1) throw ArgumentError("build_vocabulary: min_count must be >= 1");
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sentences.size())));
    if (threads <= 1) return vocabulary_from_counts(count_words(sentences), min_count);

    std::vector<WordCounts> shards(threads);
    {
        std::vector<std::jthread> workers;
        const std::size_t per = (sentences.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(sentences.size(), t * per);
            const std::size_t end = std::min(sentences.size(), begin + per);
            workers.emplace_back([&, t, begin, end] {
                shards[t] = count_words(sentences.subspan(begin, end - begin));
            });
        }
    }
    WordCounts total;
    for (const auto& shard : shards) merge_counts(total, shard);
    return vocabulary_from_counts(total, min_count);
}

CorpusStats corpus_stats(std::span<const Sentence> sentences) {
    CorpusStats stats;
    std::unordered_set<std::string_view> unique;
    for (const auto& s : sentences) {
        ++stats.n_sentences;
        stats.n_tokens += s.tokens.size();
        for (const auto& t : s.tokens) unique.insert(t);
    }
    stats.n_unique_words = unique.size();
    return stats;
}

}  // namespace wordmap
