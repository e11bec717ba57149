#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordmap/embedding.hpp"
#include "wordmap/lexicon.hpp"
#include "wordmap/linear_map.hpp"

namespace wordmap {

// ---------------------------------------------------------------------------
// Similarity primitives. All inputs are row-per-vector matrices; callers are
// responsible for unit-normalising rows when cosine similarity is intended.

/// For each row q of `queries`, the mean of the k largest dot products
/// q . b over rows b of `base`. Throws ArgumentError unless
/// 1 <= k <= base.rows().
Vector mean_topk_similarity(const Matrix& queries, const Matrix& base, std::size_t k);

/// Index of the best CSLS match in `base` for every row of `queries`, where
/// score(q, b) = 2 q.b - r_queries[q] - r_base[b]. Ties go to the lower
/// index. When `best` is non-null it receives the winning scores.
std::vector<std::size_t> best_csls_match(const Matrix& queries, const Matrix& base,
                                         const Vector& r_queries, const Vector& r_base,
                                         std::vector<double>* best = nullptr);

/// Cross-domain similarity local scaling against a fixed target set.
///
/// r_S (mean similarity of each target to its k nearest mapped sources) is
/// computed once at construction; r_T is computed per query.
class CslsScorer {
public:
    /// Throws ArgumentError unless 1 <= k <= min(targets.rows(), sources_mapped.rows()).
    CslsScorer(const Matrix& targets, const Matrix& sources_mapped, std::size_t k);

    /// 2 cos(q, y) - r_T(q) - r_S(y) for every target row y.
    Vector scores(const Vector& query) const;

    const Vector& target_penalty() const noexcept { return r_targets_; }
    std::size_t k() const noexcept { return k_; }

private:
    const Matrix& targets_;
    Vector r_targets_;
    std::size_t k_;
};

/// One-shot CSLS scores of `query` against every target row.
Vector csls_score(const Vector& query, const Matrix& targets, const Matrix& sources_mapped,
                  std::size_t k);

// ---------------------------------------------------------------------------
// Word translation retrieval.

enum class RetrievalMethod { nn, csls };

RetrievalMethod parse_retrieval_method(std::string_view name);
std::string_view to_string(RetrievalMethod method);

struct Candidate {
    std::string word;
    double score = 0.0;
};

/// Ranks the whole target vocabulary for `query_word` mapped through `map`;
/// returns at most `top` candidates, ties broken by ascending target index.
/// Source and target rows are unit-normalised after mapping. Throws
/// LookupError for an unknown query word.
std::vector<Candidate> retrieve(std::string_view query_word, const LinearMap& map,
                                const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                                RetrievalMethod method, std::size_t k, std::size_t top);

struct QueryOutcome {
    std::string source;
    std::vector<std::string> candidates;  // best first
    std::vector<std::string> references;
    /// 1-based rank of the first reference among candidates, 0 if none.
    std::size_t hit_rank = 0;

    bool correct() const noexcept { return hit_rank == 1; }
};

struct RetrievalReport {
    RetrievalMethod method = RetrievalMethod::nn;
    double p_at_1 = 0.0;
    std::map<std::size_t, double> p_at_k;
    std::size_t n_queries = 0;
    std::vector<QueryOutcome> per_query;
};

struct EvaluateOptions {
    std::size_t csls_k = 10;
    std::vector<std::size_t> ks{1, 5, 10};
    unsigned threads = 1;
};

/// P@k of `map` on the lexicon. Queries are the distinct source words (first
/// appearance order); a query is correct at rank r when any of its reference
/// targets is among the top r. Pairs outside the vocabularies are skipped.
/// Throws EvaluationError when no pair survives.
RetrievalReport evaluate(const LinearMap& map, const BilingualLexicon& lex,
                         const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                         RetrievalMethod method, const EvaluateOptions& options = {});

/// "P@1 <v> P@5 <v> P@10 <v> queries <n>"
std::string format_summary(const RetrievalReport& report);

/// Summary line, then with `per_query` one
/// "src -> predicted [correct|wrong] (ref ...)" line per query.
void write_report(std::ostream& out, const RetrievalReport& report, bool per_query);

/// Only the per-query lines of write_report.
void write_per_query(std::ostream& out, const RetrievalReport& report);

struct RandomBaseline {
    double analytic = 0.0;
    double monte_carlo = 0.0;
};

/// Probability that a uniformly drawn target from the lexicon's target set is
/// a correct translation, averaged over distinct source words. Returned
/// analytically and as a seeded Monte-Carlo estimate. Throws ArgumentError
/// when trials < 1 and EvaluationError on an empty lexicon.
RandomBaseline random_baseline(const BilingualLexicon& lex, std::size_t trials, std::uint64_t seed);

}  // namespace wordmap
