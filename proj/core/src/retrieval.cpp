#include "wordmap/retrieval.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "wordmap/diagnostics.hpp"
#include "wordmap/errors.hpp"

namespace wordmap {
namespace {

constexpr Eigen::Index kBlockRows = 256;

void check_k(std::size_t k, Eigen::Index rows, const char* who) {
    if (k < 1 || static_cast<Eigen::Index>(k) > rows)
        throw ArgumentError(std::string(who) + ": k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(rows) + "]");
}

double mean_of_topk(const double* row, Eigen::Index n, std::size_t k, std::vector<double>& buf) {
    buf.assign(row, row + n);
    const auto kk = static_cast<std::ptrdiff_t>(k);
    std::nth_element(buf.begin(), buf.begin() + (kk - 1), buf.end(), std::greater<>());
    std::sort(buf.begin(), buf.begin() + kk, std::greater<>());
    double sum = 0;
    for (std::ptrdiff_t i = 0; i < kk; ++i) sum += buf[static_cast<std::size_t>(i)];
    return sum / static_cast<double>(k);
}

// Indices of the `top` best scores, best first, ties by ascending index.
std::vector<std::size_t> top_indices(const double* scores, std::size_t n, std::size_t top) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    top = std::min(top, n);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    idx.resize(top);
    return idx;
}

Matrix unit_rows(const Matrix& m) {
    Matrix out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double n = out.row(i).norm();
        if (n > 0) out.row(i) /= n;
    }
    return out;
}

}  // namespace

Vector mean_topk_similarity(const Matrix& queries, const Matrix& base, std::size_t k) {
    check_k(k, base.rows(), "mean_topk_similarity");
    Vector out(queries.rows());
    std::vector<double> buf;
    for (Eigen::Index start = 0; start < queries.rows(); start += kBlockRows) {
        const Eigen::Index rows = std::min(kBlockRows, queries.rows() - start);
        Matrix sims = queries.middleRows(start, rows) * base.transpose();
        for (Eigen::Index i = 0; i < rows; ++i)
            out(start + i) = mean_of_topk(sims.row(i).data(), sims.cols(), k, buf);
    }
    return out;
}

std::vector<std::size_t> best_csls_match(const Matrix& queries, const Matrix& base,
                                         const Vector& r_queries, const Vector& r_base,
                                         std::vector<double>* best) {
    std::vector<std::size_t> match(static_cast<std::size_t>(queries.rows()), 0);
    if (best) best->assign(match.size(), 0.0);
    for (Eigen::Index start = 0; start < queries.rows(); start += kBlockRows) {
        const Eigen::Index rows = std::min(kBlockRows, queries.rows() - start);
        Matrix sims = queries.middleRows(start, rows) * base.transpose();
        for (Eigen::Index i = 0; i < rows; ++i) {
            Eigen::Index arg = 0;
            double top = -std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < sims.cols(); ++j) {
                const double s = 2.0 * sims(i, j) - r_base(j);
                if (s > top) {
                    top = s;
                    arg = j;
                }
            }
            const auto q = static_cast<std::size_t>(start + i);
            match[q] = static_cast<std::size_t>(arg);
            if (best) (*best)[q] = top - r_queries(start + i);
        }
    }
    return match;
}

CslsScorer::CslsScorer(const Matrix& targets, const Matrix& sources_mapped, std::size_t k)
    : targets_(targets), k_(k) {
    check_k(k, std::min(targets.rows(), sources_mapped.rows()), "csls");
    r_targets_ = mean_topk_similarity(targets, sources_mapped, k);
}

Vector CslsScorer::scores(const Vector& query) const {
    Vector sims = targets_ * query;
    std::vector<double> buf;
    const double r_query = mean_of_topk(sims.data(), sims.size(), k_, buf);
    return (2.0 * sims - r_targets_).array() - r_query;
}

Vector csls_score(const Vector& query, const Matrix& targets, const Matrix& sources_mapped,
                  std::size_t k) {
    return CslsScorer(targets, sources_mapped, k).scores(query);
}

RetrievalMethod parse_retrieval_method(std::string_view name) {
    if (name == "nn") return RetrievalMethod::nn;
    if (name == "csls") return RetrievalMethod::csls;
    throw ArgumentError("unknown retrieval method '" + std::string(name) + "'");
}

std::string_view to_string(RetrievalMethod method) {
    return method == RetrievalMethod::nn ? "nn" : "csls";
}

std::vector<Candidate> retrieve(std::string_view query_word, const LinearMap& map,
                                const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                                RetrievalMethod method, std::size_t k, std::size_t top) {
    const std::size_t qi = src.vocab().at(query_word);
    if (map.dim() != src.dim() || src.dim() != tgt.dim())
        throw ArgumentError("retrieve: dimension mismatch");
    const Matrix targets = unit_rows(tgt.vectors());

    Vector scores;
    if (method == RetrievalMethod::nn) {
        Vector q = map.matrix * src.row(qi).transpose();
        if (q.norm() > 0) q.normalize();
        scores = targets * q;
    } else {
        const Matrix mapped = unit_rows(src.vectors() * map.matrix.transpose());
        CslsScorer scorer(targets, mapped, k);
        scores = scorer.scores(mapped.row(static_cast<Eigen::Index>(qi)).transpose());
    }
    std::vector<Candidate> out;
    for (auto j : top_indices(scores.data(), static_cast<std::size_t>(scores.size()), top))
        out.push_back({tgt.vocab().word(j), scores(static_cast<Eigen::Index>(j))});
    return out;
}

RetrievalReport evaluate(const LinearMap& map, const BilingualLexicon& lex,
                         const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                         RetrievalMethod method, const EvaluateOptions& options) {
    if (map.dim() != src.dim() || src.dim() != tgt.dim())
        throw ArgumentError("evaluate: dimension mismatch");

    // Group references per distinct source word, skipping out-of-vocabulary pairs.
    std::vector<std::size_t> query_rows;
    std::vector<std::vector<std::size_t>> refs;
    std::unordered_map<std::string_view, std::size_t> slot;
    std::size_t skipped = 0;
    for (const auto& p : lex.pairs()) {
        auto s = src.vocab().index_of(p.src);
        auto t = tgt.vocab().index_of(p.tgt);
        if (!s || !t) {
            ++skipped;
            continue;
        }
        auto [it, fresh] = slot.emplace(p.src, query_rows.size());
        if (fresh) {
            query_rows.push_back(*s);
            refs.emplace_back();
        }
        refs[it->second].push_back(*t);
    }
    if (query_rows.empty()) throw EvaluationError("evaluate: no lexicon pair is in both vocabularies");
    if (skipped) warn("evaluate: skipped " + std::to_string(skipped) + " out-of-vocabulary pairs");

    std::size_t max_k = 1;
    for (auto k : options.ks) max_k = std::max(max_k, k);

    const Matrix targets = unit_rows(tgt.vectors());
    const Matrix mapped = unit_rows(src.vectors() * map.matrix.transpose());
    Vector r_targets;
    if (method == RetrievalMethod::csls) {
        check_k(options.csls_k, std::min(targets.rows(), mapped.rows()), "evaluate");
        r_targets = mean_topk_similarity(targets, mapped, options.csls_k);
    }

    const std::size_t nq = query_rows.size();
    Matrix queries(static_cast<Eigen::Index>(nq), mapped.cols());
    for (std::size_t i = 0; i < nq; ++i)
        queries.row(static_cast<Eigen::Index>(i)) = mapped.row(static_cast<Eigen::Index>(query_rows[i]));

    std::vector<std::vector<std::size_t>> ranked(nq);
    auto work = [&](std::size_t first, std::size_t last) {
        std::vector<double> buf;
        for (std::size_t start = first; start < last; start += kBlockRows) {
            const std::size_t rows = std::min<std::size_t>(kBlockRows, last - start);
            Matrix sims = queries.middleRows(static_cast<Eigen::Index>(start),
                                             static_cast<Eigen::Index>(rows)) *
                          targets.transpose();
            for (std::size_t i = 0; i < rows; ++i) {
                auto row = sims.row(static_cast<Eigen::Index>(i));
                if (method == RetrievalMethod::csls) {
                    const double r_q = mean_of_topk(row.data(), row.size(), options.csls_k, buf);
                    row = (2.0 * row - r_targets.transpose()).array() - r_q;
                }
                ranked[start + i] = top_indices(row.data(), static_cast<std::size_t>(row.size()), max_k);
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(nq)));
    if (threads == 1) {
        work(0, nq);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t per = (nq + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t first = std::min(nq, t * per), last = std::min(nq, first + per);
            pool.emplace_back(work, first, last);
        }
    }

    RetrievalReport report;
    report.method = method;
    report.n_queries = nq;
    std::map<std::size_t, std::size_t> hits;
    for (auto k : options.ks) hits[k] = 0;
    for (std::size_t q = 0; q < nq; ++q) {
        QueryOutcome out;
        out.source = src.vocab().word(query_rows[q]);
        for (auto t : refs[q]) out.references.push_back(tgt.vocab().word(t));
        for (std::size_t r = 0; r < ranked[q].size(); ++r) {
            out.candidates.push_back(tgt.vocab().word(ranked[q][r]));
            if (out.hit_rank == 0 &&
                std::find(refs[q].begin(), refs[q].end(), ranked[q][r]) != refs[q].end())
                out.hit_rank = r + 1;
        }
        for (auto& [k, n] : hits)
            if (out.hit_rank != 0 && out.hit_rank <= k) ++n;
        report.per_query.push_back(std::move(out));
    }
    for (auto [k, n] : hits) report.p_at_k[k] = static_cast<double>(n) / static_cast<double>(nq);
    report.p_at_1 = static_cast<double>(std::count_if(report.per_query.begin(), report.per_query.end(),
                                                      [](const auto& o) { return o.correct(); })) /
                    static_cast<double>(nq);
    return report;
}

std::string format_summary(const RetrievalReport& report) {
    std::string out;
    char buf[64];
    auto value = [&](std::size_t k) {
        auto it = report.p_at_k.find(k);
        return it == report.p_at_k.end() ? (k == 1 ? report.p_at_1 : 0.0) : it->second;
    };
    for (std::size_t k : {1u, 5u, 10u}) {
        std::snprintf(buf, sizeof(buf), "P@%zu %.4f ", k, value(k));
        out += buf;
    }
    out += "queries " + std::to_string(report.n_queries);
    return out;
}

void write_report(std::ostream& out, const RetrievalReport& report, bool per_query) {
    out << format_summary(report) << '\n';
    if (per_query) write_per_query(out, report);
}

void write_per_query(std::ostream& out, const RetrievalReport& report) {
    for (const auto& q : report.per_query) {
        out << q.source << " -> " << (q.candidates.empty() ? "" : q.candidates.front()) << ' '
            << (q.correct() ? "correct" : "wrong") << " (";
        for (std::size_t i = 0; i < q.references.size(); ++i) out << (i ? " " : "") << q.references[i];
        out << ")\n";
    }
}

RandomBaseline random_baseline(const BilingualLexicon& lex, std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw ArgumentError("random_baseline: trials must be >= 1");
    if (lex.empty()) throw EvaluationError("random_baseline: empty lexicon");

    const auto targets = lex.target_words();
    std::unordered_map<std::string_view, std::size_t> target_index;
    for (std::size_t i = 0; i < targets.size(); ++i) target_index.emplace(targets[i], i);

    std::unordered_map<std::string_view, std::size_t> slot;
    std::vector<std::unordered_set<std::size_t>> refs;
    for (const auto& p : lex.pairs()) {
        auto [it, fresh] = slot.emplace(p.src, refs.size());
        if (fresh) refs.emplace_back();
        refs[it->second].insert(target_index.at(p.tgt));
    }

    RandomBaseline out;
    const double n_targets = static_cast<double>(targets.size());
    for (const auto& r : refs) out.analytic += static_cast<double>(r.size()) / n_targets;
    out.analytic /= static_cast<double>(refs.size());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
    std::uint64_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t)
        for (const auto& r : refs)
            if (r.contains(pick(rng))) ++hits;
    out.monte_carlo = static_cast<double>(hits) / (static_cast<double>(trials) * static_cast<double>(refs.size()));
    return out;
}

}  // namespace wordmap
