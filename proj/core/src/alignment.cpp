#include "wordmap/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wordmap/diagnostics.hpp"
#include "wordmap/discriminator.hpp"
#include "wordmap/errors.hpp"
#include "wordmap/retrieval.hpp"

namespace wordmap {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Alignment works on unit rows. Holds either a reference to the caller's
// embedding or a normalised copy.
class UnitInput {
public:
    UnitInput(const EmbeddingMatrix& emb, const char* who) : ref_(&emb) {
        if (!is_unit_normalized(emb)) {
            warn(std::string(who) + ": input is not unit-normalised; normalising");
            owned_ = normalize(emb, NormScheme::unit);
            ref_ = &*owned_;
        }
    }
    const EmbeddingMatrix& operator*() const { return *ref_; }
    const EmbeddingMatrix* operator->() const { return ref_; }

private:
    std::optional<EmbeddingMatrix> owned_;
    const EmbeddingMatrix* ref_;
};

Matrix unit_rows(const Matrix& m) {
    Matrix out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double n = out.row(i).norm();
        if (n > 0) out.row(i) /= n;
    }
    return out;
}

struct PairRows {
    std::vector<std::size_t> src;
    std::vector<std::size_t> tgt;
};

PairRows lookup_pairs(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                      const BilingualLexicon& lex, const char* who) {
    PairRows rows;
    std::size_t skipped = 0;
    for (const auto& p : lex.pairs()) {
        auto s = src.vocab().index_of(p.src);
        auto t = tgt.vocab().index_of(p.tgt);
        if (s && t) {
            rows.src.push_back(*s);
            rows.tgt.push_back(*t);
        } else {
            ++skipped;
        }
    }
    if (skipped) warn(std::string(who) + ": skipped " + std::to_string(skipped) + " out-of-vocabulary pairs");
    if (rows.src.empty()) throw AlignmentError(std::string(who) + ": no usable lexicon pairs");
    return rows;
}

Matrix gather(const Matrix& m, const std::vector<std::size_t>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
    return out;
}

void check_dims(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, const char* who) {
    if (src.dim() != tgt.dim())
        throw ArgumentError(std::string(who) + ": source dimension " + std::to_string(src.dim()) +
                            " != target dimension " + std::to_string(tgt.dim()));
}

}  // namespace

// ---------------------------------------------------------------------------

LinearMap procrustes(const Matrix& src_rows, const Matrix& tgt_rows) {
    if (src_rows.rows() != tgt_rows.rows() || src_rows.cols() != tgt_rows.cols())
        throw ArgumentError("procrustes: paired matrices differ in shape");
    if (src_rows.rows() == 0) throw AlignmentError("procrustes: no pairs");
    const Eigen::MatrixXd cross = tgt_rows.transpose() * src_rows;  // sum_i y_i x_i^T
    return {nearest_orthogonal(cross), true};
}

LinearMap procrustes(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                     const BilingualLexicon& train_lex) {
    check_dims(src, tgt, "procrustes");
    UnitInput s(src, "procrustes"), t(tgt, "procrustes");
    const auto rows = lookup_pairs(*s, *t, train_lex, "procrustes");
    if (rows.src.size() < src.dim())
        warn("procrustes: " + std::to_string(rows.src.size()) + " pairs for dimension " +
             std::to_string(src.dim()) + "; the solution is underdetermined");
    return procrustes(gather(s->vectors(), rows.src), gather(t->vectors(), rows.tgt));
}

// ---------------------------------------------------------------------------

std::vector<ScoredPair> mutual_csls_pairs(const EmbeddingMatrix& src_mapped,
                                          const EmbeddingMatrix& tgt, std::size_t k,
                                          std::size_t max_rank) {
    check_dims(src_mapped, tgt, "mutual_csls_pairs");
    const auto rs = static_cast<Eigen::Index>(std::min(max_rank, src_mapped.size()));
    const auto rt = static_cast<Eigen::Index>(std::min(max_rank, tgt.size()));
    if (k < 1 || static_cast<Eigen::Index>(k) > std::min(rs, rt))
        throw ArgumentError("mutual_csls_pairs: k=" + std::to_string(k) + " exceeds the candidate pool");

    const Matrix a = unit_rows(src_mapped.vectors().topRows(rs));
    const Matrix b = unit_rows(tgt.vectors().topRows(rt));
    const Vector ra = mean_topk_similarity(a, b, k);
    const Vector rb = mean_topk_similarity(b, a, k);
    std::vector<double> fwd_score;
    const auto fwd = best_csls_match(a, b, ra, rb, &fwd_score);
    const auto bwd = best_csls_match(b, a, rb, ra);

    std::vector<ScoredPair> pairs;
    for (std::size_t i = 0; i < fwd.size(); ++i)
        if (bwd[fwd[i]] == i) pairs.push_back({i, fwd[i], fwd_score[i]});
    return pairs;
}

BilingualLexicon build_synthetic_lexicon(const EmbeddingMatrix& src_mapped,
                                         const EmbeddingMatrix& tgt, std::size_t k,
                                         std::size_t max_rank) {
    BilingualLexicon lex;
    for (const auto& p : mutual_csls_pairs(src_mapped, tgt, k, max_rank))
        lex.add(src_mapped.vocab().word(p.src), tgt.vocab().word(p.tgt));
    return lex;
}

namespace {

double mean_score(const std::vector<ScoredPair>& pairs) {
    if (pairs.empty()) return kNegInf;
    double sum = 0;
    for (const auto& p : pairs) sum += p.csls;
    return sum / static_cast<double>(pairs.size());
}

}  // namespace

double unsupervised_criterion(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                              const LinearMap& map, std::size_t k, std::size_t max_rank) {
    return mean_score(mutual_csls_pairs(apply_map(map, src), tgt, k, max_rank));
}

LinearMap refine(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, const LinearMap& initial,
                 std::size_t iterations, std::size_t k, std::size_t max_rank, RefineTrace* trace) {
    check_dims(src, tgt, "refine");
    if (trace) *trace = {};
    if (iterations == 0) return initial;

    UnitInput s(src, "refine"), t(tgt, "refine");
    LinearMap current = initial;
    std::optional<LinearMap> best;
    double best_score = kNegInf;
    for (std::size_t it = 0;; ++it) {
        const auto pairs = mutual_csls_pairs(apply_map(current, *s), *t, k, max_rank);
        const double score = mean_score(pairs);
        if (trace) trace->steps.push_back({pairs.size(), score});
        if ((it > 0 || current.orthogonal) && (!best || score > best_score)) {
            best = current;
            best_score = score;
            if (trace) trace->best_step = it;
        }
        if (it == iterations) break;
        if (pairs.empty()) {
            warn("refine: iteration " + std::to_string(it + 1) + " induced no pairs; stopping");
            break;
        }
        std::vector<std::size_t> si, ti;
        for (const auto& p : pairs) {
            si.push_back(p.src);
            ti.push_back(p.tgt);
        }
        current = procrustes(gather(s->vectors(), si), gather(t->vectors(), ti));
    }
    return best ? *best : initial;
}

// ---------------------------------------------------------------------------

void validate(const AdversarialConfig& c) {
    if (c.disc_hidden < 1 || c.disc_layers < 1 || c.batch_size < 1 || c.disc_steps < 1 ||
        c.vocab_cap < 1 || c.epoch_size < 1 || c.criterion_k < 1)
        throw ArgumentError("adversarial: sizes must be >= 1");
    if (c.disc_dropout < 0 || c.disc_dropout >= 1)
        throw ArgumentError("adversarial: disc_dropout must be in [0, 1)");
    if (c.smoothing < 0 || c.smoothing >= 0.5)
        throw ArgumentError("adversarial: smoothing must be in [0, 0.5)");
    if (!(c.map_lr > 0) || !(c.disc_lr > 0) || c.ortho_beta < 0)
        throw ArgumentError("adversarial: learning rates must be > 0 and ortho_beta >= 0");
}

LinearMap adversarial_align(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                            const AdversarialConfig& config, const std::optional<LinearMap>& initial,
                            AdversarialTrace* trace) {
    validate(config);
    check_dims(src, tgt, "adversarial_align");
    if (initial && initial->dim() != src.dim())
        throw ArgumentError("adversarial_align: initial map dimension mismatch");
    UnitInput s(src, "adversarial_align"), t(tgt, "adversarial_align");
    if (trace) *trace = {};

    const std::size_t d = src.dim();
    const std::size_t cap_s = std::min(config.vocab_cap, src.size());
    const std::size_t cap_t = std::min(config.vocab_cap, tgt.size());
    if (cap_s == 0 || cap_t == 0) throw AlignmentError("adversarial_align: empty embedding");

    Eigen::MatrixXd w = initial ? initial->matrix
                                : Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                            static_cast<Eigen::Index>(d));
    Discriminator disc(d, config.disc_hidden, config.disc_layers, config.disc_dropout, config.seed);
    std::mt19937_64 rng(config.seed + 1);
    std::uniform_int_distribution<std::size_t> pick_s(0, cap_s - 1), pick_t(0, cap_t - 1);

    const auto bs = static_cast<Eigen::Index>(config.batch_size);
    Vector labels(2 * bs);
    labels.head(bs).setConstant(1.0 - config.smoothing);
    labels.tail(bs).setConstant(config.smoothing);
    const Vector flipped = Vector::Ones(2 * bs) - labels;

    Matrix src_batch(bs, static_cast<Eigen::Index>(d));
    Matrix both(2 * bs, static_cast<Eigen::Index>(d));
    auto sample = [&] {
        for (Eigen::Index i = 0; i < bs; ++i) {
            src_batch.row(i) = s->row(pick_s(rng));
            both.row(bs + i) = t->row(pick_t(rng));
        }
        both.topRows(bs) = src_batch * w.transpose();
    };

    // Fixed rows for the accuracy readout.
    const auto eval_s = static_cast<Eigen::Index>(std::min<std::size_t>(cap_s, 1000));
    const auto eval_t = static_cast<Eigen::Index>(std::min<std::size_t>(cap_t, 1000));

    double map_lr = config.map_lr;
    double disc_lr = config.disc_lr;
    double best_score = kNegInf;
    double prev_score = kNegInf;
    Eigen::MatrixXd best_w = w;
    const std::size_t iters = std::max<std::size_t>(1, config.epoch_size / config.batch_size);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double disc_loss = 0, map_loss = 0;
        for (std::size_t it = 0; it < iters; ++it) {
            for (std::size_t step = 0; step < config.disc_steps; ++step) {
                sample();
                const double l = disc.train_step(both, labels, disc_lr, rng);
                if (!std::isfinite(l))
                    throw DivergenceError("adversarial_align: discriminator loss is not finite", epoch + 1);
                disc_loss += l;
            }
            if (config.freeze_map) continue;
            sample();
            double l = 0;
            const Matrix grad_in = disc.input_gradient(both, flipped, &l);
            if (!std::isfinite(l))
                throw DivergenceError("adversarial_align: mapping loss is not finite", epoch + 1);
            map_loss += l;
            // mapped_i = W x_i, so dL/dW = sum_i g_i x_i^T.
            w -= map_lr * (grad_in.topRows(bs).transpose() * src_batch);
            orthogonalize_step(w, config.ortho_beta);
            if (!w.allFinite())
                throw DivergenceError("adversarial_align: mapping is not finite", epoch + 1);
        }

        AdversarialEpoch stats;
        stats.disc_loss = disc_loss / static_cast<double>(iters * config.disc_steps);
        stats.map_loss = config.freeze_map ? 0.0 : map_loss / static_cast<double>(iters);
        {
            const Vector zs = disc.logits(s->vectors().topRows(eval_s) * w.transpose());
            const Vector zt = disc.logits(t->vectors().topRows(eval_t));
            const auto correct = (zs.array() > 0).count() + (zt.array() <= 0).count();
            stats.disc_accuracy = static_cast<double>(correct) / static_cast<double>(eval_s + eval_t);
        }
        stats.criterion = unsupervised_criterion(*s, *t, {w, false}, config.criterion_k,
                                                 config.criterion_max_rank);
        if (stats.criterion > best_score || epoch == 0) {
            best_score = stats.criterion;
            best_w = w;
            if (trace) trace->best_epoch = epoch;
        }
        if (trace) trace->epochs.push_back(stats);

        map_lr *= config.lr_decay;
        disc_lr *= config.lr_decay;
        if (stats.criterion < prev_score) map_lr *= config.lr_shrink;
        prev_score = stats.criterion;
    }
    return {nearest_orthogonal(best_w), true};
}

// ---------------------------------------------------------------------------

void validate(const RcslsConfig& c) {
    if (c.k < 1) throw ArgumentError("rcsls: k must be >= 1");
    if (!(c.lr > 0)) throw ArgumentError("rcsls: lr must be > 0");
    if (c.neighborhood_refresh < 1) throw ArgumentError("rcsls: neighborhood_refresh must be >= 1");
}

namespace {

struct RcslsProblem {
    Matrix xp;  // paired source rows
    Matrix yp;  // paired target rows
    const Matrix* src;
    const Matrix* tgt;
    std::size_t k;
};

struct Neighbourhoods {
    std::vector<std::vector<std::size_t>> of_mapped;  // target neighbours of W x_i
    std::vector<std::vector<std::size_t>> of_target;  // mapped-source neighbours of y_i
};

// Returns mean of the k largest entries of `row`; writes their indices.
double topk(const double* row, std::size_t n, std::size_t k, std::vector<std::size_t>& idx) {
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0);
    const auto kk = static_cast<std::ptrdiff_t>(k);
    std::nth_element(idx.begin(), idx.begin() + (kk - 1), idx.end(),
                     [&](std::size_t a, std::size_t b) {
                         return row[a] != row[b] ? row[a] > row[b] : a < b;
                     });
    idx.resize(k);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return row[a] != row[b] ? row[a] > row[b] : a < b;
    });
    double sum = 0;
    for (auto i : idx) sum += row[i];
    return sum / static_cast<double>(k);
}

double rcsls_eval(const RcslsProblem& p, const Eigen::MatrixXd& w, Neighbourhoods* nb) {
    const Matrix mapped_pairs = p.xp * w.transpose();
    const Matrix mapped_src = *p.src * w.transpose();
    const auto n = p.xp.rows();
    if (nb) {
        nb->of_mapped.assign(static_cast<std::size_t>(n), {});
        nb->of_target.assign(static_cast<std::size_t>(n), {});
    }
    double total = 0;
    std::vector<std::size_t> idx;
    constexpr Eigen::Index block = 256;
    for (Eigen::Index start = 0; start < n; start += block) {
        const Eigen::Index rows = std::min(block, n - start);
        const Matrix st = mapped_pairs.middleRows(start, rows) * p.tgt->transpose();
        const Matrix ss = p.yp.middleRows(start, rows) * mapped_src.transpose();
        for (Eigen::Index i = 0; i < rows; ++i) {
            const auto q = static_cast<std::size_t>(start + i);
            double term = 2.0 * mapped_pairs.row(start + i).dot(p.yp.row(start + i));
            term -= topk(st.row(i).data(), static_cast<std::size_t>(st.cols()), p.k, idx);
            if (nb) nb->of_mapped[q] = idx;
            term -= topk(ss.row(i).data(), static_cast<std::size_t>(ss.cols()), p.k, idx);
            if (nb) nb->of_target[q] = idx;
            total += term;
        }
    }
    return total / static_cast<double>(n);
}

Eigen::MatrixXd rcsls_gradient(const RcslsProblem& p, const Neighbourhoods& nb) {
    const auto n = p.xp.rows();
    Matrix y_bar = Matrix::Zero(n, p.yp.cols());
    Matrix x_bar = Matrix::Zero(n, p.xp.cols());
    const double inv_k = 1.0 / static_cast<double>(p.k);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (auto j : nb.of_mapped[static_cast<std::size_t>(i)])
            y_bar.row(i) += p.tgt->row(static_cast<Eigen::Index>(j));
        for (auto j : nb.of_target[static_cast<std::size_t>(i)])
            x_bar.row(i) += p.src->row(static_cast<Eigen::Index>(j));
    }
    y_bar *= inv_k;
    x_bar *= inv_k;
    Eigen::MatrixXd g = 2.0 * p.yp.transpose() * p.xp - y_bar.transpose() * p.xp -
                        p.yp.transpose() * x_bar;
    return g / static_cast<double>(n);
}

}  // namespace

double rcsls_objective(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                       const BilingualLexicon& lex, const LinearMap& map, std::size_t k) {
    check_dims(src, tgt, "rcsls_objective");
    UnitInput s(src, "rcsls_objective"), t(tgt, "rcsls_objective");
    if (k < 1 || k > std::min(src.size(), tgt.size()))
        throw ArgumentError("rcsls_objective: k out of range");
    const auto rows = lookup_pairs(*s, *t, lex, "rcsls_objective");
    RcslsProblem p{gather(s->vectors(), rows.src), gather(t->vectors(), rows.tgt), &s->vectors(),
                   &t->vectors(), k};
    return rcsls_eval(p, map.matrix, nullptr);
}

LinearMap rcsls_align(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                      const BilingualLexicon& train_lex, const RcslsConfig& config,
                      const std::optional<LinearMap>& initial, RcslsTrace* trace) {
    validate(config);
    check_dims(src, tgt, "rcsls_align");
    UnitInput s(src, "rcsls_align"), t(tgt, "rcsls_align");
    if (config.k > std::min(src.size(), tgt.size()))
        throw ArgumentError("rcsls_align: k exceeds vocabulary size");
    const auto rows = lookup_pairs(*s, *t, train_lex, "rcsls_align");
    RcslsProblem p{gather(s->vectors(), rows.src), gather(t->vectors(), rows.tgt), &s->vectors(),
                   &t->vectors(), config.k};

    LinearMap start = initial ? *initial : procrustes(p.xp, p.yp);
    if (start.dim() != src.dim()) throw ArgumentError("rcsls_align: initial map dimension mismatch");
    if (trace) *trace = {};

    Eigen::MatrixXd w = start.matrix;
    Neighbourhoods nb;
    double current = rcsls_eval(p, w, &nb);
    if (!std::isfinite(current)) throw DivergenceError("rcsls_align: objective is not finite", 0);
    if (trace) trace->objective.push_back(current);

    Eigen::MatrixXd best_w = w;
    double best = current;
    double lr = config.lr;
    Neighbourhoods fresh;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        if (lr < 1e-4) break;
        Eigen::MatrixXd candidate = w + lr * rcsls_gradient(p, nb);
        if (config.spectral) candidate = project_spectral_ball(candidate);
        const double value = rcsls_eval(p, candidate, &fresh);
        if (!std::isfinite(value)) throw DivergenceError("rcsls_align: objective is not finite", epoch);
        if (trace) trace->objective.push_back(value);
        if (value < current) {
            lr /= 2;
            continue;
        }
        w = std::move(candidate);
        current = value;
        if (epoch % config.neighborhood_refresh == 0) nb = fresh;
        if (value > best) {
            best = value;
            best_w = w;
            if (trace) trace->best_epoch = epoch;
        }
    }
    return {best_w, false};
}

}  // namespace wordmap
