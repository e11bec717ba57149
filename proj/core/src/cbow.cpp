#include "wordmap/cbow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "wordmap/errors.hpp"

namespace wordmap {

void validate(const CbowConfig& c) {
    if (c.dim < 1 || c.negatives < 1 || c.window < 1 || c.batch_size < 1 || c.min_count < 1 ||
        c.threads < 1)
        throw ArgumentError("cbow: dim, negatives, window, batch_size, min_count, threads must be >= 1");
    if (!(c.learning_rate > 0)) throw ArgumentError("cbow: learning_rate must be > 0");
    if (c.sample < 0) throw ArgumentError("cbow: sample must be >= 0");
}

namespace {

struct PlainAccess {
    static double load(const double* p) { return *p; }
    static void store(double* p, double v) { *p = v; }
};

// Lock-free shared updates: each access is atomic, read-modify-write is not.
struct RelaxedAccess {
    static double load(const double* p) {
        return std::atomic_ref<double>(*const_cast<double*>(p)).load(std::memory_order_relaxed);
    }
    static void store(double* p, double v) {
        std::atomic_ref<double>(*p).store(v, std::memory_order_relaxed);
    }
};

double log_sigmoid(double x) {
    return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

struct MonitorItem {
    std::uint32_t target;
    std::vector<std::uint32_t> context;
    std::vector<std::uint32_t> negatives;
};

}  // namespace

struct CbowTrainer::State {
    CbowConfig cfg;
    std::shared_ptr<const Vocabulary> vocab;
    std::vector<std::vector<std::uint32_t>> sentences;
    std::vector<std::pair<std::size_t, std::size_t>> jobs;  // sentence ranges
    std::size_t tokens = 0;
    std::size_t dim = 0;
    std::vector<double> in;
    std::vector<double> out;
    std::vector<std::uint8_t> frozen;
    std::vector<double> neg_cdf;
    std::vector<double> keep_prob;
    std::vector<MonitorItem> monitor;
    std::mt19937_64 rng;
    std::size_t epochs_done = 0;
    std::atomic<std::size_t> processed{0};

    std::uint32_t draw_negative(std::mt19937_64& g) const {
        std::uniform_real_distribution<double> u(0.0, neg_cdf.back());
        auto it = std::upper_bound(neg_cdf.begin(), neg_cdf.end(), u(g));
        auto idx = static_cast<std::size_t>(it - neg_cdf.begin());
        return static_cast<std::uint32_t>(std::min(idx, neg_cdf.size() - 1));
    }

    double learning_rate() const {
        const double total = static_cast<double>(cfg.epochs * tokens);
        const double done = static_cast<double>(processed.load(std::memory_order_relaxed));
        return cfg.learning_rate * std::max(0.0, 1.0 - done / total);
    }

    template <class Access>
    void train_job(std::size_t first, std::size_t last, std::mt19937_64& g);
};

template <class Access>
void CbowTrainer::State::train_job(std::size_t first, std::size_t last, std::mt19937_64& g) {
    const double lr = learning_rate();
    const std::size_t d = dim;
    std::vector<double> h(d), neu1e(d);
    std::vector<std::uint32_t> sent;
    std::uniform_int_distribution<std::size_t> radius(1, cfg.window);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::size_t job_tokens = 0;

    for (std::size_t s = first; s < last; ++s) {
        job_tokens += sentences[s].size();
        if (cfg.sample > 0) {
            sent.clear();
            for (auto w : sentences[s])
                if (keep_prob[w] >= 1.0 || coin(g) < keep_prob[w]) sent.push_back(w);
        } else {
            sent = sentences[s];
        }
        const std::size_t n = sent.size();
        for (std::size_t pos = 0; pos < n; ++pos) {
            const std::size_t b = radius(g);
            const std::size_t lo = pos >= b ? pos - b : 0;
            const std::size_t hi = std::min(n - 1, pos + b);
            std::size_t count = 0;
            std::fill(h.begin(), h.end(), 0.0);
            for (std::size_t c = lo; c <= hi; ++c) {
                if (c == pos) continue;
                const double* row = &in[sent[c] * d];
                for (std::size_t k = 0; k < d; ++k) h[k] += Access::load(row + k);
                ++count;
            }
            if (count == 0) continue;
            for (auto& x : h) x /= static_cast<double>(count);
            std::fill(neu1e.begin(), neu1e.end(), 0.0);

            const std::uint32_t word = sent[pos];
            for (std::size_t t = 0; t <= cfg.negatives; ++t) {
                std::uint32_t target = word;
                double label = 1.0;
                if (t > 0) {
                    target = draw_negative(g);
                    if (target == word) continue;
                    label = 0.0;
                }
                double* o = &out[target * d];
                double f = 0;
                for (std::size_t k = 0; k < d; ++k) f += h[k] * Access::load(o + k);
                const double grad = (label - sigmoid(f)) * lr;
                for (std::size_t k = 0; k < d; ++k) {
                    const double ok = Access::load(o + k);
                    neu1e[k] += grad * ok;
                    Access::store(o + k, ok + grad * h[k]);
                }
            }
            for (std::size_t c = lo; c <= hi; ++c) {
                if (c == pos || frozen[sent[c]]) continue;
                double* row = &in[sent[c] * d];
                for (std::size_t k = 0; k < d; ++k)
                    Access::store(row + k, Access::load(row + k) + neu1e[k]);
            }
        }
    }
    processed.fetch_add(job_tokens, std::memory_order_relaxed);
}

CbowTrainer::CbowTrainer(std::span<const Sentence> corpus, const CbowConfig& config,
                         const WarmStart* init)
    : state_(std::make_unique<State>()) {
    validate(config);
    auto& st = *state_;
    st.cfg = config;
    st.dim = config.dim;
    st.vocab = std::make_shared<const Vocabulary>(build_vocabulary(corpus, config.min_count));
    const auto& vocab = *st.vocab;
    if (vocab.empty()) throw TrainingError("cbow: corpus has no words with count >= min_count");
    if (init && init->embedding.dim() != config.dim)
        throw ArgumentError("cbow: init dimension " + std::to_string(init->embedding.dim()) +
                            " != " + std::to_string(config.dim));

    for (const auto& s : corpus) {
        std::vector<std::uint32_t> enc;
        enc.reserve(s.tokens.size());
        for (const auto& t : s.tokens)
            if (auto i = vocab.index_of(t)) enc.push_back(static_cast<std::uint32_t>(*i));
        if (enc.empty()) continue;
        st.tokens += enc.size();
        st.sentences.push_back(std::move(enc));
    }

    // Jobs: consecutive sentences up to batch_size tokens.
    std::size_t start = 0, acc = 0;
    for (std::size_t s = 0; s < st.sentences.size(); ++s) {
        const std::size_t len = st.sentences[s].size();
        if (acc > 0 && acc + len > config.batch_size) {
            st.jobs.emplace_back(start, s);
            start = s;
            acc = 0;
        }
        acc += len;
    }
    if (start < st.sentences.size()) st.jobs.emplace_back(start, st.sentences.size());

    const std::size_t V = vocab.size(), d = config.dim;
    st.in.assign(V * d, 0.0);
    st.out.assign(V * d, 0.0);
    st.frozen.assign(V, 0);
    std::mt19937_64 init_rng(config.seed);
    const double bound = 0.5 / static_cast<double>(d);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (std::size_t i = 0; i < V; ++i) {
        std::optional<std::size_t> src;
        if (init) src = init->embedding.vocab().index_of(vocab.word(i));
        if (src) {
            auto row = init->embedding.row(*src);
            for (std::size_t k = 0; k < d; ++k) st.in[i * d + k] = row(static_cast<Eigen::Index>(k));
            const bool copied = init->copied.empty() || init->copied[*src];
            st.frozen[i] = config.freeze_pretrained && copied;
        } else {
            for (std::size_t k = 0; k < d; ++k) st.in[i * d + k] = uniform(init_rng);
        }
    }

    st.neg_cdf.resize(V);
    double acc_p = 0;
    for (std::size_t i = 0; i < V; ++i) {
        acc_p += std::pow(static_cast<double>(vocab.count(i)), 0.75);
        st.neg_cdf[i] = acc_p;
    }
    st.keep_prob.assign(V, 1.0);
    if (config.sample > 0) {
        const double thr = config.sample * static_cast<double>(st.tokens);
        for (std::size_t i = 0; i < V; ++i) {
            const double f = static_cast<double>(vocab.count(i));
            st.keep_prob[i] = std::min(1.0, (std::sqrt(f / thr) + 1.0) * thr / f);
        }
    }

    // Fixed monitor sample, independent of the training stream.
    std::mt19937_64 mon_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    for (std::size_t s = 0; s < st.sentences.size(); ++s)
        if (st.sentences[s].size() >= 2)
            for (std::size_t p = 0; p < st.sentences[s].size(); ++p) positions.emplace_back(s, p);
    if (positions.size() > config.monitor_tokens) {
        std::uniform_int_distribution<std::size_t> pick(0, positions.size() - 1);
        std::vector<std::pair<std::size_t, std::size_t>> chosen;
        for (std::size_t i = 0; i < config.monitor_tokens; ++i) chosen.push_back(positions[pick(mon_rng)]);
        positions = std::move(chosen);
    }
    for (auto [s, p] : positions) {
        const auto& sent = st.sentences[s];
        MonitorItem item{sent[p], {}, {}};
        const std::size_t lo = p >= config.window ? p - config.window : 0;
        const std::size_t hi = std::min(sent.size() - 1, p + config.window);
        for (std::size_t c = lo; c <= hi; ++c)
            if (c != p) item.context.push_back(sent[c]);
        if (V > 1) {
            while (item.negatives.size() < config.negatives) {
                auto n = st.draw_negative(mon_rng);
                if (n != item.target) item.negatives.push_back(n);
            }
        }
        st.monitor.push_back(std::move(item));
    }

    st.rng.seed(config.seed + 1);
}

CbowTrainer::~CbowTrainer() = default;

const Vocabulary& CbowTrainer::vocab() const { return *state_->vocab; }
std::size_t CbowTrainer::epochs_done() const noexcept { return state_->epochs_done; }
std::size_t CbowTrainer::corpus_tokens() const noexcept { return state_->tokens; }

void CbowTrainer::run_epoch() {
    auto& st = *state_;
    const unsigned threads = std::min<unsigned>(st.cfg.threads, static_cast<unsigned>(st.jobs.size()));
    if (threads <= 1) {
        for (auto [first, last] : st.jobs) st.train_job<PlainAccess>(first, last, st.rng);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                std::seed_seq seq{st.cfg.seed, static_cast<std::uint64_t>(st.epochs_done),
                                  static_cast<std::uint64_t>(w)};
                std::mt19937_64 g(seq);
                for (std::size_t j = next++; j < st.jobs.size(); j = next++)
                    st.train_job<RelaxedAccess>(st.jobs[j].first, st.jobs[j].second, g);
            });
        }
    }
    ++st.epochs_done;
    for (double x : st.in)
        if (!std::isfinite(x)) throw DivergenceError("cbow: non-finite input vector", st.epochs_done);
}

double CbowTrainer::monitor_loss() const {
    const auto& st = *state_;
    if (st.monitor.empty()) return 0.0;
    const std::size_t d = st.dim;
    Eigen::Map<const Matrix> in(st.in.data(), static_cast<Eigen::Index>(st.vocab->size()),
                                static_cast<Eigen::Index>(d));
    Eigen::Map<const Matrix> out(st.out.data(), static_cast<Eigen::Index>(st.vocab->size()),
                                 static_cast<Eigen::Index>(d));
    double total = 0;
    Eigen::RowVectorXd h(static_cast<Eigen::Index>(d));
    for (const auto& item : st.monitor) {
        h.setZero();
        for (auto c : item.context) h += in.row(c);
        h /= static_cast<double>(item.context.size());
        double loss = -log_sigmoid(h.dot(out.row(item.target)));
        for (auto n : item.negatives) loss -= log_sigmoid(-h.dot(out.row(n)));
        total += loss;
    }
    return total / static_cast<double>(st.monitor.size());
}

EmbeddingMatrix CbowTrainer::embedding() const {
    const auto& st = *state_;
    Matrix m = Eigen::Map<const Matrix>(st.in.data(), static_cast<Eigen::Index>(st.vocab->size()),
                                        static_cast<Eigen::Index>(st.dim));
    return EmbeddingMatrix(st.vocab, std::move(m));
}

EmbeddingMatrix CbowTrainer::context_vectors() const {
    const auto& st = *state_;
    Matrix m = Eigen::Map<const Matrix>(st.out.data(), static_cast<Eigen::Index>(st.vocab->size()),
                                        static_cast<Eigen::Index>(st.dim));
    return EmbeddingMatrix(st.vocab, std::move(m));
}

CbowResult train_cbow(std::span<const Sentence> corpus, const CbowConfig& config,
                      const WarmStart* init) {
    CbowTrainer trainer(corpus, config, init);
    CbowResult result;
    result.monitor_loss.push_back(trainer.monitor_loss());
    for (std::size_t e = 0; e < config.epochs; ++e) {
        trainer.run_epoch();
        result.monitor_loss.push_back(trainer.monitor_loss());
    }
    result.embedding = trainer.embedding();
    return result;
}

CbowResult train_cbow(std::span<const Sentence> corpus, const CbowConfig& config,
                      const EmbeddingMatrix& init) {
    WarmStart ws{init, {}, 1.0};
    return train_cbow(corpus, config, &ws);
}

}  // namespace wordmap
