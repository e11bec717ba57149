#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wordmap/corpus.hpp"
#include "wordmap/embedding.hpp"

namespace wordmap {

struct CbowConfig {
    std::size_t dim = 300;
    std::size_t epochs = 5;
    std::size_t negatives = 8;
    std::size_t window = 5;
    /// Tokens per job. The learning rate is recomputed at job boundaries and
    /// jobs are the unit of work handed to workers.
    std::size_t batch_size = 3000;
    double learning_rate = 0.025;
    std::uint64_t min_count = 5;
    std::uint64_t seed = 1;
    /// Frequent-word subsampling threshold; 0 disables it.
    double sample = 0.0;
    /// Keep rows copied from the pretrained embedding fixed.
    bool freeze_pretrained = false;
    /// 1 is the deterministic path. More workers update shared parameters
    /// without locking and give up run-to-run reproducibility.
    unsigned threads = 1;
    /// Size of the fixed token sample used to track the loss.
    std::size_t monitor_tokens = 2000;
};

/// Throws ArgumentError for zero-valued sizes or a non-positive learning rate.
void validate(const CbowConfig& config);

/// CBOW with negative sampling over an index-encoded corpus.
///
/// For each target token the context is the mean of the input vectors in a
/// window whose radius is drawn uniformly from [1, window]. Negatives come
/// from the unigram distribution raised to 0.75. The learning rate decays
/// linearly to zero over epochs * tokens.
class CbowTrainer {
public:
    /// The vocabulary is built from the corpus with config.min_count. Rows of
    /// words found in `init` start from the init vector; the rest start
    /// uniform in [-0.5/dim, 0.5/dim]. Throws TrainingError on an empty
    /// corpus and ArgumentError when init's dimension differs.
    CbowTrainer(std::span<const Sentence> corpus, const CbowConfig& config,
                const WarmStart* init = nullptr);
    ~CbowTrainer();
    CbowTrainer(const CbowTrainer&) = delete;
    CbowTrainer& operator=(const CbowTrainer&) = delete;

    const Vocabulary& vocab() const;
    std::size_t epochs_done() const noexcept;
    std::size_t corpus_tokens() const noexcept;

    /// One pass over the corpus. Throws DivergenceError on non-finite weights.
    void run_epoch();

    /// Mean negative-sampling loss on the fixed monitor sample (full window,
    /// pre-drawn negatives). Not a function of training randomness.
    double monitor_loss() const;

    /// Input vectors only.
    EmbeddingMatrix embedding() const;

    /// Output (negative-sampling) vectors, same row order.
    EmbeddingMatrix context_vectors() const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

struct CbowResult {
    EmbeddingMatrix embedding;
    /// monitor_loss()[e] is the monitor loss after e epochs; index 0 is the
    /// initial model.
    std::vector<double> monitor_loss;
};

CbowResult train_cbow(std::span<const Sentence> corpus, const CbowConfig& config,
                      const WarmStart* init = nullptr);

/// Warm start from any embedding: every row found in `init` counts as copied.
CbowResult train_cbow(std::span<const Sentence> corpus, const CbowConfig& config,
                      const EmbeddingMatrix& init);

}  // namespace wordmap
