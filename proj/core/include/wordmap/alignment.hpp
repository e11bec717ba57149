#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wordmap/embedding.hpp"
#include "wordmap/lexicon.hpp"
#include "wordmap/linear_map.hpp"

namespace wordmap {

// ---------------------------------------------------------------------------
// Supervised orthogonal Procrustes.

/// Orthogonal W minimising ||W X - Y||_F where row i of `src_rows` / `tgt_rows`
/// is a paired (x_i, y_i). W = U V^T with U S V^T = SVD(Y^T X). Throws
/// AlignmentError on zero pairs and ArgumentError on mismatched shapes.
LinearMap procrustes(const Matrix& src_rows, const Matrix& tgt_rows);

/// Procrustes over the lexicon pairs found in both vocabularies. Inputs that
/// are not unit-normalised are normalised first, with a warning. Warns when
/// fewer pairs than dimensions are available.
LinearMap procrustes(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                     const BilingualLexicon& train_lex);

// ---------------------------------------------------------------------------
// Synthetic dictionary induction.

struct ScoredPair {
    std::size_t src = 0;
    std::size_t tgt = 0;
    double csls = 0.0;
};

/// Mutual CSLS nearest neighbours among the first `max_rank` rows of each
/// side (rows are taken as frequency-ordered). Neighbourhood penalties are
/// computed within those rows. Rows are unit-normalised internally.
/// max_rank is clamped to both sizes; throws ArgumentError when k exceeds it.
std::vector<ScoredPair> mutual_csls_pairs(const EmbeddingMatrix& src_mapped,
                                          const EmbeddingMatrix& tgt, std::size_t k,
                                          std::size_t max_rank);

/// The mutual pairs above as a word lexicon.
BilingualLexicon build_synthetic_lexicon(const EmbeddingMatrix& src_mapped,
                                         const EmbeddingMatrix& tgt, std::size_t k,
                                         std::size_t max_rank);

/// Unsupervised model-selection score of a map: mean CSLS over the mutual
/// pairs it induces, -infinity when there are none.
double unsupervised_criterion(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                              const LinearMap& map, std::size_t k, std::size_t max_rank);

struct RefineStep {
    std::size_t pairs = 0;
    double criterion = 0.0;
};

struct RefineTrace {
    std::vector<RefineStep> steps;  // steps[0] scores the initial map
    std::size_t best_step = 0;
};

/// Alternates {induce mutual pairs, Procrustes on them} `iterations` times
/// and returns the iterate with the best unsupervised criterion. The initial
/// map competes only when it is orthogonal. Stops early, with a warning, when
/// an iteration induces no pairs.
LinearMap refine(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt, const LinearMap& initial,
                 std::size_t iterations, std::size_t k = 10, std::size_t max_rank = 15000,
                 RefineTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Adversarial alignment.

struct AdversarialConfig {
    std::size_t disc_hidden = 2048;
    std::size_t disc_layers = 2;
    double disc_dropout = 0.1;  // applied to discriminator inputs
    double smoothing = 0.2;
    double map_lr = 0.1;
    double disc_lr = 0.1;
    std::size_t epochs = 5;
    std::size_t epoch_size = 1000000;  // samples per epoch
    std::size_t batch_size = 32;
    std::size_t disc_steps = 5;  // discriminator updates per mapping update
    double ortho_beta = 0.01;
    std::size_t vocab_cap = 50000;
    double lr_decay = 0.98;
    double lr_shrink = 0.5;  // applied when the criterion drops
    std::size_t criterion_k = 10;
    std::size_t criterion_max_rank = 15000;
    /// Train only the discriminator against the initial map.
    bool freeze_map = false;
    std::uint64_t seed = 1;
};

void validate(const AdversarialConfig& config);

struct AdversarialEpoch {
    double disc_loss = 0.0;
    double map_loss = 0.0;
    double disc_accuracy = 0.0;
    double criterion = 0.0;
};

struct AdversarialTrace {
    std::vector<AdversarialEpoch> epochs;
    std::size_t best_epoch = 0;
};

/// Mapper W (starting from `initial`, identity by default) against a
/// discriminator telling mapped source rows (label 1 - smoothing) from target
/// rows (label smoothing), both drawn from the first vocab_cap rows. After
/// each mapping update W <- (1 + beta) W - beta (W W^T) W. Returns the epoch
/// snapshot with the best unsupervised criterion, projected exactly onto the
/// orthogonal group. Throws DivergenceError on a non-finite loss.
LinearMap adversarial_align(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                            const AdversarialConfig& config,
                            const std::optional<LinearMap>& initial = std::nullopt,
                            AdversarialTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Relaxed CSLS (retrieval criterion).

struct RcslsConfig {
    std::size_t k = 10;
    double lr = 1.0;
    std::size_t epochs = 10;
    std::size_t neighborhood_refresh = 1;
    bool spectral = true;
    std::uint64_t seed = 1;
};

void validate(const RcslsConfig& config);

/// mean_i [ 2 y_i.W x_i - mean_{y in N_k(W x_i)} y.W x_i
///                       - mean_{x in N_k(y_i)} y_i.W x ]
/// with neighbourhoods over the whole target / mapped source vocabularies.
double rcsls_objective(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                       const BilingualLexicon& lex, const LinearMap& map, std::size_t k);

struct RcslsTrace {
    std::vector<double> objective;  // objective[0] is the initial map
    std::size_t best_epoch = 0;
};

/// Full-batch gradient ascent on rcsls_objective from `initial` (Procrustes
/// on the lexicon by default). A step that lowers the objective is undone
/// and the learning rate halved. With `spectral`, W is projected into the
/// unit spectral ball after each step. Returns the best iterate; the
/// orthogonal flag is left unset. Throws AlignmentError on an empty lexicon
/// and DivergenceError on a non-finite objective.
LinearMap rcsls_align(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                      const BilingualLexicon& train_lex, const RcslsConfig& config,
                      const std::optional<LinearMap>& initial = std::nullopt,
                      RcslsTrace* trace = nullptr);

}  // namespace wordmap
