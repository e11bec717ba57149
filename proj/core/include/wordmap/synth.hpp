#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>

#include "wordmap/embedding.hpp"
#include "wordmap/lexicon.hpp"
#include "wordmap/linear_map.hpp"

namespace wordmap {

/// Distribution of the source cloud before unit normalisation.
enum class CloudShape {
    /// Standard normal in every coordinate. Rotation invariant, so only the
    /// supervised methods can recover the map.
    isotropic,
    /// Normal with a random mean and geometrically decaying per-axis scale.
    /// No non-trivial orthogonal symmetry, so the map is identifiable from
    /// the distributions alone.
    anisotropic,
};

CloudShape parse_cloud_shape(std::string_view name);
std::string_view to_string(CloudShape shape);

/// Source/target embedding pair with a known orthogonal map Q:
/// tgt_i = unit(Q src_i + eps_i), eps_i ~ N(0, noise_sigma^2 I).
struct SynthInstance {
    EmbeddingMatrix src;    // words s0 .. s{n-1}
    EmbeddingMatrix tgt;    // words t0 .. t{n-1}
    LinearMap truth;        // Q, orthogonal flag set
    BilingualLexicon lexicon;  // (s_i, t_i)
    double noise_sigma = 0.0;
};

/// Deterministic per seed. Q is the orthogonal factor of a seeded Gaussian
/// matrix, so det(Q) may be -1. Throws ArgumentError when n < d, d < 1 or
/// noise_sigma < 0.
SynthInstance generate(std::size_t n, std::size_t d, double noise_sigma, std::uint64_t seed,
                       CloudShape shape = CloudShape::isotropic);

struct HoldoutSplit {
    BilingualLexicon train;
    BilingualLexicon test;
};

/// Seeded disjoint train/test samples of the lexicon pairs. Throws
/// ArgumentError when n_train + n_test exceeds the lexicon size.
HoldoutSplit holdout_split(const BilingualLexicon& lex, std::size_t n_train, std::size_t n_test,
                           std::uint64_t seed);

/// Writes src.vec, tgt.vec, lexicon.txt and truth.map into `dir`.
void write_instance(const std::filesystem::path& dir, const SynthInstance& inst);

}  // namespace wordmap
