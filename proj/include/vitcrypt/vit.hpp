#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vitcrypt/image.hpp"
#include "vitcrypt/keys.hpp"

namespace vitcrypt {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Largest absolute element-wise difference; throws ConfigError on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

struct ToyVitConfig {
    std::size_t block_size = 8;  // patch side M
    std::size_t channels = 3;
    std::size_t dim = 64;
    std::size_t heads = 4;
    std::size_t layers = 2;
    std::size_t patches = 16;

    std::size_t patch_dim() const noexcept { return block_size * block_size * channels; }
    std::size_t mlp_dim() const noexcept { return 4 * dim; }
};

struct EncoderLayer {
    std::vector<double> norm1_gamma, norm1_beta;
    Matrix wq, wk, wv, wo;  // d x d, applied as W * x
    std::vector<double> norm2_gamma, norm2_beta;
    Matrix mlp_in;  // 4d x d
    std::vector<double> mlp_in_bias;
    Matrix mlp_out;  // d x 4d
    std::vector<double> mlp_out_bias;
};

/// Minimal pre-norm ViT encoder: linear patch embedding, class token,
/// learned position embeddings, L blocks of multi-head attention + GELU MLP.
struct ToyVit {
    ToyVitConfig config;
    Matrix embed;  // d x P
    std::vector<double> embed_bias;
    std::vector<double> class_token;
    Matrix position;  // (n + 1) x d, row 0 belongs to the class token
    std::vector<EncoderLayer> layers;
};

/// Patch vectors, one per row (n x P), pixel values scaled to [0, 1].
using PatchSequence = Matrix;

/// Every parameter i.i.d. uniform in [-0.1, 0.1) drawn from SplitMix64(seed) in
/// this order: embed, embed_bias, class_token, position, then per layer
/// norm1_gamma, norm1_beta, wq, wk, wv, wo, norm2_gamma, norm2_beta,
/// mlp_in, mlp_in_bias, mlp_out, mlp_out_bias. Matrices row-major.
ToyVit init_toy_vit(std::uint64_t seed, const ToyVitConfig& config);

/// Row-major blocks of `block_size`, each flattened row-major with channels
/// interleaved (the cipher's pixel order), divided by 255.
PatchSequence patches_from_image(const Image& img, std::size_t block_size);

/// Attention probabilities recorded during a forward pass: one
/// (n + 1) x (n + 1) matrix per layer and head, layer-major.
struct ForwardTrace {
    std::vector<Matrix> attention;
};

/// Patch tokens only (no class token, no position): row i = E * p_i + bias.
Matrix embed_patches(const ToyVit& model, const PatchSequence& patches);

/// Returns (n + 1) x d output tokens; row 0 is the class token.
Matrix encoder_forward(const ToyVit& model, const PatchSequence& patches, bool use_position,
                       ForwardTrace* trace = nullptr);

/// out row j = patches row perm[j].
PatchSequence permute_patches(const PatchSequence& patches, std::span<const std::size_t> perm);

enum class PositionHandling {
    None,        // position embeddings disabled
    CoPermuted,  // position embeddings of patch tokens travel with their patches
    Fixed,       // position embeddings stay put (control: breaks invariance)
};

/// Runs the encoder on the original and the permuted sequence and returns the
/// largest deviation between output token j of the permuted run and output
/// token perm[j] of the original run (class tokens compared directly).
double check_property1(const ToyVit& model, const PatchSequence& patches, std::span<const std::size_t> perm,
                       PositionHandling handling);

/// E' with E'[:, k] = E[:, perm[k]], so that E' * shuffle(v) == E * v for the
/// gather shuffle shuffle(v)[k] = v[perm[k]].
Matrix absorb_shuffle(const Matrix& embed, std::span<const std::size_t> perm);

/// Sample-level gather permutation of a full patch induced by the key's K2.
Permutation patch_shuffle_permutation(const EncryptionKey& key, std::size_t channels);

/// Applies `perm` as a gather to every patch row.
PatchSequence shuffle_patches(const PatchSequence& patches, std::span<const std::size_t> perm);

struct Property2Result {
    double embedding_deviation = 0.0;  // max |E' shuffle(p) + b - (E p + b)|
    double forward_deviation = 0.0;    // max over encoder outputs, position embeddings on
};

/// Patches are pixel-shuffled with `encrypt_key`'s K2 and fed to a copy of the
/// model whose embedding absorbed `adapt_key`'s K2. Matching keys should
/// reproduce the plain model's outputs.
Property2Result check_property2(const ToyVit& model, const PatchSequence& patches, const EncryptionKey& encrypt_key,
                                const EncryptionKey& adapt_key);
inline Property2Result check_property2(const ToyVit& model, const PatchSequence& patches,
                                       const EncryptionKey& key) {
    return check_property2(model, patches, key, key);
}

/// Both properties together on a real ciphertext: the image is encrypted with
/// the full cipher, the adapted model (E' from K2, no position embeddings)
/// runs on the ciphertext patches, and output token i + 1 is compared with
/// the plain run's token K1[i] + 1.
double check_encrypted_image(const ToyVit& model, const Image& plain, const EncryptionKey& key);

}  // namespace vitcrypt
