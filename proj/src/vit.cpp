#include "vitcrypt/vit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vitcrypt/cipher.hpp"
#include "vitcrypt/error.hpp"

namespace vitcrypt {

namespace {

constexpr double kNormEps = 1e-6;
constexpr double kInitRange = 0.1;

class ParamStream {
public:
    explicit ParamStream(std::uint64_t seed) : rng_(seed) {}

    double draw() { return -kInitRange + 2.0 * kInitRange * rng_.next_unit(); }

    Matrix matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (double& v : m.values) v = draw();
        return m;
    }
    std::vector<double> vector(std::size_t n) {
        std::vector<double> v(n);
        for (double& x : v) x = draw();
        return v;
    }

private:
    SplitMix64 rng_;
};

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// out = W * x (+ bias)
void matvec(const Matrix& w, std::span<const double> x, std::span<const double> bias, std::span<double> out) {
    for (std::size_t r = 0; r < w.rows; ++r) out[r] = dot(w.row(r), x) + (bias.empty() ? 0.0 : bias[r]);
}

Matrix apply_rows(const Matrix& w, const Matrix& xs, std::span<const double> bias = {}) {
    Matrix out(xs.rows, w.rows);
    for (std::size_t t = 0; t < xs.rows; ++t) matvec(w, xs.row(t), bias, out.row(t));
    return out;
}

Matrix layer_norm(const Matrix& xs, std::span<const double> gamma, std::span<const double> beta) {
    Matrix out(xs.rows, xs.cols);
    const double n = static_cast<double>(xs.cols);
    for (std::size_t t = 0; t < xs.rows; ++t) {
        const auto x = xs.row(t);
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : x) var += (v - mean) * (v - mean);
        var /= n;
        const double inv = 1.0 / std::sqrt(var + kNormEps);
        auto o = out.row(t);
        for (std::size_t i = 0; i < xs.cols; ++i) o[i] = (x[i] - mean) * inv * gamma[i] + beta[i];
    }
    return out;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

void add_in_place(Matrix& acc, const Matrix& delta) {
    for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += delta.values[i];
}

Matrix attention(const EncoderLayer& layer, const Matrix& h, std::size_t heads, ForwardTrace* trace) {
    const std::size_t tokens = h.rows;
    const std::size_t dim = h.cols;
    const std::size_t head_dim = dim / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    const Matrix q = apply_rows(layer.wq, h);
    const Matrix k = apply_rows(layer.wk, h);
    const Matrix v = apply_rows(layer.wv, h);

    Matrix mixed(tokens, dim);
    for (std::size_t head = 0; head < heads; ++head) {
        const std::size_t off = head * head_dim;
        Matrix probs(tokens, tokens);
        for (std::size_t t = 0; t < tokens; ++t) {
            const auto qt = q.row(t).subspan(off, head_dim);
            auto p = probs.row(t);
            double max_score = -INFINITY;
            for (std::size_t s = 0; s < tokens; ++s) {
                p[s] = dot(qt, k.row(s).subspan(off, head_dim)) * scale;
                max_score = std::max(max_score, p[s]);
            }
            double sum = 0.0;
            for (double& x : p) {
                x = std::exp(x - max_score);
                sum += x;
            }
            for (double& x : p) x /= sum;

            auto out = mixed.row(t).subspan(off, head_dim);
            for (std::size_t s = 0; s < tokens; ++s) {
                const auto vs = v.row(s).subspan(off, head_dim);
                for (std::size_t i = 0; i < head_dim; ++i) out[i] += p[s] * vs[i];
            }
        }
        if (trace) trace->attention.push_back(std::move(probs));
    }
    return apply_rows(layer.wo, mixed);
}

Matrix mlp(const EncoderLayer& layer, const Matrix& h) {
    Matrix hidden = apply_rows(layer.mlp_in, h, layer.mlp_in_bias);
    for (double& x : hidden.values) x = gelu(x);
    return apply_rows(layer.mlp_out, hidden, layer.mlp_out_bias);
}

void check_patches(const ToyVit& model, const PatchSequence& patches) {
    if (patches.cols != model.config.patch_dim()) {
        throw ConfigError("patch length " + std::to_string(patches.cols) + " does not match model patch dim " +
                          std::to_string(model.config.patch_dim()));
    }
    if (patches.rows == 0 || patches.rows + 1 != model.position.rows) {
        throw ConfigError("model expects " + std::to_string(model.position.rows - 1) + " patches, got " +
                          std::to_string(patches.rows));
    }
}

}  // namespace

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ConfigError("matrix shapes differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

ToyVit init_toy_vit(std::uint64_t seed, const ToyVitConfig& config) {
    if (config.dim == 0 || config.heads == 0 || config.dim % config.heads != 0) {
        throw ConfigError("model dim " + std::to_string(config.dim) + " is not divisible by " +
                          std::to_string(config.heads) + " heads");
    }
    if (config.block_size == 0 || config.patches == 0 || (config.channels != 1 && config.channels != 3)) {
        throw ConfigError("invalid patch geometry");
    }

    ParamStream stream(seed);
    const std::size_t d = config.dim;
    ToyVit model;
    model.config = config;
    model.embed = stream.matrix(d, config.patch_dim());
    model.embed_bias = stream.vector(d);
    model.class_token = stream.vector(d);
    model.position = stream.matrix(config.patches + 1, d);
    model.layers.reserve(config.layers);
    for (std::size_t l = 0; l < config.layers; ++l) {
        EncoderLayer layer;
        layer.norm1_gamma = stream.vector(d);
        layer.norm1_beta = stream.vector(d);
        layer.wq = stream.matrix(d, d);
        layer.wk = stream.matrix(d, d);
        layer.wv = stream.matrix(d, d);
        layer.wo = stream.matrix(d, d);
        layer.norm2_gamma = stream.vector(d);
        layer.norm2_beta = stream.vector(d);
        layer.mlp_in = stream.matrix(config.mlp_dim(), d);
        layer.mlp_in_bias = stream.vector(config.mlp_dim());
        layer.mlp_out = stream.matrix(d, config.mlp_dim());
        layer.mlp_out_bias = stream.vector(d);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

PatchSequence patches_from_image(const Image& img, std::size_t block_size) {
    const BlockGrid grid = divide_blocks(img, block_size);
    PatchSequence patches(grid.count(), block_size * block_size * img.channels());
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const auto data = grid.blocks[i].data();
        auto row = patches.row(i);
        for (std::size_t k = 0; k < data.size(); ++k) row[k] = data[k] / 255.0;
    }
    return patches;
}

Matrix embed_patches(const ToyVit& model, const PatchSequence& patches) {
    if (patches.cols != model.config.patch_dim()) throw ConfigError("patch length does not match model");
    return apply_rows(model.embed, patches, model.embed_bias);
}

Matrix encoder_forward(const ToyVit& model, const PatchSequence& patches, bool use_position, ForwardTrace* trace) {
    check_patches(model, patches);
    const std::size_t d = model.config.dim;

    Matrix tokens(patches.rows + 1, d);
    std::copy(model.class_token.begin(), model.class_token.end(), tokens.row(0).begin());
    const Matrix embedded = embed_patches(model, patches);
    std::copy(embedded.values.begin(), embedded.values.end(), tokens.values.begin() + static_cast<std::ptrdiff_t>(d));
    if (use_position) add_in_place(tokens, model.position);

    for (const EncoderLayer& layer : model.layers) {
        add_in_place(tokens, attention(layer, layer_norm(tokens, layer.norm1_gamma, layer.norm1_beta),
                                       model.config.heads, trace));
        add_in_place(tokens, mlp(layer, layer_norm(tokens, layer.norm2_gamma, layer.norm2_beta)));
    }
    return tokens;
}

PatchSequence permute_patches(const PatchSequence& patches, std::span<const std::size_t> perm) {
    if (perm.size() != patches.rows) throw PermutationError("patch permutation has wrong length");
    require_permutation(perm, "patch permutation");
    PatchSequence out(patches.rows, patches.cols);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        std::copy_n(patches.row(perm[j]).begin(), patches.cols, out.row(j).begin());
    }
    return out;
}

double check_property1(const ToyVit& model, const PatchSequence& patches, std::span<const std::size_t> perm,
                       PositionHandling handling) {
    const PatchSequence permuted = permute_patches(patches, perm);
    const bool use_position = handling != PositionHandling::None;

    const Matrix reference = encoder_forward(model, patches, use_position);
    Matrix shuffled_out;
    if (handling == PositionHandling::CoPermuted) {
        ToyVit moved = model;
        for (std::size_t j = 0; j < perm.size(); ++j) {
            std::copy_n(model.position.row(perm[j] + 1).begin(), model.config.dim, moved.position.row(j + 1).begin());
        }
        shuffled_out = encoder_forward(moved, permuted, true);
    } else {
        shuffled_out = encoder_forward(model, permuted, use_position);
    }

    double worst = 0.0;
    for (std::size_t j = 0; j <= perm.size(); ++j) {
        const std::size_t src = j == 0 ? 0 : perm[j - 1] + 1;
        const auto a = shuffled_out.row(j);
        const auto b = reference.row(src);
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

Matrix absorb_shuffle(const Matrix& embed, std::span<const std::size_t> perm) {
    if (perm.size() != embed.cols) throw PermutationError("shuffle length does not match embedding width");
    require_permutation(perm, "pixel shuffle");
    Matrix out(embed.rows, embed.cols);
    for (std::size_t r = 0; r < embed.rows; ++r) {
        for (std::size_t k = 0; k < embed.cols; ++k) out(r, k) = embed(r, perm[k]);
    }
    return out;
}

Permutation patch_shuffle_permutation(const EncryptionKey& key, std::size_t channels) {
    return expand_to_samples(block_pixel_gather(key.block_size, key.subblock_perm), channels);
}

PatchSequence shuffle_patches(const PatchSequence& patches, std::span<const std::size_t> perm) {
    if (perm.size() != patches.cols) throw PermutationError("shuffle length does not match patch length");
    require_permutation(perm, "pixel shuffle");
    PatchSequence out(patches.rows, patches.cols);
    for (std::size_t r = 0; r < patches.rows; ++r) {
        const auto src = patches.row(r);
        auto dst = out.row(r);
        for (std::size_t k = 0; k < perm.size(); ++k) dst[k] = src[perm[k]];
    }
    return out;
}

Property2Result check_property2(const ToyVit& model, const PatchSequence& patches, const EncryptionKey& encrypt_key,
                                const EncryptionKey& adapt_key) {
    for (const EncryptionKey* key : {&encrypt_key, &adapt_key}) {
        if (key->block_size != model.config.block_size) {
            throw GeometryError("key block size " + std::to_string(key->block_size) +
                                " does not match model patch size " + std::to_string(model.config.block_size));
        }
    }
    const std::size_t c = model.config.channels;
    const PatchSequence encrypted = shuffle_patches(patches, patch_shuffle_permutation(encrypt_key, c));

    ToyVit adapted = model;
    adapted.embed = absorb_shuffle(model.embed, patch_shuffle_permutation(adapt_key, c));

    Property2Result result;
    result.embedding_deviation = max_abs_diff(embed_patches(adapted, encrypted), embed_patches(model, patches));
    result.forward_deviation =
        max_abs_diff(encoder_forward(adapted, encrypted, true), encoder_forward(model, patches, true));
    return result;
}

double check_encrypted_image(const ToyVit& model, const Image& plain, const EncryptionKey& key) {
    if (key.block_size != model.config.block_size || plain.channels() != model.config.channels) {
        throw GeometryError("model patch geometry does not match key and image");
    }
    const PatchSequence plain_patches = patches_from_image(plain, key.block_size);
    const PatchSequence cipher_patches = patches_from_image(encrypt(plain, key), key.block_size);

    ToyVit adapted = model;
    adapted.embed = absorb_shuffle(model.embed, patch_shuffle_permutation(key, model.config.channels));

    const Matrix reference = encoder_forward(model, plain_patches, false);
    const Matrix observed = encoder_forward(adapted, cipher_patches, false);
    double worst = 0.0;
    for (std::size_t j = 0; j < observed.rows; ++j) {
        const std::size_t src = j == 0 ? 0 : key.block_perm[j - 1] + 1;
        const auto a = observed.row(j);
        const auto b = reference.row(src);
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace vitcrypt
