#include "vitcrypt/cipher.hpp"

#include <algorithm>
#include <string>

#include "vitcrypt/error.hpp"

namespace vitcrypt {

namespace {

void check_image_against_key(const Image& img, const EncryptionKey& key) {
    if (img.height() != key.height || img.width() != key.width) {
        throw GeometryError("image is " + std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                            " but key is for " + std::to_string(key.height) + "x" + std::to_string(key.width));
    }
}

void check_subblock_perm(std::size_t block_size, std::span<const std::size_t> subblock_perm) {
    if (block_size < 2 || block_size % 2 != 0) {
        throw GeometryError("block size must be even and at least 2");
    }
    if (subblock_perm.size() != subblock_pixels_for(block_size)) {
        throw GeometryError("K2 has " + std::to_string(subblock_perm.size()) + " entries, a " +
                            std::to_string(block_size) + "x" + std::to_string(block_size) + " block needs " +
                            std::to_string(subblock_pixels_for(block_size)));
    }
    require_permutation(subblock_perm, "K2");
}

Image gather_pixels(const Image& img, std::span<const std::size_t> map) {
    Image out(img.height(), img.width(), img.channels());
    const std::size_t c = img.channels();
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t p = 0; p < map.size(); ++p) {
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(map[p] * c), c,
                    dst.begin() + static_cast<std::ptrdiff_t>(p * c));
    }
    return out;
}

}  // namespace

std::size_t quadrant_pixel(std::size_t block_size, Quadrant q, std::size_t k) {
    const std::size_t half = block_size / 2;
    const std::size_t qi = static_cast<std::size_t>(q);
    const std::size_t row = (qi / 2) * half + k / half;
    const std::size_t col = (qi % 2) * half + k % half;
    return row * block_size + col;
}

Permutation block_pixel_gather(std::size_t block_size, std::span<const std::size_t> subblock_perm) {
    check_subblock_perm(block_size, subblock_perm);
    Permutation map(block_size * block_size);
    for (const Quadrant q : {Quadrant::TopLeft, Quadrant::TopRight, Quadrant::BottomLeft, Quadrant::BottomRight}) {
        for (std::size_t k = 0; k < subblock_perm.size(); ++k) {
            map[quadrant_pixel(block_size, q, k)] = quadrant_pixel(block_size, q, subblock_perm[k]);
        }
    }
    return map;
}

Permutation expand_to_samples(std::span<const std::size_t> pixel_map, std::size_t channels) {
    Permutation out(pixel_map.size() * channels);
    for (std::size_t p = 0; p < pixel_map.size(); ++p) {
        for (std::size_t c = 0; c < channels; ++c) out[p * channels + c] = pixel_map[p] * channels + c;
    }
    return out;
}

BlockGrid permute_blocks(const BlockGrid& grid, std::span<const std::size_t> block_perm) {
    if (block_perm.size() != grid.count()) {
        throw GeometryError("K1 has " + std::to_string(block_perm.size()) + " entries, grid has " +
                            std::to_string(grid.count()) + " blocks");
    }
    require_permutation(block_perm, "K1");
    BlockGrid out = grid;
    for (std::size_t i = 0; i < grid.count(); ++i) out.blocks[i] = grid.blocks[block_perm[i]];
    return out;
}

BlockGrid unpermute_blocks(const BlockGrid& grid, std::span<const std::size_t> block_perm) {
    if (block_perm.size() != grid.count()) {
        throw GeometryError("K1 has " + std::to_string(block_perm.size()) + " entries, grid has " +
                            std::to_string(grid.count()) + " blocks");
    }
    require_permutation(block_perm, "K1");
    BlockGrid out = grid;
    for (std::size_t i = 0; i < grid.count(); ++i) out.blocks[block_perm[i]] = grid.blocks[i];
    return out;
}

Image shuffle_subblock_pixels(const Image& block, std::span<const std::size_t> subblock_perm) {
    if (block.height() != block.width()) throw GeometryError("blocks must be square");
    return gather_pixels(block, block_pixel_gather(block.height(), subblock_perm));
}

Image encrypt_stepwise(const Image& img, const EncryptionKey& key) {
    validate_key(key);
    check_image_against_key(img, key);
    BlockGrid grid = permute_blocks(divide_blocks(img, key.block_size), key.block_perm);
    for (Image& block : grid.blocks) block = shuffle_subblock_pixels(block, key.subblock_perm);
    return assemble_blocks(grid);
}

Image decrypt_stepwise(const Image& img, const EncryptionKey& key) {
    validate_key(key);
    check_image_against_key(img, key);
    const Permutation inverse_k2 = invert_permutation(key.subblock_perm);
    BlockGrid grid = divide_blocks(img, key.block_size);
    for (Image& block : grid.blocks) block = shuffle_subblock_pixels(block, inverse_k2);
    return assemble_blocks(unpermute_blocks(grid, key.block_perm));
}

CipherPlan::CipherPlan(const EncryptionKey& key) : height_(key.height), width_(key.width) {
    validate_key(key);
    const std::size_t m = key.block_size;
    const std::size_t cols = key.width / m;
    const Permutation local = block_pixel_gather(m, key.subblock_perm);

    gather_.resize(key.height * key.width);
    for (std::size_t i = 0; i < key.block_count(); ++i) {
        const std::size_t src_block = key.block_perm[i];
        const std::size_t dst_y0 = (i / cols) * m, dst_x0 = (i % cols) * m;
        const std::size_t src_y0 = (src_block / cols) * m, src_x0 = (src_block % cols) * m;
        for (std::size_t p = 0; p < m * m; ++p) {
            const std::size_t q = local[p];
            gather_[(dst_y0 + p / m) * width_ + dst_x0 + p % m] = (src_y0 + q / m) * width_ + src_x0 + q % m;
        }
    }
    scatter_ = invert_permutation(gather_);
}

void CipherPlan::check(const Image& img) const {
    if (img.height() != height_ || img.width() != width_) {
        throw GeometryError("image is " + std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                            " but key is for " + std::to_string(height_) + "x" + std::to_string(width_));
    }
}

Image CipherPlan::encrypt(const Image& img) const {
    check(img);
    return gather_pixels(img, gather_);
}

Image CipherPlan::decrypt(const Image& img) const {
    check(img);
    return gather_pixels(img, scatter_);
}

Image encrypt(const Image& img, const EncryptionKey& key) { return CipherPlan(key).encrypt(img); }

Image decrypt(const Image& img, const EncryptionKey& key) { return CipherPlan(key).decrypt(img); }

}  // namespace vitcrypt
