#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vitcrypt/image.hpp"
#include "vitcrypt/keys.hpp"

namespace vitcrypt {

/// Sub-block (quadrant) order inside a block. Fixed; encrypt and decrypt both rely on it.
enum class Quadrant { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };

/// Pixel index (row-major within an M x M block) of element k of the
/// flattened quadrant q. Quadrants are flattened row-major.
std::size_t quadrant_pixel(std::size_t block_size, Quadrant q, std::size_t k);

/// Gather map over the M*M pixels of one block induced by K2:
/// shuffled_pixel[p] = pixel[map[p]]. This is the single definition of the
/// sub-block flattening convention; the cipher and the ViT checks both use it.
Permutation block_pixel_gather(std::size_t block_size, std::span<const std::size_t> subblock_perm);

/// Expands a pixel-level gather map to sample level for `channels`
/// interleaved channels (channels of a pixel move together).
Permutation expand_to_samples(std::span<const std::size_t> pixel_map, std::size_t channels);

/// Output block i is input block K1[i].
BlockGrid permute_blocks(const BlockGrid& grid, std::span<const std::size_t> block_perm);
/// Output block K1[i] is input block i (inverse of permute_blocks with the same K1).
BlockGrid unpermute_blocks(const BlockGrid& grid, std::span<const std::size_t> block_perm);

/// Each quadrant flattened to v; v'(k) = v(K2[k]).
Image shuffle_subblock_pixels(const Image& block, std::span<const std::size_t> subblock_perm);

/// Step-by-step cipher: divide, scramble blocks with K1, shuffle every
/// block's sub-blocks with K2, reassemble.
Image encrypt_stepwise(const Image& img, const EncryptionKey& key);
Image decrypt_stepwise(const Image& img, const EncryptionKey& key);

/// The whole cipher compiled into one pixel-level gather map for a fixed
/// key geometry: cipher[p] = plain[map[p]]. Reusable across images of the
/// key's size and any channel count.
class CipherPlan {
public:
    explicit CipherPlan(const EncryptionKey& key);

    Image encrypt(const Image& img) const;
    Image decrypt(const Image& img) const;

    std::span<const std::size_t> gather_map() const noexcept { return gather_; }

private:
    void check(const Image& img) const;

    std::size_t height_;
    std::size_t width_;
    Permutation gather_;   // ciphertext pixel -> plaintext pixel
    Permutation scatter_;  // plaintext pixel -> ciphertext pixel
};

Image encrypt(const Image& img, const EncryptionKey& key);
Image decrypt(const Image& img, const EncryptionKey& key);

}  // namespace vitcrypt
