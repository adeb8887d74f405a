#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vitcrypt {

using Permutation = std::vector<std::size_t>;

/// SplitMix64 (Steele, Lea, Flood 2014). Not a cryptographic generator:
/// a seed reaches at most 2^64 of the cipher's keys.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGamma;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits of the next output.
    constexpr double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Descending Fisher-Yates from the identity: for i = n-1 .. 1, j = next() mod (i+1), swap(i, j).
Permutation fisher_yates(std::size_t n, SplitMix64& rng);

bool is_permutation_of_iota(std::span<const std::size_t> p) noexcept;
/// Throws PermutationError unless p is a bijection on {0..p.size()-1}.
void require_permutation(std::span<const std::size_t> p, std::string_view what);
/// q with q[p[i]] == i.
Permutation invert_permutation(std::span<const std::size_t> p);

/// K1 permutes the N blocks, K2 permutes the S = (M/2)^2 pixel positions of every
/// sub-block. Indices are 0-based.
struct EncryptionKey {
    std::size_t block_size = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    Permutation block_perm;     // K1
    Permutation subblock_perm;  // K2

    std::size_t block_count() const noexcept;
    std::size_t subblock_pixels() const noexcept;

    friend bool operator==(const EncryptionKey&, const EncryptionKey&) = default;
};

inline std::size_t block_count_for(std::size_t block_size, std::size_t height, std::size_t width) {
    return (height / block_size) * (width / block_size);
}
inline std::size_t subblock_pixels_for(std::size_t block_size) {
    return (block_size / 2) * (block_size / 2);
}

/// K1 = fisher_yates(N), then K2 = fisher_yates(S) continuing the same stream.
EncryptionKey generate_key(std::uint64_t seed, std::size_t block_size, std::size_t height, std::size_t width);

/// Checks geometry and both permutations; throws GeometryError / PermutationError.
void validate_key(const EncryptionKey& key);

// Key file, LF line endings:
//   VITCRYPT-KEY 1
//   M=<int> H=<int> W=<int>
//   K1=<comma-separated 0-based ints>
//   K2=<comma-separated 0-based ints>
inline constexpr std::string_view kKeyMagic = "VITCRYPT-KEY";
inline constexpr int kKeyVersion = 1;

std::string serialize_key(const EncryptionKey& key);
/// Any defect (syntax, version, non-bijective or mis-sized permutation,
/// invalid geometry) is reported as FormatError.
EncryptionKey parse_key(std::string_view text);

}  // namespace vitcrypt
