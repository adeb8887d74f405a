#include "vitcrypt/keyspace.hpp"

#include <cstdint>

#include "vitcrypt/error.hpp"
#include "vitcrypt/image.hpp"
#include "vitcrypt/keys.hpp"

namespace vitcrypt {

BigUint factorial_big(std::size_t n) {
    BigUint out(1);
    for (std::size_t k = 2; k <= n; ++k) {
        if (k > UINT32_MAX) throw ConfigError("factorial argument too large");
        out *= static_cast<std::uint32_t>(k);
    }
    return out;
}

BigUint keyspace(std::size_t block_size, std::size_t height, std::size_t width) {
    validate_block_geometry(block_size, height, width);
    return factorial_big(block_count_for(block_size, height, width)) * factorial_big(subblock_pixels_for(block_size));
}

std::size_t keyspace_floor_log2(std::size_t block_size, std::size_t height, std::size_t width) {
    return keyspace(block_size, height, width).bit_length() - 1;
}

std::size_t nearest_log2(const BigUint& value) {
    if (value.is_zero()) throw ConfigError("log2 of zero");
    const std::size_t floor_log2 = value.bit_length() - 1;
    const bool round_up = value * value >= BigUint::power_of_two(2 * floor_log2 + 1);
    return floor_log2 + (round_up ? 1 : 0);
}

std::size_t keyspace_bits(std::size_t block_size, std::size_t height, std::size_t width) {
    return nearest_log2(keyspace(block_size, height, width));
}

}  // namespace vitcrypt
