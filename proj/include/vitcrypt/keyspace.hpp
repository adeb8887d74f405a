#pragma once

#include <cstddef>

#include "vitcrypt/bigint.hpp"

namespace vitcrypt {

/// Exact n!.
BigUint factorial_big(std::size_t n);

/// Number of distinct keys: N! * ((M/2)^2)! with N = (H/M)(W/M).
/// One K2 is shared by every sub-block, so the pixel-shuffle factor appears once.
BigUint keyspace(std::size_t block_size, std::size_t height, std::size_t width);

/// floor(log2(keyspace)), i.e. bit length minus one. Exact.
std::size_t keyspace_floor_log2(std::size_t block_size, std::size_t height, std::size_t width);

/// log2(keyspace) rounded to the nearest integer, decided exactly by comparing
/// keyspace^2 against 2^(2k+1). This is the exponent quoted in "keyspace = 2^b":
/// 1511 for 16x16 blocks on a 224x224 image.
std::size_t keyspace_bits(std::size_t block_size, std::size_t height, std::size_t width);

/// Same rounding rule for an arbitrary positive value.
std::size_t nearest_log2(const BigUint& value);

}  // namespace vitcrypt
