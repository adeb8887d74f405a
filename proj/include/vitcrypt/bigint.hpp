#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vitcrypt {

/// Arbitrary-precision non-negative integer, base 2^32 limbs, least significant first.
/// Only the operations the key-space computation needs.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t value);  // NOLINT(google-explicit-constructor)

    bool is_zero() const noexcept { return limbs_.empty(); }
    /// Number of significant bits; 0 for zero.
    std::size_t bit_length() const noexcept;
    std::string to_decimal() const;

    BigUint& operator*=(std::uint32_t factor);
    friend BigUint operator*(const BigUint& a, const BigUint& b);

    /// Quotient and remainder by a nonzero machine word.
    std::pair<BigUint, std::uint32_t> divmod(std::uint32_t divisor) const;

    friend bool operator==(const BigUint&, const BigUint&) = default;
    friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) noexcept;

    static BigUint power_of_two(std::size_t exponent);

private:
    void trim() noexcept;

    std::vector<std::uint32_t> limbs_;
};

}  // namespace vitcrypt
