#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffl {

/// Every modulus handled by the kernels stays below this bound, so a product
/// of two reduced residues fits a signed 64-bit integer.
inline constexpr std::int64_t kModulusLimit = std::int64_t{1} << 31;

/// A prime number. Values come from sieve_primes() or from Prime::certify().
class Prime {
public:
    /// Trial-division check; throws DomainError when `value` is not prime.
    static Prime certify(std::int64_t value);

    constexpr std::int64_t value() const noexcept { return value_; }
    constexpr operator std::int64_t() const noexcept { return value_; }

    friend constexpr bool operator==(Prime, Prime) = default;
    friend constexpr auto operator<=>(Prime, Prime) = default;

private:
    constexpr explicit Prime(std::int64_t v) noexcept : value_(v) {}
    friend std::vector<Prime> sieve_primes(std::int64_t limit);

    std::int64_t value_;
};

/// Primes <= limit in ascending order. Plain sieve up to 10^6, segmented above.
/// Throws BoundsError unless 2 <= limit < 2^31.
std::vector<Prime> sieve_primes(std::int64_t limit);

/// Number of primes <= x (0 for x < 2).
std::size_t prime_pi(std::int64_t x);

/// A reduced fraction r/N with N >= 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1);

    /// Accepts "r" or "r/N" with optional sign.
    static Rational parse(std::string_view text);

    constexpr std::int64_t num() const noexcept { return num_; }
    constexpr std::int64_t den() const noexcept { return den_; }
    constexpr bool is_zero() const noexcept { return num_ == 0; }
    constexpr bool is_integer() const noexcept { return den_ == 1; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    friend constexpr bool operator==(const Rational&, const Rational&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Least nonnegative residue of a mod m (m >= 1).
constexpr std::int64_t mod_reduce(std::int64_t a, std::int64_t m) noexcept {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// a*b mod m for reduced operands; exact for m < 2^31.
constexpr std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) noexcept {
    return (a * b) % m;
}

/// base^exp mod m, for any m >= 2 that fits 63 bits.
std::int64_t mod_pow(std::int64_t base, std::uint64_t exp, std::int64_t m);

/// Legendre symbol (a/p) via Euler's criterion. Throws DomainError for p = 2.
int legendre(std::int64_t a, std::int64_t p);

/// Inverse of a modulo p. Throws NotInvertible when p | a.
std::int64_t inv_mod(std::int64_t a, std::int64_t p);

/// r * N^{-1} mod p, or nullopt (the bad-prime marker) when p | N.
std::optional<std::int64_t> rational_mod(const Rational& b, std::int64_t p);

/// floor(sqrt(n)) for n >= 0, exact.
std::int64_t isqrt(std::int64_t n) noexcept;

} // namespace ffl
