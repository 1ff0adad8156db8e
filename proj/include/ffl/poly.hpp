#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ffl {

using BigInt = boost::multiprecision::cpp_int;

/// Dense polynomial with coefficients in ascending degree order. The zero
/// polynomial is the empty vector; trimmed polynomials have a nonzero top
/// coefficient.
using PolyCoeffs = std::vector<std::int64_t>;

namespace polymod {

/// Reduces every coefficient mod p and trims leading zeros.
PolyCoeffs reduce(std::span<const std::int64_t> f, std::int64_t p);

void trim(PolyCoeffs& f);

/// Degree of a trimmed polynomial, -1 for zero.
inline int degree(const PolyCoeffs& f) { return static_cast<int>(f.size()) - 1; }

PolyCoeffs derivative(const PolyCoeffs& f, std::int64_t p);
PolyCoeffs sub(const PolyCoeffs& a, const PolyCoeffs& b, std::int64_t p);
PolyCoeffs mul(const PolyCoeffs& a, const PolyCoeffs& b, std::int64_t p);

/// Remainder of a by a nonzero b over F_p.
PolyCoeffs rem(PolyCoeffs a, const PolyCoeffs& b, std::int64_t p);

/// Monic gcd over F_p; gcd(0, 0) = 0.
PolyCoeffs gcd(PolyCoeffs a, PolyCoeffs b, std::int64_t p);

/// a*b mod (modulus, p), modulus monic of degree >= 1.
PolyCoeffs mulmod(const PolyCoeffs& a, const PolyCoeffs& b, const PolyCoeffs& modulus, std::int64_t p);

/// x^e mod (modulus, p) by square-and-multiply.
PolyCoeffs powmod_x(std::uint64_t e, const PolyCoeffs& modulus, std::int64_t p);

/// f(x) mod p by Horner.
std::int64_t eval(const PolyCoeffs& f, std::int64_t x, std::int64_t p);

/// True when f mod p is squarefree, i.e. gcd(f, f') is a nonzero constant.
bool squarefree(std::span<const std::int64_t> f, std::int64_t p);

} // namespace polymod

/// Discriminant of a monic integer polynomial (ascending coefficients,
/// leading 1 included), computed as (-1)^{n(n-1)/2} Res(f, f') from the
/// Sylvester matrix by fraction-free elimination.
BigInt monic_discriminant(std::span<const std::int64_t> f);

} // namespace ffl
