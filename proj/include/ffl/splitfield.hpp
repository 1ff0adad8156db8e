#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ffl/poly.hpp"

namespace ffl {

/// Monic integer polynomial f, squarefree over Q, standing in for the number
/// field it defines. Text form lists the non-leading coefficients from the
/// x^{d-1} term down to the constant: `poly:0,1` is x^2 + 1.
class NumberFieldPoly {
public:
    /// Throws DomainError on malformed text or a non-squarefree f.
    static NumberFieldPoly parse(std::string_view text, std::string label = {});
    /// `lower` holds the non-leading coefficients, highest degree first.
    static NumberFieldPoly from_lower(const std::vector<std::int64_t>& lower, std::string label = {});

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    /// Ascending coefficients including the leading 1.
    const PolyCoeffs& coeffs() const noexcept { return coeffs_; }
    const std::string& label() const noexcept { return label_; }
    std::string text() const;

private:
    PolyCoeffs coeffs_;
    std::string label_;
};

/// x^p mod (f, p) as an ascending residue vector of length deg f.
std::vector<std::int64_t> poly_powmod_xp(const NumberFieldPoly& f, std::int64_t p);

/// Number of distinct roots of f in F_p: deg gcd(x^p - x, f mod p).
int count_roots(const NumberFieldPoly& f, std::int64_t p);

enum class SplitType { Split, NotSplit, Ramified };

/// Ramified when f mod p is not squarefree; Split when f has deg f distinct
/// roots mod p. For non-Galois f this is complete splitting in the Galois
/// closure.
SplitType is_totally_split(const NumberFieldPoly& f, std::int64_t p);

const char* to_string(SplitType s) noexcept;

struct DensityEstimate {
    std::string set_label;
    std::size_t count = 0;
    std::size_t pi_x = 0;
    std::int64_t X = 0;
    double estimate = 0.0;
};

inline constexpr std::int64_t kMinDensityBound = 1'000;

/// #{p <= X : Split} / pi(X); ramified primes count in the denominator only.
/// Throws BoundsError for X < 10^3.
DensityEstimate split_density(const NumberFieldPoly& f, std::int64_t X, unsigned workers = 1);

} // namespace ffl
