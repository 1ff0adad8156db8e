#include <doctest.h>

#include <random>
#include <set>

#include "ffl/arith.hpp"
#include "ffl/error.hpp"
#include "ffl/splitfield.hpp"

using namespace ffl;

namespace {

int brute_roots(const NumberFieldPoly& f, std::int64_t p) {
    int n = 0;
    for (std::int64_t x = 0; x < p; ++x)
        n += polymod::eval(f.coeffs(), x, p) == 0;
    return n;
}

bool two_is_cube(std::int64_t p) {
    for (std::int64_t x = 1; x < p; ++x)
        if (x * x % p * x % p == 2 % p)
            return true;
    return false;
}

} // namespace

TEST_CASE("parsing") {
    const NumberFieldPoly f = NumberFieldPoly::parse("poly:0,1");
    CHECK(f.degree() == 2);
    CHECK(f.coeffs() == PolyCoeffs{1, 0, 1});
    CHECK(f.text() == "poly:0,1");
    CHECK(NumberFieldPoly::parse("poly:0,0,-2").coeffs() == PolyCoeffs{-2, 0, 0, 1});
    CHECK(NumberFieldPoly::from_lower({0, 0, -2}).text() == "poly:0,0,-2");
    CHECK_THROWS_AS(NumberFieldPoly::parse("poly:2,1"), DomainError);  // (x + 1)^2
    CHECK_THROWS_AS(NumberFieldPoly::parse("poly:x"), DomainError);
    CHECK_THROWS_AS(NumberFieldPoly::parse("0,1"), DomainError);
    CHECK_THROWS_AS(NumberFieldPoly::parse("poly:"), DomainError);
}

TEST_CASE("x^p mod f agrees with direct exponentiation") {
    const NumberFieldPoly f = NumberFieldPoly::parse("poly:1,0,-3,5");
    for (const Prime& p : sieve_primes(200)) {
        std::vector<std::int64_t> expect = polymod::powmod_x(static_cast<std::uint64_t>(p.value()),
                                                             polymod::reduce(f.coeffs(), p), p);
        expect.resize(static_cast<std::size_t>(f.degree()), 0);
        CHECK(poly_powmod_xp(f, p) == expect);
    }
}

TEST_CASE("root counts agree with brute force") {
    std::mt19937 rng(0);
    std::uniform_int_distribution<std::int64_t> coeff(-9, 9);
    std::uniform_int_distribution<int> deg(1, 5);
    const auto primes = sieve_primes(200);
    for (int it = 0; it < 60; ++it) {
        std::vector<std::int64_t> lower(static_cast<std::size_t>(deg(rng)));
        for (auto& c : lower)
            c = coeff(rng);
        NumberFieldPoly f;
        try {
            f = NumberFieldPoly::from_lower(lower);
        } catch (const DomainError&) {
            continue;
        }
        for (const Prime& p : primes) {
            const SplitType t = is_totally_split(f, p);
            if (t == SplitType::Ramified) {
                CHECK_FALSE(polymod::squarefree(f.coeffs(), p));
                continue;
            }
            const int n = brute_roots(f, p);
            CHECK(count_roots(f, p) == n);
            CHECK((t == SplitType::Split) == (n == f.degree()));
        }
    }
}

TEST_CASE("x^2 + 1 splits exactly at p = 1 mod 4") {
    const NumberFieldPoly f = NumberFieldPoly::parse("poly:0,1");
    CHECK(is_totally_split(f, 2) == SplitType::Ramified);
    for (const Prime& p : sieve_primes(20000))
        if (p.value() > 2)
            CHECK((is_totally_split(f, p) == SplitType::Split) == (p.value() % 4 == 1));
}

TEST_CASE("x^3 - 2 splits exactly when p = 1 mod 3 and 2 is a cube") {
    const NumberFieldPoly f = NumberFieldPoly::parse("poly:0,0,-2");
    CHECK(is_totally_split(f, 2) == SplitType::Ramified);
    CHECK(is_totally_split(f, 3) == SplitType::Ramified);
    for (const Prime& p : sieve_primes(3000))
        if (p.value() > 3)
            CHECK((is_totally_split(f, p) == SplitType::Split) == (p.value() % 3 == 1 && two_is_cube(p)));
}

TEST_CASE("split density") {
    const DensityEstimate d = split_density(NumberFieldPoly::parse("poly:0,1"), 100'000);
    CHECK(d.pi_x == 9592);
    CHECK(d.X == 100'000);
    CHECK(d.estimate == doctest::Approx(static_cast<double>(d.count) / 9592));
    CHECK(d.estimate > 0.48);
    CHECK(d.estimate < 0.52);
    const DensityEstimate c = split_density(NumberFieldPoly::parse("poly:0,0,-2"), 100'000);
    CHECK(c.estimate > 0.147);
    CHECK(c.estimate < 0.187);
    CHECK_THROWS_AS(split_density(NumberFieldPoly::parse("poly:0,1"), 999), BoundsError);
}

TEST_CASE("split density is identical across worker counts") {
    const NumberFieldPoly f = NumberFieldPoly::parse("poly:1,-1,3");
    const DensityEstimate a = split_density(f, 50'000, 1);
    const DensityEstimate b = split_density(f, 50'000, 4);
    CHECK(a.count == b.count);
    CHECK(a.estimate == b.estimate);
}
