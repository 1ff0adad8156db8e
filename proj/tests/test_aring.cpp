#include <doctest.h>

#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "ffl/aring.hpp"
#include "ffl/curves.hpp"
#include "ffl/error.hpp"

using namespace ffl;
using BigRational = boost::multiprecision::cpp_rational;

namespace {

/// a_n over Q by direct iteration.
std::vector<BigRational> exact_terms(const LinearRecurrence& rec, int n_max) {
    std::vector<BigRational> a;
    for (const Rational& r : rec.initial)
        a.emplace_back(r.num(), r.den());
    const std::size_t k = rec.order();
    while (a.size() <= static_cast<std::size_t>(n_max)) {
        BigRational next = 0;
        for (std::size_t i = 0; i < k; ++i)
            next += BigRational(rec.coeffs[i].num(), rec.coeffs[i].den()) * a[a.size() - 1 - i];
        a.push_back(next);
    }
    return a;
}

/// x mod p, or nullopt when p divides the reduced denominator.
std::optional<std::int64_t> reduce(const BigRational& x, std::int64_t p) {
    const BigInt num = boost::multiprecision::numerator(x), den = boost::multiprecision::denominator(x);
    const std::int64_t d = static_cast<std::int64_t>(((den % p) + p) % p);
    if (d == 0)
        return std::nullopt;
    const std::int64_t n = static_cast<std::int64_t>(((num % p) + p) % p);
    return mod_reduce(n * inv_mod(d, p), p);
}

std::int64_t eval_int_poly_mod(const PolyCoeffs& f, std::int64_t q, std::int64_t p) {
    std::int64_t acc = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        acc = mod_reduce(acc * mod_reduce(q, p) + mod_reduce(f[i], p), p);
    return acc;
}

} // namespace

TEST_CASE("windows and sequence access") {
    ResidueSequence t("x", Window{5, 30});
    CHECK(t.primes() == std::vector<std::int64_t>{5, 7, 11, 13, 17, 19, 23, 29});
    CHECK_FALSE(t.at(0).has_value());
    t.set(1, -3);
    CHECK(t.at_prime(7) == 4);
    CHECK_THROWS_AS(t.at_prime(9), BoundsError);
    CHECK_THROWS_AS(t.at_prime(31), BoundsError);
    CHECK(t.undefined_primes().size() == 7);
}

TEST_CASE("linear recurrences agree with exact rational iteration") {
    std::mt19937 rng(0);
    std::uniform_int_distribution<std::int64_t> num(-6, 6), den(1, 4);
    std::uniform_int_distribution<int> order(1, 4);
    const Window w{2, 400};
    for (int it = 0; it < 25; ++it) {
        LinearRecurrence rec;
        const int k = order(rng);
        for (int i = 0; i < k; ++i) {
            rec.coeffs.emplace_back(num(rng), den(rng));
            rec.initial.emplace_back(num(rng), den(rng));
        }
        if (rec.coeffs.back().is_zero())
            rec.coeffs.back() = Rational(1);
        const ResidueSequence t = from_linear_recurrence(rec, w);
        const auto exact = exact_terms(rec, 400);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::int64_t p = t.primes()[i];
            // Every reduction used by the iteration must exist mod p.
            bool clean = true;
            for (const Rational& r : rec.coeffs)
                clean = clean && r.den() % p != 0;
            for (const Rational& r : rec.initial)
                clean = clean && r.den() % p != 0;
            if (!clean) {
                CHECK_FALSE(t.at(i).has_value());
                continue;
            }
            CHECK(t.at(i) == reduce(exact[static_cast<std::size_t>(p)], p));
        }
    }
}

TEST_CASE("recurrence results are identical across worker counts") {
    const LinearRecurrence rec{{Rational(2), Rational(-1, 3), Rational(5)}, {Rational(1), Rational(0), Rational(7)}};
    CHECK(from_linear_recurrence(rec, Window{5, 200'000}, 1) == from_linear_recurrence(rec, Window{5, 200'000}, 4));
}

TEST_CASE("recurrence validation") {
    CHECK_THROWS_AS(LinearRecurrence({}, {}).validate(), DomainError);
    CHECK_THROWS_AS(LinearRecurrence({{Rational(1)}, {}}).validate(), DomainError);
    CHECK_THROWS_AS(LinearRecurrence({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}).validate(), DomainError);
    CHECK_THROWS_AS(from_linear_recurrence(LinearRecurrence::fibonacci(), Window{5, 20'000'000}), ResourceError);
}

TEST_CASE("Fibonacci at p is the Legendre symbol (p/5)") {
    const ResidueSequence t = from_linear_recurrence(LinearRecurrence::fibonacci(), Window{7, 10'000});
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::int64_t p = t.primes()[i];
        CHECK(t.at(i) == mod_reduce(legendre(p, 5), p));
    }
}

TEST_CASE("q-Fibonacci polynomials") {
    CHECK(qfib_poly(0).empty());
    CHECK(qfib_poly(1) == PolyCoeffs{1});
    CHECK(qfib_poly(2) == PolyCoeffs{1});
    CHECK(qfib_poly(3) == PolyCoeffs{1, 1});
    CHECK(qfib_poly(4) == PolyCoeffs{1, 1, 1});
    CHECK(qfib_poly(5) == PolyCoeffs{1, 1, 1, 1, 1});
    CHECK(qfib_poly(6) == PolyCoeffs{1, 1, 1, 1, 2, 1, 1});
    // At q = 1 the coefficients sum to the ordinary Fibonacci numbers.
    std::int64_t a = 0, b = 1;
    for (int n = 1; n <= 60; ++n) {
        std::int64_t s = 0;
        for (std::int64_t c : qfib_poly(n))
            s += c;
        CHECK(s == b);
        const std::int64_t c = a + b;
        a = b;
        b = c;
    }
    CHECK_THROWS_AS(qfib_poly(61), BoundsError);
}

TEST_CASE("q-Fibonacci mod p matches the integer polynomial oracle") {
    for (std::int64_t q : {2, 3, 5, 7}) {
        const ResidueSequence t = from_qfibonacci(q, Window{2, 53});
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::int64_t p = t.primes()[i];
            CHECK(t.at(i) == eval_int_poly_mod(qfib_poly(static_cast<int>(p)), q, p));
        }
    }
    CHECK_THROWS_AS(from_qfibonacci(1, Window{5, 100}), DomainError);
    CHECK_THROWS_AS(from_qfibonacci(2, Window{5, 2'000'000}), ResourceError);
    CHECK(from_qfibonacci(3, Window{5, 20'000}, 1) == from_qfibonacci(3, Window{5, 20'000}, 4));
}

TEST_CASE("ring operations") {
    const Window w{5, 1000};
    const ResidueSequence a = from_rational(Rational(1, 3), w);
    const ResidueSequence b = from_rational(Rational(2), w);
    const ResidueSequence sum = seq_add(a, b);
    const ResidueSequence prod = seq_mul(a, b);
    const ResidueSequence c7 = from_rational(Rational(7, 3), w);
    const ResidueSequence c2 = from_rational(Rational(2, 3), w);
    for (std::size_t i = 0; i < sum.size(); ++i) {
        CHECK(sum.at(i) == c7.at(i));
        CHECK(prod.at(i) == c2.at(i));
    }
    CHECK_THROWS_AS(seq_add(a, from_rational(Rational(1), Window{7, 1000})), WindowMismatch);
    CHECK_THROWS_AS(seq_mul(a, from_rational(Rational(1), Window{5, 999})), WindowMismatch);
    // 3 * (1/3) - 1 vanishes everywhere it is defined.
    const ResidueSequence z = poly_eval(PolyCoeffs{-1, 3}, a);
    CHECK(is_zero_cofinite(z).zero);
    CHECK_FALSE(is_zero_cofinite(z).largest_nonzero.has_value());
}

TEST_CASE("undefined entries absorb") {
    const Window w{2, 100};
    const ResidueSequence a = from_rational(Rational(1, 7), w);
    const ResidueSequence s = seq_add(a, from_rational(Rational(1), w));
    CHECK_FALSE(s.at_prime(7).has_value());
    CHECK(s.at_prime(11).has_value());
    CHECK(s.undefined_primes() == std::vector<std::int64_t>{7});
}

TEST_CASE("cofinite zero test uses the upper 90 percent by value") {
    const Window w{5, 1005};
    CHECK(cofinite_cutoff(w) == 105);
    ResidueSequence t("t", w);
    for (std::size_t i = 0; i < t.size(); ++i)
        t.set(i, 0);
    t.set(0, 1); // p = 5
    ZeroCheck z = is_zero_cofinite(t);
    CHECK(z.zero);
    CHECK(z.largest_nonzero == 5);
    const auto i107 = static_cast<std::size_t>(std::find(t.primes().begin(), t.primes().end(), 107) - t.primes().begin());
    t.set(i107, 1);
    z = is_zero_cofinite(t);
    CHECK_FALSE(z.zero);
    CHECK(z.largest_nonzero == 107);
}

TEST_CASE("traces as ring elements") {
    const TraceTable table = trace_sweep(CurveSpec::elliptic(-1, 1), 200);
    const ResidueSequence t = from_traces(table);
    CHECK(t.window() == Window{4, 200});
    CHECK_FALSE(t.at_prime(23).has_value());
    CHECK(t.at_prime(13) == mod_reduce(-5, 13));
}

TEST_CASE("relation search on constants finds X - c first") {
    for (std::int64_t c : {-3, 0, 2, 5}) {
        const AnnihilatorReport r = relation_search(from_rational(Rational(c), Window{5, 3000}), 2, 5);
        REQUIRE_FALSE(r.found.empty());
        CHECK(r.found.front().f == PolyCoeffs{-c, 1});
        CHECK(r.found.front().rational_roots == std::vector<Rational>{Rational(c)});
        for (const Annihilator& a : r.found)
            CHECK(std::find(a.rational_roots.begin(), a.rational_roots.end(), Rational(c)) != a.rational_roots.end());
    }
    const AnnihilatorReport half = relation_search(from_rational(Rational(1, 2), Window{5, 3000}), 1, 3);
    REQUIRE(half.found.size() == 1);
    CHECK(half.found.front().f == PolyCoeffs{-1, 2});
}

TEST_CASE("relation search on Fibonacci finds exactly X^2 - 1 at degree 2") {
    const ResidueSequence t = from_linear_recurrence(LinearRecurrence::fibonacci(), Window{5, 10'000});
    const AnnihilatorReport r = relation_search(t, 2, 3);
    REQUIRE(r.found.size() == 1);
    CHECK(r.found.front().f == PolyCoeffs{-1, 0, 1});
    CHECK(poly_to_string(r.found.front().f) == "X^2 - 1");
    CHECK(r.found.front().largest_violation == 5); // F_5 = 0 mod 5
    CHECK(r.candidates == 3 + 3 * 7 + 3 * 49);
}

TEST_CASE("relation search on q-Fibonacci q = 2 is empty") {
    const AnnihilatorReport r = relation_search(from_qfibonacci(2, Window{5, 10'000}), 3, 10);
    CHECK(r.found.empty());
}

TEST_CASE("relation search is identical across worker counts") {
    const ResidueSequence t = from_rational(Rational(-2, 3), Window{5, 5000});
    const AnnihilatorReport a = relation_search(t, 3, 4, 1), b = relation_search(t, 3, 4, 4);
    REQUIRE(a.found.size() == b.found.size());
    for (std::size_t i = 0; i < a.found.size(); ++i)
        CHECK(a.found[i].f == b.found[i].f);
}

TEST_CASE("relation budget") {
    CHECK(relation_budget(3, 10) == 194481);
    CHECK(relation_budget(100, 100) == std::numeric_limits<std::uint64_t>::max());
    const ResidueSequence t = from_rational(Rational(1), Window{5, 100});
    CHECK_THROWS_AS(relation_search(t, 8, 10), ResourceError);
    CHECK_THROWS_AS(relation_search(t, -1, 10), DomainError);
}

TEST_CASE("rational roots") {
    CHECK(rational_roots(PolyCoeffs{-1, 0, 1}) == std::vector<Rational>{Rational(-1), Rational(1)});
    CHECK(rational_roots(PolyCoeffs{1, 0, 1}).empty());
    CHECK(rational_roots(PolyCoeffs{-1, 2}) == std::vector<Rational>{Rational(1, 2)});
    CHECK(rational_roots(PolyCoeffs{0, 0, 3, 1}) == std::vector<Rational>{Rational(-3), Rational(0)});
    CHECK(rational_roots(PolyCoeffs{6, -5, -2, 1}) ==
          std::vector<Rational>{Rational(-2), Rational(1), Rational(3)});
    std::mt19937 rng(0);
    std::uniform_int_distribution<std::int64_t> r(-6, 6), s(1, 4);
    for (int it = 0; it < 100; ++it) {
        // (s1 X - r1)(s2 X - r2)(X^2 + 1)
        const std::int64_t r1 = r(rng), s1 = s(rng), r2 = r(rng), s2 = s(rng);
        PolyCoeffs f{r1 * r2, -(r1 * s2 + r2 * s1), s1 * s2};
        PolyCoeffs g(f.size() + 2, 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            g[i] += f[i];
            g[i + 2] += f[i];
        }
        const auto roots = rational_roots(g);
        CHECK(std::find(roots.begin(), roots.end(), Rational(r1, s1)) != roots.end());
        CHECK(std::find(roots.begin(), roots.end(), Rational(r2, s2)) != roots.end());
        CHECK(roots.size() == (Rational(r1, s1) == Rational(r2, s2) ? 1u : 2u));
    }
}

TEST_CASE("polynomial text") {
    CHECK(poly_to_string(PolyCoeffs{-1, 0, 1}) == "X^2 - 1");
    CHECK(poly_to_string(PolyCoeffs{3, -1}) == "-X + 3");
    CHECK(poly_to_string(PolyCoeffs{0, 2, 0, -1}) == "-X^3 + 2X");
    CHECK(poly_to_string(PolyCoeffs{}) == "0");
}

TEST_CASE("sequence CSV round trip") {
    ResidueSequence t = from_rational(Rational(1, 3), Window{2, 50});
    t.set_label("third");
    std::stringstream ss;
    write_sequence_csv(ss, t);
    CHECK(ss.str().rfind("# label=third pmin=2 X=50 version=1\n2,1\n3,*\n5,2\n", 0) == 0);
    const ResidueSequence back = read_sequence_csv(ss);
    CHECK(back == t);
    std::istringstream bad("# label=x pmin=2 X=10 version=2\n");
    CHECK_THROWS_AS(read_sequence_csv(bad), DomainError);
    std::istringstream short_rows("# label=x pmin=2 X=10 version=1\n2,1\n3,1\n");
    CHECK_THROWS_AS(read_sequence_csv(short_rows), DomainError);
}
