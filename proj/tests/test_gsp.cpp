#include <doctest.h>

#include <map>
#include <random>
#include <tuple>

#include "ffl/arith.hpp"
#include "ffl/error.hpp"
#include "ffl/gsp.hpp"

using namespace ffl;

namespace {

/// M^T J M computed by plain matrix products, row-major, mod q.
std::vector<std::int64_t> gram(const std::vector<std::int64_t>& M, int g, std::int64_t q) {
    const int n = 2 * g;
    std::vector<std::int64_t> J(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < g; ++i) {
        J[static_cast<std::size_t>(i * n + i + g)] = 1;
        J[static_cast<std::size_t>((i + g) * n + i)] = -1;
    }
    auto at = [n](const std::vector<std::int64_t>& A, int r, int c) { return A[static_cast<std::size_t>(r * n + c)]; };
    std::vector<std::int64_t> JM(static_cast<std::size_t>(n * n), 0), out(static_cast<std::size_t>(n * n), 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::int64_t s = 0;
            for (int k = 0; k < n; ++k)
                s += at(J, r, k) * at(M, k, c);
            JM[static_cast<std::size_t>(r * n + c)] = mod_reduce(s, q);
        }
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::int64_t s = 0;
            for (int k = 0; k < n; ++k)
                s += at(M, k, r) * at(JM, k, c);
            out[static_cast<std::size_t>(r * n + c)] = mod_reduce(s, q);
        }
    return out;
}

/// Brute-force membership: M^T J M = mu J for a unit mu.
bool brute_member(const std::vector<std::int64_t>& M, int g, std::int64_t ell, std::int64_t q) {
    const auto G = gram(M, g, q);
    const int n = 2 * g;
    const std::int64_t mu = G[static_cast<std::size_t>(g)]; // entry (0, g)
    if (mu % ell == 0)
        return false;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int j = (c == r + g && r < g) ? 1 : (r == c + g && c < g) ? -1 : 0;
            if (G[static_cast<std::size_t>(r * n + c)] != mod_reduce(j * mu, q))
                return false;
        }
    return true;
}

} // namespace

TEST_CASE("order formula values") {
    CHECK(order_formula({1, 2, 1}) == 6);
    CHECK(order_formula({1, 3, 1}) == 48);
    CHECK(order_formula({1, 5, 1}) == 480);
    CHECK(order_formula({1, 2, 2}) == 96);
    CHECK(order_formula({1, 3, 2}) == 3888);
    CHECK(order_formula({2, 2, 1}) == 720);
    CHECK(order_formula({2, 3, 1}) == 103680);
    CHECK(order_formula({6, 7, 3}) > 0);
    CHECK_THROWS_AS(order_formula({7, 2, 1}), BoundsError);
    CHECK(gsp_dim(1) == 4);
    CHECK(gsp_dim(2) == 11);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(census({1, 4, 1}), DomainError);
    CHECK_THROWS_AS(census({0, 2, 1}), DomainError);
    CHECK_THROWS_AS(census({1, 2, 0}), DomainError);
    CHECK_THROWS_AS(census({3, 5, 2}), ResourceError);
    CHECK_THROWS_AS(census({2, 5, 1}), ResourceError);
}

TEST_CASE("genus 1 census equals a brute-force GL_2 enumeration") {
    // GSp_2 = GL_2 with multiplier det.
    for (auto [ell, m] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}}) {
        const GspParams params{1, ell, m};
        const std::int64_t q = params.modulus();
        std::map<std::int64_t, std::uint64_t> traces;
        std::uint64_t order = 0;
        for (std::int64_t a = 0; a < q; ++a)
            for (std::int64_t b = 0; b < q; ++b)
                for (std::int64_t c = 0; c < q; ++c)
                    for (std::int64_t d = 0; d < q; ++d)
                        if (mod_reduce(a * d - b * c, q) % ell != 0) {
                            ++order;
                            ++traces[(a + d) % q];
                        }
        const GspCensus c = census(params);
        CHECK(c.order == order);
        CHECK(BigInt(c.order) == order_formula(params));
        for (std::int64_t t = 0; t < q; ++t)
            CHECK(c.trace_counts.at(t) == traces[t]);
        CHECK(c.h_m == traces[0]);
    }
}

TEST_CASE("genus 2 censuses match the order formula") {
    for (std::int64_t ell : {2, 3}) {
        const GspParams params{2, ell, 1};
        const GspCensus c = census(params);
        CHECK(BigInt(c.order) == order_formula(params));
        std::uint64_t total = 0;
        for (const auto& [t, n] : c.trace_counts)
            total += n;
        CHECK(total == c.order);
    }
}

TEST_CASE("enumerated members pass the brute-force check") {
    const GspParams params{2, 2, 1};
    std::uint64_t n = 0;
    for_each_member(params, [&](std::span<const std::int64_t> M, std::int64_t mu) {
        const std::vector<std::int64_t> v(M.begin(), M.end());
        CHECK(brute_member(v, 2, 2, 2));
        CHECK(is_symplectic_similitude(M, params).member);
        CHECK(is_symplectic_similitude(M, params).multiplier == mu);
        ++n;
    });
    CHECK(n == 720);
}

TEST_CASE("membership check agrees with brute force on random matrices") {
    std::mt19937 rng(0);
    for (auto [g, ell, m] : std::vector<std::tuple<int, std::int64_t, int>>{{1, 3, 2}, {2, 3, 1}, {2, 5, 1}, {3, 2, 1}}) {
        const GspParams params{g, ell, m};
        const std::int64_t q = params.modulus();
        const int n = 2 * g;
        std::uniform_int_distribution<std::int64_t> entry(0, q - 1);
        for (int it = 0; it < 3000; ++it) {
            std::vector<std::int64_t> M(static_cast<std::size_t>(n * n));
            for (auto& x : M)
                x = entry(rng);
            CHECK(is_symplectic_similitude(M, params).member == brute_member(M, g, ell, q));
        }
        // Members are rare among random matrices; check a scaled identity too.
        std::vector<std::int64_t> I(static_cast<std::size_t>(n * n), 0);
        for (int i = 0; i < n; ++i)
            I[static_cast<std::size_t>(i * n + i)] = q - 1;
        const SimilitudeCheck s = is_symplectic_similitude(I, params);
        CHECK(s.member);
        CHECK(s.multiplier == 1);
    }
    CHECK_THROWS_AS(is_symplectic_similitude(std::vector<std::int64_t>(3, 0), GspParams{1, 2, 1}), DomainError);
}

TEST_CASE("census is identical across worker counts") {
    for (const GspParams& p : {GspParams{1, 3, 2}, GspParams{2, 3, 1}}) {
        const GspCensus a = census(p, 1), b = census(p, 4);
        CHECK(a.order == b.order);
        CHECK(a.trace_counts == b.trace_counts);
    }
}

TEST_CASE("trace decay report") {
    const DecayReport r = trace_decay_report(1, 2, 3);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].order == 6);
    CHECK(r.rows[0].h_m == 4);
    CHECK(r.rows[1].order == 96);
    CHECK(r.rows[1].h_m == 32);
    CHECK(r.C_at_m1 == doctest::Approx(4.0 / 3));
    CHECK(r.holds_with_C_at_m1);
    for (const DecayRow& row : r.rows)
        CHECK(row.ratio <= r.fitted_C * row.ell_pow_neg_m * (1 + 1e-12));
    CHECK_THROWS_AS(trace_decay_report(1, 2, 0), DomainError);
    CHECK_THROWS_AS(trace_decay_report(2, 3, 2), ResourceError);
}
