#include "ffl/transcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ffl/error.hpp"
#include "ffl/parallel.hpp"

namespace ffl {

namespace {

using i128 = __int128;

/// Exact test of p <= N * 2g * sqrt(p) + |r|.
bool within_hasse_chain(std::int64_t p, const Rational& b, int genus) {
    const i128 lhs = static_cast<i128>(p) - std::abs(b.num());
    if (lhs <= 0)
        return true;
    const i128 n = b.den();
    return lhs * lhs <= 4 * static_cast<i128>(genus) * genus * n * n * p;
}

std::size_t checked_pi(const TraceTable& table, std::int64_t X) {
    if (X > table.X)
        throw BoundsError("X=" + std::to_string(X) + " exceeds the table bound " + std::to_string(table.X));
    const std::size_t pi = prime_pi(X);
    if (pi == 0)
        throw BoundsError("density needs X >= 2");
    return pi;
}

} // namespace

double threshold_K(const Rational& b) {
    if (b.is_zero())
        throw DomainError("forcing threshold needs b != 0");
    const double n = static_cast<double>(b.den());
    const double n_abs_b = std::abs(static_cast<double>(b.num())); // N |b| = |r|
    const double root = n + std::sqrt(n * n + n_abs_b);
    return root * root;
}

ForcingReport forcing_scan(const TraceTable& table, const Rational& b, const NumberFieldPoly& L, unsigned workers) {
    if (table.genus != 1)
        throw Unsupported("forcing scan needs a genus-1 table");
    ForcingReport rep;
    rep.curve_id = table.curve_id;
    rep.b = b;
    rep.K = threshold_K(b);
    rep.L_poly = L.label();
    rep.X = table.X;
    rep.entries.resize(table.records.size());

    parallel_chunks(table.records.size(), workers, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const TraceRecord& r = table.records[i];
            ForcingEntry& e = rep.entries[i];
            e.p = r.p;
            e.split = is_totally_split(L, r.p) == SplitType::Split;
            const i128 lhs = static_cast<i128>(b.den()) * r.a_p;
            e.equal = lhs == b.num();
            e.congruent = (lhs - b.num()) % r.p == 0;
        }
    });

    for (const ForcingEntry& e : rep.entries) {
        const bool above_K = static_cast<double>(e.p) > rep.K;
        const bool integral = b.den() % e.p != 0;
        rep.s1_count += e.split;
        rep.congruent_count += e.congruent;
        if (integral && above_K && e.equal) {
            ++rep.s3_count;
            rep.s2_count += e.split;
        }
        if (e.congruent && !e.equal) {
            if (!within_hasse_chain(e.p, b, 1))
                rep.chain_failures.push_back(e.p);
            if (e.split && above_K)
                rep.violations.push_back(e.p);
        }
    }
    return rep;
}

DensityEstimate s3_density(const TraceTable& table, const Rational& b, std::int64_t X) {
    const double K = threshold_K(b);
    DensityEstimate d;
    d.set_label = "S3 b=" + b.to_string() + " " + table.curve_id;
    d.pi_x = checked_pi(table, X);
    d.X = X;
    for (const TraceRecord& r : table.records) {
        if (r.p > X)
            break;
        if (static_cast<double>(r.p) > K && b.den() % r.p != 0 &&
            static_cast<i128>(b.den()) * r.a_p == b.num())
            ++d.count;
    }
    d.estimate = static_cast<double>(d.count) / static_cast<double>(d.pi_x);
    return d;
}

DensityEstimate zero_trace_density(const TraceTable& table, std::int64_t X) {
    DensityEstimate d;
    d.set_label = "S zero trace " + table.curve_id;
    d.pi_x = checked_pi(table, X);
    d.X = X;
    for (const TraceRecord& r : table.records) {
        if (r.p > X)
            break;
        d.count += r.a_p == 0;
    }
    d.estimate = static_cast<double>(d.count) / static_cast<double>(d.pi_x);
    return d;
}

CountReport count_T(const TraceTable& table, std::int64_t ell, std::int64_t X) {
    if (ell < 2)
        throw DomainError("count_T needs a prime ell");
    Prime::certify(ell);
    CountReport rep;
    rep.X = X;
    rep.ell = ell;
    rep.pi_x = checked_pi(table, X);
    for (const TraceRecord& r : table.records) {
        if (r.p > X)
            break;
        ++rep.records;
        if (r.a_p == 0)
            ++rep.zero_count;
        else if (r.a_p % ell == 0)
            ++rep.t_count;
        else
            ++rep.nondivisible_count;
    }
    const double x = static_cast<double>(X);
    rep.x_over_log_x = x / std::log(x);
    rep.sqrt_x_log_x = std::sqrt(x) * std::log(x);
    rep.t_over_pi = static_cast<double>(rep.t_count) / static_cast<double>(rep.pi_x);
    rep.t_over_x_over_log_x = static_cast<double>(rep.t_count) / rep.x_over_log_x;
    rep.t_over_sqrt_x_log_x = static_cast<double>(rep.t_count) / rep.sqrt_x_log_x;
    rep.exceeds_sqrt_bound = static_cast<double>(rep.t_count) > rep.sqrt_x_log_x;
    return rep;
}

NormGapReport norm_gap_census(const TraceTable& table, const std::vector<Rational>& b_list, std::int64_t X) {
    NormGapReport rep;
    rep.X = X;
    rep.b_list = b_list;
    checked_pi(table, X);
    for (const TraceRecord& r : table.records) {
        if (r.p > X)
            break;
        for (const Rational& b : b_list) {
            const i128 gap = static_cast<i128>(b.den()) * r.a_p - b.num();
            if (gap == 0 || gap % r.p != 0)
                continue;
            rep.primes.push_back(r.p);
            if (!within_hasse_chain(r.p, b, table.genus))
                rep.chain_failures.push_back(r.p);
            break;
        }
    }
    rep.count = rep.primes.size();
    const double x = static_cast<double>(std::max<std::int64_t>(X, 3));
    rep.sqrt_x_log_x = std::sqrt(x) * std::log(x);
    rep.fitted_C = static_cast<double>(rep.count) / rep.sqrt_x_log_x;
    return rep;
}

std::vector<Rational> default_b_values() {
    return {Rational(1), Rational(-1), Rational(2), Rational(-2), Rational(3), Rational(-3), Rational(1, 2)};
}

} // namespace ffl
