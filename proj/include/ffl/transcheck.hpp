#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffl/arith.hpp"
#include "ffl/curves.hpp"
#include "ffl/splitfield.hpp"

namespace ffl {

/// K = (N + sqrt(N^2 + N|b|))^2 for b = r/N: above K, a_p = b mod p forces
/// a_p = b. Throws DomainError for b = 0.
double threshold_K(const Rational& b);

struct ForcingEntry {
    std::int64_t p = 0;
    bool split = false;
    bool congruent = false; // N a_p = r (mod p)
    bool equal = false;     // N a_p = r
};

struct ForcingReport {
    std::string curve_id;
    Rational b;
    double K = 0.0;
    std::string L_poly;
    std::int64_t X = 0;
    std::vector<ForcingEntry> entries;
    std::size_t s1_count = 0;        // split primes among the good primes of the table
    std::size_t s2_count = 0;        // split, p not dividing N, p > K, a_p = b
    std::size_t s3_count = 0;        // p not dividing N, p > K, a_p = b
    std::size_t congruent_count = 0;
    /// Split, congruent, unequal primes above K. Expected empty.
    std::vector<std::int64_t> violations;
    /// Congruent unequal primes where p <= N(2 sqrt p + |b|) fails. Expected empty.
    std::vector<std::int64_t> chain_failures;
};

/// Classifies every record of a genus-1 table against b and the splitting of
/// L. Throws DomainError for b = 0 and Unsupported for genus 2.
ForcingReport forcing_scan(const TraceTable& table, const Rational& b, const NumberFieldPoly& L,
                           unsigned workers = 1);

/// #{good p <= X : p > K, p does not divide N, N a_p = r} / pi(X).
DensityEstimate s3_density(const TraceTable& table, const Rational& b, std::int64_t X);

/// #{p <= X : a_p = 0} / pi(X).
DensityEstimate zero_trace_density(const TraceTable& table, std::int64_t X);

struct CountReport {
    std::int64_t X = 0;
    std::int64_t ell = 2;
    std::size_t t_count = 0; // #{p <= X : a_p != 0, ell | a_p}
    std::size_t pi_x = 0;
    std::size_t records = 0;
    std::size_t zero_count = 0;
    std::size_t nondivisible_count = 0;
    double x_over_log_x = 0.0;
    double sqrt_x_log_x = 0.0;
    double t_over_pi = 0.0;
    double t_over_x_over_log_x = 0.0;
    double t_over_sqrt_x_log_x = 0.0;
    bool exceeds_sqrt_bound = false;
};

/// Counts T and the other two parts of the partition of the records.
CountReport count_T(const TraceTable& table, std::int64_t ell, std::int64_t X);

struct NormGapReport {
    std::int64_t X = 0;
    std::vector<Rational> b_list;
    std::size_t count = 0;
    std::vector<std::int64_t> primes;
    double sqrt_x_log_x = 0.0;
    double fitted_C = 0.0;
    /// Counted primes where p <= N(2 g sqrt p) + |r| fails. Expected empty.
    std::vector<std::int64_t> chain_failures;
};

/// Primes p <= X with p | N a_p - r and N a_p != r for some b = r/N in the list.
NormGapReport norm_gap_census(const TraceTable& table, const std::vector<Rational>& b_list, std::int64_t X);

/// The default b sweep {1, -1, 2, -2, 3, -3, 1/2}.
std::vector<Rational> default_b_values();

} // namespace ffl
