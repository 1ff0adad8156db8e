#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ffl/poly.hpp"

namespace ffl {

/// y^2 = x^3 + A x + B (genus 1) or y^2 = x^5 + c4 x^4 + ... + c0 (genus 2),
/// integer coefficients. Text form: `genus1:A,B` or `genus2:c4,c3,c2,c1,c0`.
struct CurveSpec {
    int genus = 1;
    /// genus 1: {A, B}; genus 2: {c4, c3, c2, c1, c0}.
    std::vector<std::int64_t> coeffs;
    std::string id;

    /// Parses and validates (nonsingular / squarefree). Throws DomainError.
    static CurveSpec parse(std::string_view text, std::string id = {});
    static CurveSpec elliptic(std::int64_t a, std::int64_t b, std::string id = {});
    static CurveSpec hyperelliptic(const std::vector<std::int64_t>& c4_to_c0, std::string id = {});

    /// Canonical text form, used in cache headers.
    std::string text() const;
    /// Right-hand side as an ascending monic coefficient vector.
    PolyCoeffs rhs() const;
    /// Smallest excluded prime bound: primes <= p_min() are skipped.
    std::int64_t p_min() const noexcept { return genus == 1 ? 3 : 2; }
};

/// genus 1: -16(4A^3 + 27B^2); genus 2: discriminant of f.
BigInt discriminant(const CurveSpec& curve);

/// genus 1: p > 3 and p does not divide the discriminant.
/// genus 2: p > 2 and f mod p squarefree.
bool good_reduction(const CurveSpec& curve, std::int64_t p);

/// a_p = -sum_x chi(f(x)) over F_p using a table of squares. Throws
/// PreconditionError at bad primes.
std::int64_t trace_char_sum(const CurveSpec& curve, std::int64_t p);

/// a_p = p + 1 - #C(F_p) by counting affine solutions (x, y) pairwise plus the
/// single point at infinity. Oracle only; requires p <= 10^4.
std::int64_t trace_naive(const CurveSpec& curve, std::int64_t p);

/// floor(2 g sqrt(p)), exactly.
std::int64_t hasse_weil_bound(int genus, std::int64_t p) noexcept;

struct TraceRecord {
    std::int64_t p = 0;
    std::int64_t a_p = 0;
    /// Sato-Tate angle for genus 1; NaN for genus 2.
    double theta = 0.0;

    friend bool operator==(const TraceRecord& a, const TraceRecord& b) {
        return a.p == b.p && a.a_p == b.a_p;
    }
};

struct TraceTable {
    std::string curve_id;
    std::string curve_text;
    int genus = 1;
    std::int64_t X = 0;
    std::int64_t p_min = 3;
    std::vector<TraceRecord> records;
    std::vector<std::int64_t> bad_primes;

    /// Builds a table from records over (p_min, X], recomputing angles and
    /// deriving bad_primes as the primes without a record.
    static TraceTable assemble(const CurveSpec& curve, std::int64_t X, std::vector<TraceRecord> records);
};

inline constexpr std::int64_t kMaxSweepBound = 10'000'000;

/// Traces for every good prime in (p_min, X]. The result is identical for
/// any worker count. Throws ResourceError when X > 10^7.
TraceTable trace_sweep(const CurveSpec& curve, std::int64_t X, unsigned workers = 1);

/// As trace_sweep, restricted to primes in (lo, X].
std::vector<TraceRecord> trace_range(const CurveSpec& curve, std::int64_t lo, std::int64_t X, unsigned workers = 1);

/// arccos(a_p / (2 sqrt p)) in [0, pi]; exactly pi/2 when a_p = 0.
double angle(std::int64_t p, std::int64_t a_p);
/// Throws Unsupported for genus 2.
double angle(const TraceRecord& record, int genus);

enum class CmClass { CM, NonCM };

struct CmVerdict {
    CmClass verdict = CmClass::NonCM;
    double score = 0.0;
};

inline constexpr double kCmThreshold = 0.25;
inline constexpr std::int64_t kCmMinBound = 10'000;

/// Zero-trace fraction of the records; CM iff it exceeds 0.25. Throws
/// InsufficientData when the table is genus 2, shorter than 10^4 or empty.
CmVerdict classify_cm(const TraceTable& table);

/// The shipped example set: CM y^2=x^3+x, x^3+1, x^3-2; non-CM x^3-x+1,
/// x^3+x+1; genus 2 y^2=x^5+1.
std::vector<CurveSpec> default_curves();

const char* to_string(CmClass c) noexcept;

} // namespace ffl
