#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ffl/arith.hpp"
#include "ffl/poly.hpp"

namespace ffl {

struct TraceTable;

/// Closed prime window [p_min, X].
struct Window {
    std::int64_t p_min = 5;
    std::int64_t X = 100'000;

    friend bool operator==(const Window&, const Window&) = default;
};

inline constexpr Window kDefaultWindow{5, 100'000};
inline constexpr std::int64_t kMaxRecurrenceBound = 10'000'000;
inline constexpr std::int64_t kMaxQFibBound = 1'000'000;

/// Truncation of an element (t_p mod p)_p of the ring prod F_p / sum F_p to
/// the primes of a window. Each entry is a residue in [0, p) or undefined;
/// only finitely many undefined entries can occur, so they do not change the
/// ring element.
class ResidueSequence {
public:
    ResidueSequence() = default;
    /// All entries start undefined.
    ResidueSequence(std::string label, Window window);

    const std::string& label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }
    const Window& window() const noexcept { return window_; }
    std::size_t size() const noexcept { return primes_.size(); }
    const std::vector<std::int64_t>& primes() const noexcept { return primes_; }

    std::optional<std::int64_t> at(std::size_t i) const {
        if (values_[i] < 0)
            return std::nullopt;
        return values_[i];
    }
    /// Value at prime p; nullopt when undefined. Throws BoundsError when p is
    /// not a prime of the window.
    std::optional<std::int64_t> at_prime(std::int64_t p) const;

    /// Stores v mod p_i.
    void set(std::size_t i, std::int64_t v) { values_[i] = mod_reduce(v, primes_[i]); }
    void set_undefined(std::size_t i) { values_[i] = -1; }

    std::vector<std::int64_t> undefined_primes() const;

    friend bool operator==(const ResidueSequence&, const ResidueSequence&) = default;

private:
    std::string label_;
    Window window_;
    std::vector<std::int64_t> primes_;
    std::vector<std::int64_t> values_;
};

/// a_n = c_1 a_{n-1} + ... + c_k a_{n-k} with rational data.
struct LinearRecurrence {
    std::vector<Rational> coeffs;  // c_1 .. c_k
    std::vector<Rational> initial; // a_0 .. a_{k-1}

    std::size_t order() const noexcept { return coeffs.size(); }
    /// Throws DomainError unless k >= 1, |initial| = k and c_k != 0.
    void validate() const;

    static LinearRecurrence fibonacci();
    static LinearRecurrence constant(const Rational& c);
};

/// t_p = a_p mod p via the k x k companion matrix raised to a power mod p.
/// Undefined exactly where p divides a denominator of the data.
ResidueSequence from_linear_recurrence(const LinearRecurrence& rec, Window window, unsigned workers = 1);

/// t_p = F_p(q) mod p for F_0 = 0, F_1 = 1, F_n = F_{n-1} + q^{n-2} F_{n-2},
/// iterated mod p. The index-dependent coefficient rules out matrix powering.
ResidueSequence from_qfibonacci(std::int64_t q, Window window, unsigned workers = 1);

/// F_n(q) in Z[q], ascending in q. Throws BoundsError for n > 60.
PolyCoeffs qfib_poly(int n);

/// t_p = a_p mod p on good primes; undefined at bad primes.
ResidueSequence from_traces(const TraceTable& table);

/// The constant element b; undefined where p divides the denominator.
ResidueSequence from_rational(const Rational& b, Window window);

/// Pointwise ring operations; undefined absorbs. Throw WindowMismatch.
ResidueSequence seq_add(const ResidueSequence& s, const ResidueSequence& t);
ResidueSequence seq_mul(const ResidueSequence& s, const ResidueSequence& t);

/// Pointwise Horner evaluation of an integer polynomial (ascending).
ResidueSequence poly_eval(const PolyCoeffs& f, const ResidueSequence& t);

/// First prime of the upper 90% of the window by value: p_min + (X - p_min)/10.
std::int64_t cofinite_cutoff(const Window& w) noexcept;

struct ZeroCheck {
    bool zero = true;
    std::optional<std::int64_t> largest_nonzero;
};

/// Zero in the quotient ring at this truncation: every defined entry at a
/// prime >= cofinite_cutoff is 0. Reports the largest nonzero prime overall.
ZeroCheck is_zero_cofinite(const ResidueSequence& t);

struct Annihilator {
    PolyCoeffs f;
    std::optional<std::int64_t> largest_violation;
    std::vector<Rational> rational_roots;
};

struct AnnihilatorReport {
    std::string label;
    int degree_bound = 0;
    std::int64_t height_bound = 0;
    Window window;
    std::uint64_t candidates = 0;
    std::vector<Annihilator> found;
};

inline constexpr std::uint64_t kRelationBudget = 100'000'000;

/// (2H+1)^(D+1), saturating at UINT64_MAX.
std::uint64_t relation_budget(int degree_bound, std::int64_t height_bound) noexcept;

/// Exhaustive search over integer f with deg f <= D, |coeffs| <= H, content 1
/// and positive leading coefficient for which f(t) is zero in the ring.
/// Hits are ordered by (degree, max |coeff|, coefficients from the top).
/// Throws ResourceError when the budget (2H+1)^(D+1) exceeds 10^8.
AnnihilatorReport relation_search(const ResidueSequence& t, int degree_bound, std::int64_t height_bound,
                                  unsigned workers = 1);

/// Rational roots of an integer polynomial (ascending), ascending, distinct.
std::vector<Rational> rational_roots(const PolyCoeffs& f);

/// Text form of an ascending integer polynomial in X, e.g. "X^2 - 1".
std::string poly_to_string(const PolyCoeffs& f);

/// CSV: `# label=<..> pmin=<..> X=<..> version=1` then rows `p,t_p` (`p,*`
/// when undefined).
void write_sequence_csv(std::ostream& os, const ResidueSequence& t);
ResidueSequence read_sequence_csv(std::istream& is);

} // namespace ffl
