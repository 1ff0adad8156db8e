#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "ffl/poly.hpp"

namespace ffl {

/// GSp_{2g}(Z / ell^m Z) with J = [[0, I_g], [-I_g, 0]].
struct GspParams {
    int g = 1;
    std::int64_t ell = 2;
    int m = 1;

    std::int64_t modulus() const;
    /// 2g.
    int dim() const noexcept { return 2 * g; }
    /// ell^(m (2g)^2), saturating.
    double search_space() const;
    /// Throws DomainError for g < 1, m < 1 or composite ell.
    void validate() const;
};

inline constexpr double kCensusBudget = 5e9;

/// dim GSp_{2g} = 2g^2 + g + 1.
int gsp_dim(int g);

struct SimilitudeCheck {
    bool member = false;
    std::int64_t multiplier = 0;
};

/// M (row-major 2g x 2g over Z/ell^m) is a member iff M^T J M = mu J for a
/// unit mu; reports mu.
SimilitudeCheck is_symplectic_similitude(std::span<const std::int64_t> M, const GspParams& params);

struct GspCensus {
    GspParams params;
    std::uint64_t order = 0;
    /// Trace value in [0, ell^m) -> number of members with that trace.
    std::map<std::int64_t, std::uint64_t> trace_counts;
    std::uint64_t h_m = 0;
    double ratio() const { return order ? static_cast<double>(h_m) / static_cast<double>(order) : 0.0; }
};

/// Calls visit(M, mu) for every member, M row-major. Columns are chosen one
/// at a time and each partial choice is rejected as soon as one of the
/// pairwise constraints omega(c_i, c_j) = mu J_ij fails.
void for_each_member(const GspParams& params,
                     const std::function<void(std::span<const std::int64_t>, std::int64_t)>& visit);

/// Exhaustive census. Throws ResourceError when ell^(m(2g)^2) > 5e9.
GspCensus census(const GspParams& params, unsigned workers = 1);

/// (ell-1) ell^{g^2} prod_{i=1..g} (ell^{2i} - 1) * ell^{(m-1) dim}. Needs g <= 6.
BigInt order_formula(const GspParams& params);

struct DecayRow {
    int m = 1;
    std::uint64_t order = 0;
    std::uint64_t h_m = 0;
    double ratio = 0.0;
    double ell_pow_neg_m = 0.0;
};

struct DecayReport {
    int g = 1;
    std::int64_t ell = 2;
    std::vector<DecayRow> rows;
    /// max over m of ratio * ell^m, so ratio <= C ell^-m holds for every row.
    double fitted_C = 0.0;
    /// ratio * ell at m = 1.
    double C_at_m1 = 0.0;
    /// ratio <= C_at_m1 * ell^-m for every computed m.
    bool holds_with_C_at_m1 = false;
};

/// Censuses for m = 1..m_max. Throws ResourceError if any is infeasible.
DecayReport trace_decay_report(int g, std::int64_t ell, int m_max, unsigned workers = 1);

} // namespace ffl
