#include "ffl/gsp.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include "ffl/arith.hpp"
#include "ffl/error.hpp"
#include "ffl/parallel.hpp"

namespace ffl {

namespace {

/// omega(u, v) = u^T J v = sum_{k<g} (u_k v_{k+g} - u_{k+g} v_k) mod q.
std::int64_t omega(const std::int64_t* u, const std::int64_t* v, int g, std::int64_t q) {
    std::int64_t s = 0;
    for (int k = 0; k < g; ++k)
        s += u[k] * v[k + g] - u[k + g] * v[k];
    return mod_reduce(s, q);
}

/// Column-by-column search over GSp members.
class MemberSearch {
public:
    explicit MemberSearch(const GspParams& params)
        : g_(params.g), n_(params.dim()), q_(params.modulus()), ell_(params.ell) {
        std::int64_t count = 1;
        for (int i = 0; i < n_; ++i)
            count *= q_;
        vectors_.resize(static_cast<std::size_t>(count * n_));
        for (std::int64_t idx = 0; idx < count; ++idx) {
            std::int64_t rest = idx;
            for (int k = 0; k < n_; ++k) {
                vectors_[static_cast<std::size_t>(idx * n_ + k)] = rest % q_;
                rest /= q_;
            }
        }
        vector_count_ = count;
        // Column order 0, g, 1, g+1, ...: the multiplier is fixed by the
        // first pair and every later column meets a full set of constraints.
        for (int i = 0; i < g_; ++i) {
            order_.push_back(i);
            order_.push_back(i + g_);
        }
    }

    std::int64_t vector_count() const noexcept { return vector_count_; }

    /// Visits all members whose first column is vector `first`.
    template <class Visit>
    void run_from(std::int64_t first, Visit&& visit) const {
        std::vector<std::int64_t> chosen(static_cast<std::size_t>(n_), -1);
        chosen[0] = first;
        descend(1, chosen, 0, visit);
    }

    /// Row-major matrix from chosen column indices (indexed by column).
    void fill_matrix(const std::vector<std::int64_t>& columns, std::vector<std::int64_t>& m) const {
        m.assign(static_cast<std::size_t>(n_ * n_), 0);
        for (int c = 0; c < n_; ++c) {
            const std::int64_t* v = vec(columns[c]);
            for (int r = 0; r < n_; ++r)
                m[static_cast<std::size_t>(r * n_ + c)] = v[r];
        }
    }

    /// Trace mod q of the matrix with the given columns.
    std::int64_t trace(const std::vector<std::int64_t>& columns) const {
        std::int64_t tr = 0;
        for (int c = 0; c < n_; ++c)
            tr += vec(columns[c])[c];
        return tr % q_;
    }

private:
    const std::int64_t* vec(std::int64_t idx) const { return vectors_.data() + idx * n_; }

    /// J entry for column positions (a, b).
    int j_entry(int a, int b) const {
        if (b == a + g_ && a < g_)
            return 1;
        if (a == b + g_ && b < g_)
            return -1;
        return 0;
    }

    // `chosen` is indexed by search level; order_[level] is the column.
    template <class Visit>
    void descend(int level, std::vector<std::int64_t>& chosen, std::int64_t mu, Visit& visit) const {
        if (level == n_) {
            std::vector<std::int64_t> columns(static_cast<std::size_t>(n_));
            for (int l = 0; l < n_; ++l)
                columns[order_[l]] = chosen[l];
            visit(columns, mu);
            return;
        }
        const int col = order_[level];
        for (std::int64_t cand = 0; cand < vector_count_; ++cand) {
            const std::int64_t* v = vec(cand);
            std::int64_t level_mu = mu;
            bool ok = true;
            for (int l = 0; l < level && ok; ++l) {
                const int prev_col = order_[l];
                const std::int64_t w = omega(vec(chosen[l]), v, g_, q_);
                const int j = j_entry(prev_col, col);
                if (level == 1) {
                    // First pair (column 0, column g) defines mu.
                    if (w % ell_ == 0)
                        ok = false;
                    level_mu = w;
                } else if (w != mod_reduce(j * level_mu, q_)) {
                    ok = false;
                }
            }
            if (!ok)
                continue;
            chosen[level] = cand;
            descend(level + 1, chosen, level_mu, visit);
        }
        chosen[level] = -1;
    }

    int g_;
    int n_;
    std::int64_t q_;
    std::int64_t ell_;
    std::int64_t vector_count_ = 0;
    std::vector<std::int64_t> vectors_;
    std::vector<int> order_;
};

} // namespace

std::int64_t GspParams::modulus() const {
    std::int64_t q = 1;
    for (int i = 0; i < m; ++i)
        q *= ell;
    return q;
}

double GspParams::search_space() const {
    return std::pow(static_cast<double>(ell), static_cast<double>(m) * dim() * dim());
}

void GspParams::validate() const {
    if (g < 1)
        throw DomainError("GSp needs g >= 1");
    if (m < 1)
        throw DomainError("GSp needs m >= 1");
    Prime::certify(ell);
}

int gsp_dim(int g) {
    if (g < 1)
        throw DomainError("gsp_dim needs g >= 1");
    return 2 * g * g + g + 1;
}

SimilitudeCheck is_symplectic_similitude(std::span<const std::int64_t> M, const GspParams& params) {
    params.validate();
    const int n = params.dim();
    const int g = params.g;
    const std::int64_t q = params.modulus();
    if (M.size() != static_cast<std::size_t>(n * n))
        throw DomainError("matrix size does not match 2g x 2g");
    std::vector<std::int64_t> cols(static_cast<std::size_t>(n * n));
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            cols[static_cast<std::size_t>(c * n + r)] = mod_reduce(M[static_cast<std::size_t>(r * n + c)], q);
    const std::int64_t mu = omega(&cols[0], &cols[static_cast<std::size_t>(g * n)], g, q);
    if (mu % params.ell == 0)
        return {false, mu};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int jij = (j == i + g && i < g) ? 1 : (i == j + g && j < g) ? -1 : 0;
            const std::int64_t w = omega(&cols[static_cast<std::size_t>(i * n)], &cols[static_cast<std::size_t>(j * n)], g, q);
            if (w != mod_reduce(jij * mu, q))
                return {false, mu};
        }
    return {true, mu};
}

void for_each_member(const GspParams& params,
                     const std::function<void(std::span<const std::int64_t>, std::int64_t)>& visit) {
    params.validate();
    if (params.search_space() > kCensusBudget)
        throw ResourceError("GSp enumeration infeasible: ell^(m(2g)^2) exceeds 5e9");
    const MemberSearch search(params);
    std::vector<std::int64_t> matrix;
    for (std::int64_t first = 0; first < search.vector_count(); ++first)
        search.run_from(first, [&](const std::vector<std::int64_t>& columns, std::int64_t mu) {
            search.fill_matrix(columns, matrix);
            visit(matrix, mu);
        });
}

GspCensus census(const GspParams& params, unsigned workers) {
    params.validate();
    if (params.search_space() > kCensusBudget)
        throw ResourceError("GSp census infeasible for g=" + std::to_string(params.g) +
                            " l=" + std::to_string(params.ell) + " m=" + std::to_string(params.m) +
                            ": ell^(m(2g)^2) exceeds the bound 5e9");
    const MemberSearch search(params);
    const std::int64_t q = params.modulus();

    std::vector<std::uint64_t> totals(static_cast<std::size_t>(q), 0);
    std::mutex totals_mutex;
    parallel_chunks(static_cast<std::size_t>(search.vector_count()), workers, 1,
                    [&](std::size_t begin, std::size_t end) {
                        std::vector<std::uint64_t> local(static_cast<std::size_t>(q), 0);
                        for (std::size_t first = begin; first < end; ++first)
                            search.run_from(static_cast<std::int64_t>(first),
                                            [&](const std::vector<std::int64_t>& columns, std::int64_t) {
                                                ++local[static_cast<std::size_t>(search.trace(columns))];
                                            });
                        std::lock_guard lock(totals_mutex);
                        for (std::size_t t = 0; t < local.size(); ++t)
                            totals[t] += local[t];
                    });

    GspCensus c;
    c.params = params;
    for (std::int64_t t = 0; t < q; ++t) {
        c.trace_counts[t] = totals[static_cast<std::size_t>(t)];
        c.order += totals[static_cast<std::size_t>(t)];
    }
    c.h_m = c.trace_counts[0];
    return c;
}

BigInt order_formula(const GspParams& params) {
    params.validate();
    if (params.g > 6)
        throw BoundsError("order_formula is limited to g <= 6");
    const BigInt ell = params.ell;
    BigInt order = ell - 1;
    order *= boost::multiprecision::pow(ell, static_cast<unsigned>(params.g * params.g));
    for (int i = 1; i <= params.g; ++i)
        order *= boost::multiprecision::pow(ell, static_cast<unsigned>(2 * i)) - 1;
    order *= boost::multiprecision::pow(ell, static_cast<unsigned>((params.m - 1) * gsp_dim(params.g)));
    return order;
}

DecayReport trace_decay_report(int g, std::int64_t ell, int m_max, unsigned workers) {
    if (m_max < 1)
        throw DomainError("trace decay report needs m_max >= 1");
    for (int m = 1; m <= m_max; ++m) {
        const GspParams p{g, ell, m};
        p.validate();
        if (p.search_space() > kCensusBudget)
            throw ResourceError("trace decay report infeasible at m=" + std::to_string(m));
    }
    DecayReport rep;
    rep.g = g;
    rep.ell = ell;
    for (int m = 1; m <= m_max; ++m) {
        const GspCensus c = census(GspParams{g, ell, m}, workers);
        DecayRow row;
        row.m = m;
        row.order = c.order;
        row.h_m = c.h_m;
        row.ratio = c.ratio();
        row.ell_pow_neg_m = std::pow(static_cast<double>(ell), -m);
        rep.fitted_C = std::max(rep.fitted_C, row.ratio / row.ell_pow_neg_m);
        rep.rows.push_back(row);
    }
    rep.C_at_m1 = rep.rows.front().ratio * static_cast<double>(ell);
    rep.holds_with_C_at_m1 = true;
    for (const DecayRow& row : rep.rows)
        if (row.ratio > rep.C_at_m1 * row.ell_pow_neg_m * (1 + 1e-12))
            rep.holds_with_C_at_m1 = false;
    return rep;
}

} // namespace ffl
