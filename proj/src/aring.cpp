#include "ffl/aring.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ffl/curves.hpp"
#include "ffl/error.hpp"
#include "ffl/parallel.hpp"

namespace ffl {

namespace {

using Matrix = std::vector<std::int64_t>; // row-major k x k

Matrix mat_mul(const Matrix& a, const Matrix& b, std::size_t k, std::int64_t p) {
    Matrix c(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            const std::int64_t ail = a[i * k + l];
            if (ail == 0)
                continue;
            for (std::size_t j = 0; j < k; ++j)
                c[i * k + j] = (c[i * k + j] + ail * b[l * k + j]) % p;
        }
    return c;
}

Matrix mat_pow(Matrix base, std::uint64_t e, std::size_t k, std::int64_t p) {
    Matrix result(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        result[i * k + i] = 1 % p;
    while (e) {
        if (e & 1)
            result = mat_mul(result, base, k, p);
        e >>= 1;
        if (e)
            base = mat_mul(base, base, k, p);
    }
    return result;
}

std::optional<std::int64_t> recurrence_at_prime(const LinearRecurrence& rec, std::int64_t p) {
    const std::size_t k = rec.order();
    std::vector<std::int64_t> c(k), a(k);
    for (std::size_t i = 0; i < k; ++i) {
        auto ci = rational_mod(rec.coeffs[i], p);
        auto ai = rational_mod(rec.initial[i], p);
        if (!ci || !ai)
            return std::nullopt;
        c[i] = *ci;
        a[i] = *ai;
    }
    if (static_cast<std::uint64_t>(p) < k)
        return a[static_cast<std::size_t>(p)];
    // State (a_{n}, a_{n-1}, ..., a_{n-k+1}) advanced by the companion matrix.
    Matrix m(k * k, 0);
    for (std::size_t j = 0; j < k; ++j)
        m[j] = c[j];
    for (std::size_t i = 1; i < k; ++i)
        m[i * k + (i - 1)] = 1;
    const Matrix mp = mat_pow(std::move(m), static_cast<std::uint64_t>(p) - (k - 1), k, p);
    std::int64_t top = 0;
    for (std::size_t j = 0; j < k; ++j)
        top = (top + mp[j] * a[k - 1 - j]) % p;
    return top;
}

std::int64_t qfib_mod(std::int64_t q, std::int64_t p) {
    const std::int64_t qr = mod_reduce(q, p);
    std::int64_t prev = 0, cur = 1, power = 1 % p; // F_0, F_1, q^0
    for (std::int64_t n = 2; n <= p; ++n) {
        const std::int64_t next = (cur + power * prev) % p;
        prev = cur;
        cur = next;
        power = power * qr % p;
    }
    return cur;
}

void require_same_window(const ResidueSequence& s, const ResidueSequence& t) {
    if (!(s.window() == t.window()))
        throw WindowMismatch("residue sequences have different windows");
}

std::int64_t content(const PolyCoeffs& f) {
    std::int64_t g = 0;
    for (std::int64_t c : f)
        g = std::gcd(g, std::abs(c));
    return g;
}

std::int64_t max_abs(const PolyCoeffs& f) {
    std::int64_t m = 0;
    for (std::int64_t c : f)
        m = std::max(m, std::abs(c));
    return m;
}

bool ordered_before(const PolyCoeffs& a, const PolyCoeffs& b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    const std::int64_t ma = max_abs(a), mb = max_abs(b);
    if (ma != mb)
        return ma < mb;
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    n = std::abs(n);
    for (std::int64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d)
                out.push_back(n / d);
        }
    return out;
}

} // namespace

ResidueSequence::ResidueSequence(std::string label, Window window) : label_(std::move(label)), window_(window) {
    if (window.X >= 2)
        for (Prime p : sieve_primes(window.X))
            if (p >= window.p_min)
                primes_.push_back(p);
    values_.assign(primes_.size(), -1);
}

std::optional<std::int64_t> ResidueSequence::at_prime(std::int64_t p) const {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p)
        throw BoundsError(std::to_string(p) + " is not a prime of the window");
    return at(static_cast<std::size_t>(it - primes_.begin()));
}

std::vector<std::int64_t> ResidueSequence::undefined_primes() const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < primes_.size(); ++i)
        if (values_[i] < 0)
            out.push_back(primes_[i]);
    return out;
}

void LinearRecurrence::validate() const {
    if (coeffs.empty())
        throw DomainError("linear recurrence needs order k >= 1");
    if (initial.size() != coeffs.size())
        throw DomainError("linear recurrence needs exactly k initial values");
    if (coeffs.back().is_zero())
        throw DomainError("linear recurrence needs c_k != 0");
}

LinearRecurrence LinearRecurrence::fibonacci() {
    return {{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
}

LinearRecurrence LinearRecurrence::constant(const Rational& c) {
    return {{Rational(1)}, {c}};
}

ResidueSequence from_linear_recurrence(const LinearRecurrence& rec, Window window, unsigned workers) {
    rec.validate();
    if (window.X > kMaxRecurrenceBound)
        throw ResourceError("recurrence window X exceeds 10^7");
    ResidueSequence t("linrec", window);
    parallel_chunks(t.size(), workers, 512, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            if (auto v = recurrence_at_prime(rec, t.primes()[i]))
                t.set(i, *v);
    });
    return t;
}

ResidueSequence from_qfibonacci(std::int64_t q, Window window, unsigned workers) {
    if (q <= 1)
        throw DomainError("q-Fibonacci needs an integer q > 1");
    if (window.X > kMaxQFibBound)
        throw ResourceError("q-Fibonacci window X exceeds 10^6");
    ResidueSequence t("qfib q=" + std::to_string(q), window);
    parallel_chunks(t.size(), workers, 16, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            t.set(i, qfib_mod(q, t.primes()[i]));
    });
    return t;
}

PolyCoeffs qfib_poly(int n) {
    if (n < 0)
        throw DomainError("q-Fibonacci index must be nonnegative");
    if (n > 60)
        throw BoundsError("qfib_poly is limited to n <= 60");
    PolyCoeffs prev{}, cur{1}; // F_0 = 0, F_1 = 1
    if (n == 0)
        return prev;
    for (int m = 2; m <= n; ++m) {
        // F_m = F_{m-1} + q^{m-2} F_{m-2}
        PolyCoeffs next = cur;
        const std::size_t shift = static_cast<std::size_t>(m - 2);
        if (next.size() < prev.size() + shift)
            next.resize(prev.size() + shift, 0);
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i + shift] += prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

ResidueSequence from_traces(const TraceTable& table) {
    ResidueSequence t("traces " + table.curve_id, Window{table.p_min + 1, table.X});
    std::size_t j = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::int64_t p = t.primes()[i];
        while (j < table.records.size() && table.records[j].p < p)
            ++j;
        if (j < table.records.size() && table.records[j].p == p)
            t.set(i, table.records[j].a_p);
    }
    return t;
}

ResidueSequence from_rational(const Rational& b, Window window) {
    ResidueSequence t("const " + b.to_string(), window);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (auto v = rational_mod(b, t.primes()[i]))
            t.set(i, *v);
    return t;
}

ResidueSequence seq_add(const ResidueSequence& s, const ResidueSequence& t) {
    require_same_window(s, t);
    ResidueSequence out("(" + s.label() + ")+(" + t.label() + ")", s.window());
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto a = s.at(i), b = t.at(i);
        if (a && b)
            out.set(i, *a + *b);
    }
    return out;
}

ResidueSequence seq_mul(const ResidueSequence& s, const ResidueSequence& t) {
    require_same_window(s, t);
    ResidueSequence out("(" + s.label() + ")*(" + t.label() + ")", s.window());
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto a = s.at(i), b = t.at(i);
        if (a && b)
            out.set(i, mul_mod(*a, *b, s.primes()[i]));
    }
    return out;
}

ResidueSequence poly_eval(const PolyCoeffs& f, const ResidueSequence& t) {
    ResidueSequence out("f(" + t.label() + ")", t.window());
    for (std::size_t i = 0; i < t.size(); ++i)
        if (auto v = t.at(i))
            out.set(i, polymod::eval(f, *v, t.primes()[i]));
    return out;
}

std::int64_t cofinite_cutoff(const Window& w) noexcept {
    return w.p_min + (w.X - w.p_min) / 10;
}

ZeroCheck is_zero_cofinite(const ResidueSequence& t) {
    ZeroCheck check;
    const std::int64_t cutoff = cofinite_cutoff(t.window());
    for (std::size_t i = t.size(); i-- > 0;) {
        auto v = t.at(i);
        if (!v || *v == 0)
            continue;
        if (!check.largest_nonzero)
            check.largest_nonzero = t.primes()[i];
        if (t.primes()[i] >= cutoff)
            check.zero = false;
        break;
    }
    return check;
}

std::uint64_t relation_budget(int degree_bound, std::int64_t height_bound) noexcept {
    const auto base = static_cast<unsigned __int128>(2 * height_bound + 1);
    unsigned __int128 total = 1;
    for (int i = 0; i <= degree_bound; ++i) {
        total *= base;
        if (total > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(total);
}

AnnihilatorReport relation_search(const ResidueSequence& t, int degree_bound, std::int64_t height_bound,
                                  unsigned workers) {
    if (degree_bound < 0 || height_bound < 1)
        throw DomainError("relation search needs D >= 0 and H >= 1");
    const std::uint64_t budget = relation_budget(degree_bound, height_bound);
    if (budget > kRelationBudget)
        throw ResourceError("relation search budget (2H+1)^(D+1) = " + std::to_string(budget) +
                            " exceeds 10^8");

    // Defined entries in the upper 90% of the window, largest prime first so
    // most candidates are rejected after one or two evaluations.
    struct Point {
        std::int64_t p;
        std::int64_t v;
    };
    std::vector<Point> points;
    const std::int64_t cutoff = cofinite_cutoff(t.window());
    for (std::size_t i = t.size(); i-- > 0;) {
        if (t.primes()[i] < cutoff)
            break;
        if (auto v = t.at(i))
            points.push_back({t.primes()[i], *v});
    }

    AnnihilatorReport report;
    report.label = t.label();
    report.degree_bound = degree_bound;
    report.height_bound = height_bound;
    report.window = t.window();

    const std::int64_t width = 2 * height_bound + 1;
    std::vector<PolyCoeffs> hits;
    std::mutex hits_mutex;
    for (int d = 0; d <= degree_bound; ++d) {
        // Lower coefficients a_0..a_{d-1} in [-H, H], leading a_d in [1, H].
        std::uint64_t count = static_cast<std::uint64_t>(height_bound);
        for (int i = 0; i < d; ++i)
            count *= static_cast<std::uint64_t>(width);
        report.candidates += count;
        parallel_chunks(count, workers, 4096, [&](std::size_t begin, std::size_t end) {
            PolyCoeffs f(static_cast<std::size_t>(d) + 1);
            std::vector<PolyCoeffs> local;
            for (std::size_t idx = begin; idx < end; ++idx) {
                std::uint64_t rest = idx;
                for (int i = 0; i < d; ++i) {
                    f[i] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(width)) - height_bound;
                    rest /= static_cast<std::uint64_t>(width);
                }
                f[d] = static_cast<std::int64_t>(rest) + 1;
                if (content(f) != 1)
                    continue;
                bool kills = true;
                for (const Point& pt : points) {
                    if (polymod::eval(f, pt.v, pt.p) != 0) {
                        kills = false;
                        break;
                    }
                }
                if (kills)
                    local.push_back(f);
            }
            if (!local.empty()) {
                std::lock_guard lock(hits_mutex);
                hits.insert(hits.end(), local.begin(), local.end());
            }
        });
    }

    std::sort(hits.begin(), hits.end(), ordered_before);
    for (PolyCoeffs& f : hits) {
        Annihilator a;
        a.largest_violation = is_zero_cofinite(poly_eval(f, t)).largest_nonzero;
        a.rational_roots = rational_roots(f);
        a.f = std::move(f);
        report.found.push_back(std::move(a));
    }
    return report;
}

std::vector<Rational> rational_roots(const PolyCoeffs& f_in) {
    PolyCoeffs f = f_in;
    polymod::trim(f);
    std::vector<Rational> roots;
    if (f.size() <= 1)
        return roots;
    std::size_t zeros = 0;
    while (zeros < f.size() && f[zeros] == 0)
        ++zeros;
    if (zeros > 0) {
        roots.emplace_back(0);
        f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(zeros));
    }
    if (f.size() > 1) {
        const int deg = static_cast<int>(f.size()) - 1;
        for (std::int64_t r : divisors(f.front()))
            for (std::int64_t s : divisors(f.back()))
                for (std::int64_t sign : {-1, 1}) {
                    if (std::gcd(r, s) != 1)
                        continue;
                    // s^deg f(r/s) = sum a_i r^i s^(deg-i)
                    BigInt acc = 0, rp = 1;
                    for (int i = 0; i <= deg; ++i) {
                        BigInt term = BigInt(f[i]) * rp;
                        for (int j = i; j < deg; ++j)
                            term *= s;
                        acc += term;
                        rp *= sign * r;
                    }
                    if (acc == 0)
                        roots.emplace_back(sign * r, s);
                }
    }
    std::sort(roots.begin(), roots.end(), [](const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num()) * b.den() < static_cast<__int128>(b.num()) * a.den();
    });
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::string poly_to_string(const PolyCoeffs& f) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = f.size(); i-- > 0;) {
        const std::int64_t c = f[i];
        if (c == 0)
            continue;
        const std::int64_t mag = std::abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        if (mag != 1 || i == 0)
            os << mag;
        if (i >= 1)
            os << 'X';
        if (i >= 2)
            os << '^' << i;
        first = false;
    }
    if (first)
        os << '0';
    return os.str();
}

void write_sequence_csv(std::ostream& os, const ResidueSequence& t) {
    os << "# label=" << t.label() << " pmin=" << t.window().p_min << " X=" << t.window().X << " version=1\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << t.primes()[i] << ',';
        if (auto v = t.at(i))
            os << *v;
        else
            os << '*';
        os << '\n';
    }
}

ResidueSequence read_sequence_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# label=", 0) != 0)
        throw DomainError("residue sequence CSV: missing header");
    const auto pmin_pos = header.rfind(" pmin=");
    const auto x_pos = header.rfind(" X=");
    const auto ver_pos = header.rfind(" version=");
    if (pmin_pos == std::string::npos || x_pos == std::string::npos || ver_pos == std::string::npos ||
        !(pmin_pos < x_pos && x_pos < ver_pos))
        throw DomainError("residue sequence CSV: malformed header");
    if (header.substr(ver_pos + 9) != "1")
        throw DomainError("residue sequence CSV: unsupported version");
    const std::string label = header.substr(8, pmin_pos - 8);
    const Window w{std::stoll(header.substr(pmin_pos + 6, x_pos - pmin_pos - 6)),
                   std::stoll(header.substr(x_pos + 3, ver_pos - x_pos - 3))};
    ResidueSequence t(label, w);
    std::string line;
    std::size_t i = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || i >= t.size() || std::stoll(line.substr(0, comma)) != t.primes()[i])
            throw DomainError("residue sequence CSV: row does not match the window primes");
        const std::string val = line.substr(comma + 1);
        if (val != "*")
            t.set(i, std::stoll(val));
        ++i;
    }
    if (i != t.size())
        throw DomainError("residue sequence CSV: missing rows");
    return t;
}

} // namespace ffl
