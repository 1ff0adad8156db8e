#include "ffl/curves.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ffl/arith.hpp"
#include "ffl/error.hpp"
#include "ffl/parallel.hpp"

namespace ffl {

namespace {

std::vector<std::int64_t> parse_int_list(std::string_view text) {
    std::vector<std::int64_t> out;
    while (true) {
        const auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty() && item.front() == '+')
            item.remove_prefix(1);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
            throw DomainError("malformed integer '" + std::string(item) + "'");
        out.push_back(v);
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

void validate(const CurveSpec& c) {
    if (c.genus == 1) {
        if (c.coeffs.size() != 2)
            throw DomainError("genus-1 curve needs exactly two coefficients A,B");
    } else if (c.genus == 2) {
        if (c.coeffs.size() != 5)
            throw DomainError("genus-2 curve needs five coefficients c4,c3,c2,c1,c0");
    } else {
        throw DomainError("genus must be 1 or 2");
    }
    if (discriminant(c) == 0)
        throw DomainError("singular curve (zero discriminant): " + c.text());
}

/// Per-prime character-sum workspace. The quadratic character lives in a
/// table chi[v] in {-1, 0, 1}; f is walked by forward differences so the
/// inner loop is additions only.
class CharSumKernel {
public:
    std::int64_t trace(const PolyCoeffs& f, std::int64_t p) {
        build_chi(p);
        const int n = static_cast<int>(f.size()) - 1;
        std::vector<std::int64_t> d(n + 1);
        for (int k = 0; k <= n; ++k)
            d[k] = polymod::eval(f, k, p);
        for (int level = 1; level <= n; ++level)
            for (int k = n; k >= level; --k)
                d[k] = mod_reduce(d[k] - d[k - 1], p);
        const auto up = static_cast<std::uint32_t>(p);
        if (n == 3)
            return -walk<3>(d, up);
        if (n == 5)
            return -walk<5>(d, up);
        throw DomainError("unsupported curve degree");
    }

private:
    void build_chi(std::int64_t p) {
        chi_.assign(static_cast<std::size_t>(p), -1);
        chi_[0] = 0;
        std::int64_t s = 0;
        for (std::int64_t x = 1; x <= (p - 1) / 2; ++x) {
            s += 2 * x - 1;
            if (s >= p)
                s %= p;
            chi_[static_cast<std::size_t>(s)] = 1;
        }
    }

    template <int N>
    std::int64_t walk(const std::vector<std::int64_t>& init, std::uint32_t p) const {
        std::uint32_t d[N + 1];
        for (int i = 0; i <= N; ++i)
            d[i] = static_cast<std::uint32_t>(init[i]);
        const std::int8_t* chi = chi_.data();
        std::int64_t sum = 0;
        for (std::uint32_t x = 0; x < p; ++x) {
            sum += chi[d[0]];
            for (int i = 0; i < N; ++i) {
                std::uint32_t v = d[i] + d[i + 1];
                d[i] = v >= p ? v - p : v;
            }
        }
        return sum;
    }

    std::vector<std::int8_t> chi_;
};

} // namespace

CurveSpec CurveSpec::parse(std::string_view text, std::string id) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("curve text must look like genus1:A,B or genus2:c4,c3,c2,c1,c0");
    const std::string_view tag = text.substr(0, colon);
    CurveSpec c;
    if (tag == "genus1")
        c.genus = 1;
    else if (tag == "genus2")
        c.genus = 2;
    else
        throw DomainError("unknown curve tag '" + std::string(tag) + "'");
    c.coeffs = parse_int_list(text.substr(colon + 1));
    validate(c);
    c.id = id.empty() ? c.text() : std::move(id);
    return c;
}

CurveSpec CurveSpec::elliptic(std::int64_t a, std::int64_t b, std::string id) {
    CurveSpec c{1, {a, b}, {}};
    validate(c);
    c.id = id.empty() ? c.text() : std::move(id);
    return c;
}

CurveSpec CurveSpec::hyperelliptic(const std::vector<std::int64_t>& c4_to_c0, std::string id) {
    CurveSpec c{2, c4_to_c0, {}};
    validate(c);
    c.id = id.empty() ? c.text() : std::move(id);
    return c;
}

std::string CurveSpec::text() const {
    std::ostringstream os;
    os << "genus" << genus << ':';
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        os << (i ? "," : "") << coeffs[i];
    return os.str();
}

PolyCoeffs CurveSpec::rhs() const {
    if (genus == 1)
        return {coeffs[1], coeffs[0], 0, 1};
    PolyCoeffs f(6);
    for (int i = 0; i < 5; ++i)
        f[i] = coeffs[4 - i];
    f[5] = 1;
    return f;
}

BigInt discriminant(const CurveSpec& curve) {
    if (curve.genus == 1) {
        const BigInt a = curve.coeffs[0];
        const BigInt b = curve.coeffs[1];
        return BigInt(-16) * (4 * a * a * a + 27 * b * b);
    }
    const PolyCoeffs f = curve.rhs();
    return monic_discriminant(f);
}

bool good_reduction(const CurveSpec& curve, std::int64_t p) {
    if (curve.genus == 1) {
        if (p <= 3)
            return false;
        const std::int64_t a = mod_reduce(curve.coeffs[0], p);
        const std::int64_t b = mod_reduce(curve.coeffs[1], p);
        const std::int64_t a3 = mul_mod(mul_mod(a, a, p), a, p);
        const std::int64_t v = (mul_mod(4, a3, p) + mul_mod(27, mul_mod(b, b, p), p)) % p;
        return v != 0;
    }
    if (p <= 2)
        return false;
    const PolyCoeffs f = curve.rhs();
    return polymod::squarefree(f, p);
}

std::int64_t trace_char_sum(const CurveSpec& curve, std::int64_t p) {
    if (!good_reduction(curve, p))
        throw PreconditionError("bad reduction at p=" + std::to_string(p) + " for " + curve.text());
    CharSumKernel kernel;
    return kernel.trace(curve.rhs(), p);
}

std::int64_t trace_naive(const CurveSpec& curve, std::int64_t p) {
    if (p > 10'000)
        throw PreconditionError("trace_naive is limited to p <= 10^4");
    if (!good_reduction(curve, p))
        throw PreconditionError("bad reduction at p=" + std::to_string(p) + " for " + curve.text());
    const PolyCoeffs f = curve.rhs();
    std::int64_t points = 1; // the point at infinity
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t fx = polymod::eval(f, x, p);
        for (std::int64_t y = 0; y < p; ++y)
            if (y * y % p == fx)
                ++points;
    }
    return p + 1 - points;
}

std::int64_t hasse_weil_bound(int genus, std::int64_t p) noexcept {
    return isqrt(4 * static_cast<std::int64_t>(genus) * genus * p);
}

TraceTable TraceTable::assemble(const CurveSpec& curve, std::int64_t X, std::vector<TraceRecord> records) {
    TraceTable t;
    t.curve_id = curve.id;
    t.curve_text = curve.text();
    t.genus = curve.genus;
    t.X = X;
    t.p_min = curve.p_min();
    std::sort(records.begin(), records.end(), [](const TraceRecord& a, const TraceRecord& b) { return a.p < b.p; });
    for (auto& r : records) {
        if (r.p <= t.p_min || r.p > X)
            throw InvariantViolation("trace record p=" + std::to_string(r.p) + " outside (p_min, X]");
        r.theta = curve.genus == 1 ? angle(r.p, r.a_p) : std::numeric_limits<double>::quiet_NaN();
    }
    if (X >= 2) {
        std::size_t i = 0;
        for (Prime p : sieve_primes(X)) {
            if (p <= t.p_min)
                continue;
            if (i < records.size() && records[i].p == p) {
                ++i;
                continue;
            }
            t.bad_primes.push_back(p);
        }
        if (i != records.size())
            throw InvariantViolation("trace records contain a non-prime or duplicate index");
    }
    t.records = std::move(records);
    return t;
}

std::vector<TraceRecord> trace_range(const CurveSpec& curve, std::int64_t lo, std::int64_t X, unsigned workers) {
    if (X > kMaxSweepBound)
        throw ResourceError("sweep bound X=" + std::to_string(X) + " exceeds the limit 10^7");
    if (X < 2)
        return {};
    std::vector<std::int64_t> primes;
    for (Prime p : sieve_primes(X))
        if (p > lo && p > curve.p_min())
            primes.push_back(p);

    constexpr std::int64_t kBad = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> traces(primes.size(), kBad);
    const PolyCoeffs f = curve.rhs();
    parallel_chunks(primes.size(), workers, 32, [&](std::size_t begin, std::size_t end) {
        CharSumKernel kernel;
        for (std::size_t i = begin; i < end; ++i) {
            const std::int64_t p = primes[i];
            if (!good_reduction(curve, p))
                continue;
            const std::int64_t a = kernel.trace(f, p);
            if (std::abs(a) > hasse_weil_bound(curve.genus, p))
                throw InvariantViolation("Hasse-Weil bound violated at p=" + std::to_string(p));
            traces[i] = a;
        }
    });

    std::vector<TraceRecord> out;
    out.reserve(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (traces[i] != kBad)
            out.push_back({primes[i], traces[i],
                           curve.genus == 1 ? angle(primes[i], traces[i]) : std::numeric_limits<double>::quiet_NaN()});
    return out;
}

TraceTable trace_sweep(const CurveSpec& curve, std::int64_t X, unsigned workers) {
    return TraceTable::assemble(curve, X, trace_range(curve, 0, X, workers));
}

double angle(std::int64_t p, std::int64_t a_p) {
    if (a_p == 0)
        return std::numbers::pi / 2;
    const double c = static_cast<double>(a_p) / (2.0 * std::sqrt(static_cast<double>(p)));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double angle(const TraceRecord& record, int genus) {
    if (genus != 1)
        throw Unsupported("Sato-Tate angle is only defined here for genus 1");
    return angle(record.p, record.a_p);
}

CmVerdict classify_cm(const TraceTable& table) {
    if (table.genus != 1)
        throw InsufficientData("CM classification needs a genus-1 table");
    if (table.X < kCmMinBound || table.records.empty())
        throw InsufficientData("CM classification needs X >= 10^4 and a nonempty table");
    const auto zeros = std::count_if(table.records.begin(), table.records.end(),
                                     [](const TraceRecord& r) { return r.a_p == 0; });
    const double score = static_cast<double>(zeros) / static_cast<double>(table.records.size());
    return {score > kCmThreshold ? CmClass::CM : CmClass::NonCM, score};
}

std::vector<CurveSpec> default_curves() {
    return {
        CurveSpec::elliptic(1, 0, "y2=x3+x"),
        CurveSpec::elliptic(0, 1, "y2=x3+1"),
        CurveSpec::elliptic(0, -2, "y2=x3-2"),
        CurveSpec::elliptic(-1, 1, "y2=x3-x+1"),
        CurveSpec::elliptic(1, 1, "y2=x3+x+1"),
        CurveSpec::hyperelliptic({0, 0, 0, 0, 1}, "y2=x5+1"),
    };
}

const char* to_string(CmClass c) noexcept {
    return c == CmClass::CM ? "CM" : "NonCM";
}

} // namespace ffl
