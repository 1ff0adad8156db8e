#include "ffl/splitfield.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ffl/arith.hpp"
#include "ffl/error.hpp"
#include "ffl/parallel.hpp"

namespace ffl {

namespace {

// A nonzero discriminant has at most log2|disc| prime factors, far fewer
// than the primes below this bound for any polynomial we accept.
constexpr std::int64_t kSquarefreeProbeLimit = 10'000;

bool squarefree_over_q(const PolyCoeffs& f) {
    for (Prime p : sieve_primes(kSquarefreeProbeLimit))
        if (polymod::squarefree(f, p))
            return true;
    return false;
}

} // namespace

NumberFieldPoly NumberFieldPoly::parse(std::string_view text, std::string label) {
    constexpr std::string_view prefix = "poly:";
    if (text.substr(0, prefix.size()) != prefix)
        throw DomainError("polynomial text must start with 'poly:'");
    std::string_view body = text.substr(prefix.size());
    std::vector<std::int64_t> lower;
    while (true) {
        const auto comma = body.find(',');
        std::string_view item = body.substr(0, comma);
        if (!item.empty() && item.front() == '+')
            item.remove_prefix(1);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
            throw DomainError("malformed polynomial coefficient '" + std::string(item) + "'");
        lower.push_back(v);
        if (comma == std::string_view::npos)
            break;
        body.remove_prefix(comma + 1);
    }
    return from_lower(lower, label.empty() ? std::string(text) : std::move(label));
}

NumberFieldPoly NumberFieldPoly::from_lower(const std::vector<std::int64_t>& lower, std::string label) {
    if (lower.empty())
        throw DomainError("polynomial needs degree >= 1");
    NumberFieldPoly f;
    f.coeffs_.assign(lower.rbegin(), lower.rend());
    f.coeffs_.push_back(1);
    if (!squarefree_over_q(f.coeffs_))
        throw DomainError("polynomial is not squarefree over Q");
    f.label_ = label.empty() ? f.text() : std::move(label);
    return f;
}

std::string NumberFieldPoly::text() const {
    std::ostringstream os;
    os << "poly:";
    for (int i = degree() - 1; i >= 0; --i)
        os << coeffs_[i] << (i ? "," : "");
    return os.str();
}

std::vector<std::int64_t> poly_powmod_xp(const NumberFieldPoly& f, std::int64_t p) {
    const PolyCoeffs modulus = polymod::reduce(f.coeffs(), p);
    PolyCoeffs r = polymod::powmod_x(static_cast<std::uint64_t>(p), modulus, p);
    r.resize(static_cast<std::size_t>(f.degree()), 0);
    return r;
}

int count_roots(const NumberFieldPoly& f, std::int64_t p) {
    const PolyCoeffs modulus = polymod::reduce(f.coeffs(), p);
    PolyCoeffs xp = polymod::powmod_x(static_cast<std::uint64_t>(p), modulus, p);
    PolyCoeffs diff = polymod::sub(xp, PolyCoeffs{0, 1}, p);
    diff = polymod::rem(diff, modulus, p);
    return polymod::degree(polymod::gcd(modulus, diff, p));
}

SplitType is_totally_split(const NumberFieldPoly& f, std::int64_t p) {
    if (!polymod::squarefree(f.coeffs(), p))
        return SplitType::Ramified;
    return count_roots(f, p) == f.degree() ? SplitType::Split : SplitType::NotSplit;
}

const char* to_string(SplitType s) noexcept {
    switch (s) {
    case SplitType::Split:
        return "Split";
    case SplitType::NotSplit:
        return "NotSplit";
    case SplitType::Ramified:
        return "Ramified";
    }
    return "?";
}

DensityEstimate split_density(const NumberFieldPoly& f, std::int64_t X, unsigned workers) {
    if (X < kMinDensityBound)
        throw BoundsError("split_density needs X >= 10^3");
    const std::vector<Prime> primes = sieve_primes(X);
    std::vector<char> split(primes.size(), 0);
    parallel_chunks(primes.size(), workers, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            split[i] = is_totally_split(f, primes[i]) == SplitType::Split;
    });
    DensityEstimate d;
    d.set_label = "S1 split " + f.label();
    d.count = static_cast<std::size_t>(std::count(split.begin(), split.end(), 1));
    d.pi_x = primes.size();
    d.X = X;
    d.estimate = static_cast<double>(d.count) / static_cast<double>(d.pi_x);
    return d;
}

} // namespace ffl
