#include "ffl/arith.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

#include "ffl/error.hpp"

namespace ffl {

namespace {

constexpr std::int64_t kPlainSieveLimit = 1'000'000;
constexpr std::int64_t kSegmentSize = 1 << 18;

std::vector<std::int64_t> plain_sieve(std::int64_t limit) {
    std::vector<char> composite(static_cast<std::size_t>(limit) + 1, 0);
    std::vector<std::int64_t> out;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= limit; j += i)
            composite[j] = 1;
    }
    return out;
}

std::vector<std::int64_t> segmented_sieve(std::int64_t limit) {
    const std::int64_t root = isqrt(limit);
    std::vector<std::int64_t> base = plain_sieve(root);
    std::vector<std::int64_t> out = base;
    std::vector<char> seg(kSegmentSize);
    for (std::int64_t lo = root + 1; lo <= limit; lo += kSegmentSize) {
        const std::int64_t hi = std::min(lo + kSegmentSize - 1, limit);
        std::fill(seg.begin(), seg.end(), 0);
        for (std::int64_t p : base) {
            if (p * p > hi)
                break;
            std::int64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::int64_t j = start; j <= hi; j += p)
                seg[j - lo] = 1;
        }
        for (std::int64_t n = lo; n <= hi; ++n)
            if (!seg[n - lo])
                out.push_back(n);
    }
    return out;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw DomainError("malformed rational: '" + std::string(whole) + "'");
    return v;
}

} // namespace

Prime Prime::certify(std::int64_t value) {
    if (value < 2)
        throw DomainError("not a prime: " + std::to_string(value));
    for (std::int64_t d = 2; d * d <= value; ++d)
        if (value % d == 0)
            throw DomainError("not a prime: " + std::to_string(value));
    return Prime(value);
}

std::vector<Prime> sieve_primes(std::int64_t limit) {
    if (limit < 2 || limit >= kModulusLimit)
        throw BoundsError("sieve limit must satisfy 2 <= limit < 2^31, got " + std::to_string(limit));
    std::vector<std::int64_t> raw = limit <= kPlainSieveLimit ? plain_sieve(limit) : segmented_sieve(limit);
    std::vector<Prime> out;
    out.reserve(raw.size());
    for (std::int64_t p : raw)
        out.push_back(Prime(p));
    return out;
}

std::size_t prime_pi(std::int64_t x) {
    if (x < 2)
        return 0;
    return sieve_primes(x).size();
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0)
        throw DomainError("rational with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text, text));
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
}

std::string Rational::to_string() const {
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t mod_pow(std::int64_t base, std::uint64_t exp, std::int64_t m) {
    using u128 = unsigned __int128;
    std::uint64_t b = static_cast<std::uint64_t>(mod_reduce(base, m));
    std::uint64_t r = 1 % static_cast<std::uint64_t>(m);
    const auto mod = static_cast<std::uint64_t>(m);
    while (exp) {
        if (exp & 1)
            r = static_cast<std::uint64_t>(static_cast<u128>(r) * b % mod);
        b = static_cast<std::uint64_t>(static_cast<u128>(b) * b % mod);
        exp >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

int legendre(std::int64_t a, std::int64_t p) {
    if (p == 2)
        throw DomainError("legendre symbol needs an odd prime");
    const std::int64_t e = mod_pow(a, static_cast<std::uint64_t>((p - 1) / 2), p);
    if (e == 0)
        return 0;
    return e == 1 ? 1 : -1;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    std::int64_t r0 = p, r1 = mod_reduce(a, p);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    if (r0 != 1)
        throw NotInvertible(std::to_string(a) + " is not invertible mod " + std::to_string(p));
    return mod_reduce(s0, p);
}

std::optional<std::int64_t> rational_mod(const Rational& b, std::int64_t p) {
    if (b.den() % p == 0)
        return std::nullopt;
    return mul_mod(mod_reduce(b.num(), p), inv_mod(b.den(), p), p);
}

std::int64_t isqrt(std::int64_t n) noexcept {
    if (n <= 0)
        return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

} // namespace ffl
