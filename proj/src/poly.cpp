#include "ffl/poly.hpp"

#include <algorithm>

#include "ffl/arith.hpp"
#include "ffl/error.hpp"

namespace ffl {

namespace polymod {

void trim(PolyCoeffs& f) {
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

PolyCoeffs reduce(std::span<const std::int64_t> f, std::int64_t p) {
    PolyCoeffs out(f.size());
    std::transform(f.begin(), f.end(), out.begin(), [p](std::int64_t c) { return mod_reduce(c, p); });
    trim(out);
    return out;
}

PolyCoeffs derivative(const PolyCoeffs& f, std::int64_t p) {
    if (f.size() <= 1)
        return {};
    PolyCoeffs out(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i)
        out[i - 1] = mul_mod(f[i], static_cast<std::int64_t>(i) % p, p);
    trim(out);
    return out;
}

PolyCoeffs sub(const PolyCoeffs& a, const PolyCoeffs& b, std::int64_t p) {
    PolyCoeffs out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] = mod_reduce(out[i] - b[i], p);
    trim(out);
    return out;
}

PolyCoeffs mul(const PolyCoeffs& a, const PolyCoeffs& b, std::int64_t p) {
    if (a.empty() || b.empty())
        return {};
    PolyCoeffs out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
    trim(out);
    return out;
}

PolyCoeffs rem(PolyCoeffs a, const PolyCoeffs& b, std::int64_t p) {
    if (b.empty())
        throw DomainError("polynomial division by zero");
    const std::int64_t lead_inv = inv_mod(b.back(), p);
    const std::size_t db = b.size() - 1;
    trim(a);
    while (a.size() > db) {
        const std::int64_t q = mul_mod(a.back(), lead_inv, p);
        const std::size_t shift = a.size() - 1 - db;
        if (q != 0)
            for (std::size_t i = 0; i <= db; ++i)
                a[shift + i] = mod_reduce(a[shift + i] - mul_mod(q, b[i], p), p);
        a.pop_back();
        trim(a);
    }
    return a;
}

PolyCoeffs gcd(PolyCoeffs a, PolyCoeffs b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyCoeffs r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::int64_t inv = inv_mod(a.back(), p);
        for (auto& c : a)
            c = mul_mod(c, inv, p);
    }
    return a;
}

PolyCoeffs mulmod(const PolyCoeffs& a, const PolyCoeffs& b, const PolyCoeffs& modulus, std::int64_t p) {
    return rem(mul(a, b, p), modulus, p);
}

PolyCoeffs powmod_x(std::uint64_t e, const PolyCoeffs& modulus, std::int64_t p) {
    PolyCoeffs result = rem(PolyCoeffs{1}, modulus, p);
    PolyCoeffs base = rem(PolyCoeffs{0, 1}, modulus, p);
    while (e) {
        if (e & 1)
            result = mulmod(result, base, modulus, p);
        e >>= 1;
        if (e)
            base = mulmod(base, base, modulus, p);
    }
    return result;
}

std::int64_t eval(const PolyCoeffs& f, std::int64_t x, std::int64_t p) {
    std::int64_t acc = 0;
    const std::int64_t xr = mod_reduce(x, p);
    for (auto it = f.rbegin(); it != f.rend(); ++it)
        acc = (mul_mod(acc, xr, p) + mod_reduce(*it, p)) % p;
    return acc;
}

bool squarefree(std::span<const std::int64_t> f, std::int64_t p) {
    PolyCoeffs fp = reduce(f, p);
    if (fp.empty())
        return false;
    PolyCoeffs g = gcd(fp, derivative(fp, p), p);
    return degree(g) == 0;
}

} // namespace polymod

BigInt monic_discriminant(std::span<const std::int64_t> f) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 1 || f.back() != 1)
        throw DomainError("monic_discriminant needs a monic polynomial of degree >= 1");
    if (n == 1)
        return 1;

    // Sylvester matrix of f (degree n) and f' (degree n-1), size 2n-1.
    const int size = 2 * n - 1;
    std::vector<std::vector<BigInt>> m(size, std::vector<BigInt>(size, 0));
    for (int row = 0; row < n - 1; ++row)
        for (int k = 0; k <= n; ++k)
            m[row][row + k] = f[n - k];
    for (int row = 0; row < n; ++row)
        for (int k = 0; k <= n - 1; ++k)
            m[n - 1 + row][row + k] = BigInt(f[n - k]) * (n - k);

    // Bareiss elimination; every division below is exact.
    BigInt sign = 1;
    BigInt prev = 1;
    for (int k = 0; k < size - 1; ++k) {
        if (m[k][k] == 0) {
            int swap_row = -1;
            for (int r = k + 1; r < size; ++r)
                if (m[r][k] != 0) {
                    swap_row = r;
                    break;
                }
            if (swap_row < 0)
                return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    BigInt resultant = sign * m[size - 1][size - 1];
    const bool negate = ((n * (n - 1) / 2) % 2) == 1;
    return negate ? BigInt(-resultant) : resultant;
}

} // namespace ffl
