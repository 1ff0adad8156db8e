#include "ffl/satotate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffl/curves.hpp"
#include "ffl/error.hpp"

namespace ffl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

void check_range(double theta) {
    if (!(theta >= 0.0 && theta <= kPi))
        throw DomainError("angle outside [0, pi]");
}

double noncm_cdf(double t) {
    return (t - std::sin(t) * std::cos(t)) / kPi;
}

} // namespace

const char* to_string(MeasureKind k) noexcept {
    return k == MeasureKind::CM ? "CM" : "NonCM";
}

double cdf(MeasureKind kind, double theta) {
    check_range(theta);
    if (kind == MeasureKind::NonCM)
        return theta == kPi ? 1.0 : noncm_cdf(theta);
    return theta / (2 * kPi) + (theta >= kHalfPi ? 0.5 : 0.0);
}

double cdf_left(MeasureKind kind, double theta) {
    check_range(theta);
    if (kind == MeasureKind::NonCM)
        return cdf(kind, theta);
    return theta / (2 * kPi) + (theta > kHalfPi ? 0.5 : 0.0);
}

double band_mass(MeasureKind kind, double lo, double hi) {
    if (lo > hi)
        throw DomainError("band with lo > hi");
    return cdf(kind, hi) - cdf_left(kind, lo);
}

AngleSample AngleSample::from_table(const TraceTable& table) {
    if (table.genus != 1)
        throw Unsupported("Sato-Tate samples need a genus-1 table");
    std::vector<double> angles;
    angles.reserve(table.records.size());
    for (const TraceRecord& r : table.records)
        angles.push_back(angle(r.p, r.a_p));
    return from_values(std::move(angles), table.curve_id, table.X);
}

AngleSample AngleSample::from_values(std::vector<double> angles, std::string label, std::int64_t X) {
    for (double a : angles)
        check_range(a);
    std::sort(angles.begin(), angles.end());
    AngleSample s;
    s.values_ = std::move(angles);
    s.label_ = std::move(label);
    s.X_ = X;
    return s;
}

double empirical_cdf(const AngleSample& sample, double theta) {
    if (sample.size() == 0)
        throw InsufficientData("empirical CDF of an empty sample");
    const auto& v = sample.values();
    const auto le = std::upper_bound(v.begin(), v.end(), theta) - v.begin();
    return static_cast<double>(le) / static_cast<double>(v.size());
}

double sup_distance(const AngleSample& sample, MeasureKind kind) {
    if (sample.size() == 0)
        throw InsufficientData("sup distance of an empty sample");
    const auto& v = sample.values();
    const double n = static_cast<double>(v.size());
    double best = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i])
            ++j;
        const double below = static_cast<double>(i) / n; // ECDF just left of v[i]
        const double at = static_cast<double>(j) / n;    // ECDF at v[i]
        best = std::max(best, std::abs(at - cdf(kind, v[i])));
        best = std::max(best, std::abs(below - cdf_left(kind, v[i])));
        i = j;
    }
    return best;
}

std::vector<HistogramBin> histogram(const AngleSample& sample, int bins) {
    if (bins < 2)
        throw DomainError("histogram needs at least 2 bins");
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        edges[i] = kPi * i / bins;
    edges[0] = 0.0;
    edges[bins] = kPi;

    std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i) {
        HistogramBin& b = out[i];
        b.lo = edges[i];
        b.hi = edges[i + 1];
        const bool last = i == bins - 1;
        for (MeasureKind k : {MeasureKind::NonCM, MeasureKind::CM}) {
            const double upper = last ? 1.0 : cdf_left(k, b.hi);
            const double mass = upper - cdf_left(k, b.lo);
            (k == MeasureKind::NonCM ? b.noncm_mass : b.cm_mass) = mass;
        }
    }
    for (double theta : sample.values()) {
        auto idx = std::upper_bound(edges.begin(), edges.end(), theta) - edges.begin() - 1;
        idx = std::clamp<std::ptrdiff_t>(idx, 0, bins - 1);
        ++out[static_cast<std::size_t>(idx)].count;
    }
    return out;
}

} // namespace ffl
