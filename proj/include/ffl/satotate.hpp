#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffl {

struct TraceTable;

/// Limiting angle distributions on [0, pi]: density (2/pi) sin^2 for non-CM
/// curves; for CM curves an atom of mass 1/2 at pi/2 plus (1/2pi) d theta.
enum class MeasureKind { NonCM, CM };

const char* to_string(MeasureKind k) noexcept;

/// Right-continuous CDF. NonCM: (t - sin t cos t)/pi. CM: t/(2pi) + [t >= pi/2]/2.
/// Throws DomainError outside [0, pi].
double cdf(MeasureKind kind, double theta);

/// Left limit of the CDF (differs from cdf() only at the CM atom).
double cdf_left(MeasureKind kind, double theta);

/// Measure of the closed band [lo, hi].
double band_mass(MeasureKind kind, double lo, double hi);

/// Sorted Sato-Tate angles of a genus-1 table.
class AngleSample {
public:
    /// Throws Unsupported for genus-2 tables.
    static AngleSample from_table(const TraceTable& table);
    /// Sorts `angles`; throws DomainError for values outside [0, pi].
    static AngleSample from_values(std::vector<double> angles, std::string label = {}, std::int64_t X = 0);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::string& label() const noexcept { return label_; }
    std::int64_t X() const noexcept { return X_; }

private:
    std::vector<double> values_;
    std::string label_;
    std::int64_t X_ = 0;
};

/// Fraction of the sample <= theta. Throws InsufficientData when empty.
double empirical_cdf(const AngleSample& sample, double theta);

/// Kolmogorov-Smirnov statistic sup |ECDF - CDF|, evaluated at both one-sided
/// limits of every jump point.
double sup_distance(const AngleSample& sample, MeasureKind kind);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double noncm_mass = 0.0;
    double cm_mass = 0.0;
};

/// Equal-width bins [lo, hi) over [0, pi], the last one closed. A value on a
/// boundary goes to the bin on its right, and so does the CM atom.
std::vector<HistogramBin> histogram(const AngleSample& sample, int bins);

} // namespace ffl
