#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "ffl/curves.hpp"

namespace ffl {

/// CSV persistence of trace tables. First line
/// `# curve=<text> genus=<g> X=<X> version=1`, then rows `p,a_p`.
inline constexpr int kTraceCacheVersion = 1;

void write_trace_csv(std::ostream& os, const TraceTable& table);

/// Parses a cache stream for `curve`. Returns nullopt when the header does not
/// match the curve text, genus or version, or when any row is malformed.
std::optional<TraceTable> read_trace_csv(std::istream& is, const CurveSpec& curve);

/// FFL_CACHE_DIR when set, else ./ffl_cache.
std::filesystem::path default_cache_dir();

std::filesystem::path cache_path(const std::filesystem::path& dir, const CurveSpec& curve);

enum class CacheStatus { Hit, Miss, Extended };

const char* to_string(CacheStatus s) noexcept;

struct CachedTable {
    TraceTable table;
    CacheStatus status = CacheStatus::Miss;
    std::filesystem::path path;
};

/// Returns the table for (curve, X), reusing the cache file when its header
/// matches. A cache covering a smaller X is extended by sweeping only the
/// missing primes; one covering a larger X is served restricted to X. Writes
/// hold an exclusive lock file next to the cache.
CachedTable load_or_compute(const CurveSpec& curve, std::int64_t X, unsigned workers,
                            const std::filesystem::path& dir);

/// Exclusive lock via O_CREAT|O_EXCL on `<path>.lock`, released on scope exit.
class CacheLock {
public:
    explicit CacheLock(std::filesystem::path target);
    ~CacheLock();
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

private:
    std::filesystem::path lock_path_;
};

} // namespace ffl
