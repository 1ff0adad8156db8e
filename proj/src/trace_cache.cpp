#include "ffl/trace_cache.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <unistd.h>

#include "ffl/error.hpp"

namespace ffl {

namespace {

constexpr auto kLockTimeout = std::chrono::seconds(120);

std::string header_for(const std::string& curve_text, int genus, std::int64_t X) {
    std::ostringstream os;
    os << "# curve=" << curve_text << " genus=" << genus << " X=" << X << " version=" << kTraceCacheVersion;
    return os.str();
}

std::optional<std::int64_t> parse_header_x(const std::string& header, const CurveSpec& curve) {
    const std::string prefix = "# curve=" + curve.text() + " genus=" + std::to_string(curve.genus) + " X=";
    if (header.rfind(prefix, 0) != 0)
        return std::nullopt;
    const std::string rest = header.substr(prefix.size());
    const std::string suffix = " version=" + std::to_string(kTraceCacheVersion);
    const auto pos = rest.find(' ');
    if (pos == std::string::npos || rest.substr(pos) != suffix)
        return std::nullopt;
    try {
        std::size_t used = 0;
        const std::int64_t X = std::stoll(rest.substr(0, pos), &used);
        if (used != pos)
            return std::nullopt;
        return X;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void write_atomically(const std::filesystem::path& path, const TraceTable& table) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw Error("cannot write cache file " + tmp.string());
        write_trace_csv(out, table);
        if (!out)
            throw Error("failed writing cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

void write_trace_csv(std::ostream& os, const TraceTable& table) {
    os << header_for(table.curve_text, table.genus, table.X) << '\n';
    for (const TraceRecord& r : table.records)
        os << r.p << ',' << r.a_p << '\n';
}

std::optional<TraceTable> read_trace_csv(std::istream& is, const CurveSpec& curve) {
    std::string header;
    if (!std::getline(is, header))
        return std::nullopt;
    const auto X = parse_header_x(header, curve);
    if (!X)
        return std::nullopt;
    std::vector<TraceRecord> records;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            return std::nullopt;
        try {
            std::size_t u1 = 0, u2 = 0;
            const std::string ps = line.substr(0, comma), as = line.substr(comma + 1);
            TraceRecord r;
            r.p = std::stoll(ps, &u1);
            r.a_p = std::stoll(as, &u2);
            if (u1 != ps.size() || u2 != as.size())
                return std::nullopt;
            if (!records.empty() && records.back().p >= r.p)
                return std::nullopt;
            records.push_back(r);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    try {
        return TraceTable::assemble(curve, *X, std::move(records));
    } catch (const InvariantViolation&) {
        return std::nullopt;
    }
}

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("FFL_CACHE_DIR"); env && *env)
        return env;
    return "ffl_cache";
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const CurveSpec& curve) {
    std::string name = "traces_" + curve.text();
    for (char& c : name)
        if (c == ':' || c == ',')
            c = '_';
    return dir / (name + ".csv");
}

const char* to_string(CacheStatus s) noexcept {
    switch (s) {
    case CacheStatus::Hit:
        return "hit";
    case CacheStatus::Miss:
        return "miss";
    case CacheStatus::Extended:
        return "extended";
    }
    return "?";
}

CacheLock::CacheLock(std::filesystem::path target) : lock_path_(std::move(target)) {
    lock_path_ += ".lock";
    const auto deadline = std::chrono::steady_clock::now() + kLockTimeout;
    for (;;) {
        const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd >= 0) {
            ::close(fd);
            return;
        }
        if (std::chrono::steady_clock::now() > deadline)
            throw Error("timed out waiting for cache lock " + lock_path_.string());
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
}

CacheLock::~CacheLock() {
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
}

CachedTable load_or_compute(const CurveSpec& curve, std::int64_t X, unsigned workers,
                            const std::filesystem::path& dir) {
    if (X > kMaxSweepBound)
        throw ResourceError("sweep bound X=" + std::to_string(X) + " exceeds the limit 10^7");
    std::filesystem::create_directories(dir);
    CachedTable out;
    out.path = cache_path(dir, curve);
    CacheLock lock(out.path);

    std::optional<TraceTable> cached;
    if (std::ifstream in(out.path); in)
        cached = read_trace_csv(in, curve);

    if (cached && cached->X >= X) {
        std::vector<TraceRecord> subset;
        for (const TraceRecord& r : cached->records)
            if (r.p <= X)
                subset.push_back(r);
        out.table = TraceTable::assemble(curve, X, std::move(subset));
        out.status = CacheStatus::Hit;
        return out;
    }
    if (cached) {
        std::vector<TraceRecord> records = cached->records;
        std::vector<TraceRecord> extra = trace_range(curve, cached->X, X, workers);
        records.insert(records.end(), extra.begin(), extra.end());
        out.table = TraceTable::assemble(curve, X, std::move(records));
        out.status = CacheStatus::Extended;
    } else {
        out.table = trace_sweep(curve, X, workers);
        out.status = CacheStatus::Miss;
    }
    write_atomically(out.path, out.table);
    return out;
}

} // namespace ffl
