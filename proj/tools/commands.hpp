#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ffl/curves.hpp"

namespace ffl::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kUsage = 2, kResource = 3, kInvariant = 4 };

enum class Format { Text, Csv, Json };

/// Parsed options of one invocation. Fields not used by a subcommand keep
/// their defaults.
struct RunConfig {
    std::string subcommand;    // traces, satotate, density, forcing, countT, split, aring, gsp
    std::string aring_source;  // linrec or qfib
    bool relation = false;     // aring ... relation

    std::string curve;
    std::string x = "100000";
    std::int64_t p_min = 5;
    std::int64_t ell = 2;
    std::string b;
    std::string poly;
    std::vector<std::string> b_list;
    int degree = 2;
    std::int64_t height = 5;
    std::int64_t q = 2;
    std::string coeffs;
    std::string init;
    int g = 1;
    int m = 1;
    int decay = 0;
    int bins = 20;
    bool entries = false;
    unsigned workers = 1;
    std::string cache_dir;
    std::string format;

    /// The parsed sweep bound.
    std::int64_t bound() const;
    /// Explicit --cache-dir, else FFL_CACHE_DIR, else ./ffl_cache.
    std::filesystem::path cache_directory() const;
    /// --format resolved against the subcommand default; UsageError when the
    /// subcommand does not offer it.
    Format output_format(Format fallback, std::initializer_list<Format> allowed) const;
    /// Throws UsageError for missing or malformed options and ResourceError
    /// for bounds beyond the module limits.
    void validate() const;
};

/// Malformed invocation (exit 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Accepts plain integers, `1e5` and `10^9`.
std::int64_t parse_bound(std::string_view text);

/// A curve given as `genus1:A,B`, `genus2:c4,...,c0` or a shipped name such
/// as `y2=x3+x`.
CurveSpec resolve_curve(std::string_view text);

int cmd_traces(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_satotate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_density(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_forcing(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_countT(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_split(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_aring(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_gsp(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv, validates, dispatches and maps failures to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ffl::cli
