#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "ffl/json_io.hpp"
#include "ffl/trace_cache.hpp"

using namespace ffl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("ffl_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("trace CSV round trip") {
    const CurveSpec c = CurveSpec::elliptic(-1, 1, "e");
    const TraceTable t = trace_sweep(c, 500);
    std::stringstream ss;
    write_trace_csv(ss, t);
    CHECK(ss.str().rfind("# curve=genus1:-1,1 genus=1 X=500 version=1\n5,-2\n7,-4\n11,2\n", 0) == 0);
    const auto back = read_trace_csv(ss, c);
    REQUIRE(back.has_value());
    CHECK(back->records == t.records);
    CHECK(back->bad_primes == t.bad_primes);
    CHECK(back->X == 500);
}

TEST_CASE("trace CSV header and row validation") {
    const CurveSpec c = CurveSpec::elliptic(-1, 1);
    auto parse = [&](const std::string& text) {
        std::istringstream is(text);
        return read_trace_csv(is, c);
    };
    CHECK(parse("# curve=genus1:-1,1 genus=1 X=10 version=1\n5,-2\n7,-4\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:1,1 genus=1 X=10 version=1\n5,-3\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:-1,1 genus=2 X=10 version=1\n5,-2\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:-1,1 genus=1 X=10 version=2\n5,-2\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:-1,1 genus=1 X=1x version=1\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:-1,1 genus=1 X=10 version=1\n5;-2\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:-1,1 genus=1 X=10 version=1\n7,-4\n5,-2\n").has_value());
    CHECK_FALSE(parse("# curve=genus1:-1,1 genus=1 X=10 version=1\n11,2\n").has_value());
    CHECK_FALSE(parse("").has_value());
}

TEST_CASE("cache miss, hit, restriction and extension") {
    TempDir dir("cache");
    const CurveSpec c = CurveSpec::elliptic(1, 1, "e");

    const CachedTable first = load_or_compute(c, 3000, 1, dir.path);
    CHECK(first.status == CacheStatus::Miss);
    CHECK(fs::exists(first.path));
    CHECK(first.table.records == trace_sweep(c, 3000).records);
    const std::string bytes = slurp(first.path);

    const CachedTable again = load_or_compute(c, 3000, 1, dir.path);
    CHECK(again.status == CacheStatus::Hit);
    CHECK(again.table.records == first.table.records);
    CHECK(slurp(again.path) == bytes);

    const CachedTable smaller = load_or_compute(c, 1000, 1, dir.path);
    CHECK(smaller.status == CacheStatus::Hit);
    CHECK(smaller.table.X == 1000);
    CHECK(smaller.table.records == trace_sweep(c, 1000).records);
    CHECK(smaller.table.bad_primes == trace_sweep(c, 1000).bad_primes);

    const CachedTable larger = load_or_compute(c, 8000, 4, dir.path);
    CHECK(larger.status == CacheStatus::Extended);
    CHECK(larger.table.records == trace_sweep(c, 8000).records);
    // The extension only appends rows.
    const std::string extended = slurp(larger.path);
    CHECK(extended.substr(extended.find('\n')).rfind(bytes.substr(bytes.find('\n')), 0) == 0);
    CHECK(load_or_compute(c, 8000, 1, dir.path).status == CacheStatus::Hit);
    CHECK_FALSE(fs::exists(fs::path(larger.path.string() + ".lock")));
}

TEST_CASE("a header mismatch forces a recompute") {
    TempDir dir("mismatch");
    const CurveSpec c = CurveSpec::elliptic(1, 1);
    const fs::path path = cache_path(dir.path, c);
    {
        std::ofstream out(path);
        out << "# curve=genus1:1,1 genus=1 X=3000 version=0\n5,1000\n";
    }
    const CachedTable t = load_or_compute(c, 3000, 1, dir.path);
    CHECK(t.status == CacheStatus::Miss);
    CHECK(t.table.records == trace_sweep(c, 3000).records);
    CHECK(slurp(path).rfind("# curve=genus1:1,1 genus=1 X=3000 version=1\n", 0) == 0);

    {
        std::ofstream out(path);
        out << "# curve=genus1:1,1 genus=1 X=3000 version=1\n5,-3\ngarbage\n";
    }
    CHECK(load_or_compute(c, 3000, 1, dir.path).status == CacheStatus::Miss);
}

TEST_CASE("distinct curves use distinct files") {
    TempDir dir("names");
    std::set<fs::path> paths;
    for (const CurveSpec& c : default_curves())
        paths.insert(cache_path(dir.path, c));
    CHECK(paths.size() == default_curves().size());
}

TEST_CASE("cache directory from the environment") {
    ::setenv("FFL_CACHE_DIR", "/tmp/somewhere", 1);
    CHECK(default_cache_dir() == fs::path("/tmp/somewhere"));
    ::unsetenv("FFL_CACHE_DIR");
    CHECK(default_cache_dir() == fs::path("ffl_cache"));
}

TEST_CASE("cache lock is exclusive") {
    TempDir dir("lock");
    const fs::path target = dir.path / "t.csv";
    std::atomic<bool> acquired{false};
    std::thread other;
    {
        CacheLock held(target);
        other = std::thread([&] {
            CacheLock second(target);
            acquired = true;
        });
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
        CHECK_FALSE(acquired.load());
    }
    other.join();
    CHECK(acquired.load());
    CHECK_FALSE(fs::exists(dir.path / "t.csv.lock"));
}

TEST_CASE("JSON floats use fixed 12-digit notation") {
    Json j;
    j["a"] = 0.5;
    j["b"] = 1.0 / 3;
    j["c"] = 12;
    j["d"] = std::nan("");
    j["e"] = Json::array({1, 2});
    j["f"] = Json::array({Json{{"x", 1e-20}}});
    j["g"] = "q\"uote";
    j["h"] = Json::object();
    CHECK(dump_json(j) ==
          "{\n"
          "  \"a\": 0.500000000000,\n"
          "  \"b\": 0.333333333333,\n"
          "  \"c\": 12,\n"
          "  \"d\": null,\n"
          "  \"e\": [1, 2],\n"
          "  \"f\": [\n"
          "    {\n"
          "      \"x\": 0.000000000000\n"
          "    }\n"
          "  ],\n"
          "  \"g\": \"q\\\"uote\",\n"
          "  \"h\": {}\n"
          "}\n");
}

TEST_CASE("report converters") {
    const Json c = to_json(census(GspParams{1, 2, 1}));
    CHECK(dump_json(c) ==
          "{\n"
          "  \"g\": 1,\n"
          "  \"l\": 2,\n"
          "  \"m\": 1,\n"
          "  \"order\": 6,\n"
          "  \"order_formula\": \"6\",\n"
          "  \"trace_counts\": {\n"
          "    \"0\": 4,\n"
          "    \"1\": 2\n"
          "  },\n"
          "  \"h_m\": 4,\n"
          "  \"ratio\": 0.666666666667\n"
          "}\n");
    DensityEstimate d{"S1 split x", 3, 4, 10, 0.75};
    CHECK(to_json(d)["estimate"].get<double>() == 0.75);
    const Json f = to_json(ForcingReport{}, true);
    CHECK(f.contains("entries"));
    CHECK(f["violations"].is_array());
    AnnihilatorReport a;
    a.found.push_back(Annihilator{{-1, 0, 1}, 5, {Rational(-1), Rational(1)}});
    const Json aj = to_json(a);
    CHECK(aj["found"][0]["poly"] == "X^2 - 1");
    CHECK(aj["found"][0]["rational_roots"] == Json::array({"-1", "1"}));
    CHECK(aj["found"][0]["largest_violation"] == 5);
}
