#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ffl/aring.hpp"
#include "ffl/error.hpp"
#include "ffl/gsp.hpp"
#include "ffl/json_io.hpp"
#include "ffl/parallel.hpp"
#include "ffl/satotate.hpp"
#include "ffl/splitfield.hpp"
#include "ffl/trace_cache.hpp"
#include "ffl/transcheck.hpp"

namespace ffl::cli {

namespace {

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

Rational parse_rational(std::string_view text, const char* what) {
    try {
        return Rational::parse(text);
    } catch (const Error& e) {
        throw UsageError(std::string("malformed ") + what + " '" + std::string(text) + "': " + e.what());
    }
}

std::vector<Rational> parse_rational_list(std::string_view text, const char* what) {
    if (text.empty())
        throw UsageError(std::string("missing ") + what);
    std::vector<Rational> out;
    for (const std::string& part : split_list(text))
        out.push_back(parse_rational(part, what));
    return out;
}

NumberFieldPoly parse_poly(std::string_view text) {
    try {
        return NumberFieldPoly::parse(text);
    } catch (const DomainError& e) {
        throw UsageError(std::string("malformed --poly: ") + e.what());
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > std::numeric_limits<std::int64_t>::max() / b)
        throw UsageError("bound too large");
    return a * b;
}

std::int64_t parse_int(std::string_view text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw UsageError("malformed bound '" + std::string(text) + "'");
    try {
        return std::stoll(std::string(text));
    } catch (const std::out_of_range&) {
        throw UsageError("bound too large");
    }
}

TraceTable load_traces(const RunConfig& cfg, std::ostream& err) {
    const CurveSpec curve = resolve_curve(cfg.curve);
    const CachedTable cached = load_or_compute(curve, cfg.bound(), cfg.workers, cfg.cache_directory());
    err << "cache " << to_string(cached.status) << ": " << cached.path.string() << '\n';
    return cached.table;
}

} // namespace

std::int64_t parse_bound(std::string_view text) {
    std::uint64_t value = 0;
    if (const auto caret = text.find('^'); caret != std::string_view::npos) {
        const std::int64_t base = parse_int(text.substr(0, caret));
        const std::int64_t exp = parse_int(text.substr(caret + 1));
        value = 1;
        for (std::int64_t i = 0; i < exp; ++i)
            value = checked_mul(value, static_cast<std::uint64_t>(base));
    } else if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        value = static_cast<std::uint64_t>(parse_int(text.substr(0, e)));
        const std::int64_t exp = parse_int(text.substr(e + 1));
        for (std::int64_t i = 0; i < exp; ++i)
            value = checked_mul(value, 10);
    } else {
        value = static_cast<std::uint64_t>(parse_int(text));
    }
    if (value < 1)
        throw UsageError("bound must be positive");
    return static_cast<std::int64_t>(value);
}

CurveSpec resolve_curve(std::string_view text) {
    if (text.empty())
        throw UsageError("missing --curve");
    for (const CurveSpec& c : default_curves())
        if (c.id == text)
            return c;
    try {
        return CurveSpec::parse(text);
    } catch (const DomainError& e) {
        throw UsageError(std::string("malformed --curve: ") + e.what());
    }
}

std::int64_t RunConfig::bound() const {
    return parse_bound(x);
}

std::filesystem::path RunConfig::cache_directory() const {
    return cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);
}

Format RunConfig::output_format(Format fallback, std::initializer_list<Format> allowed) const {
    Format f = fallback;
    if (format == "text")
        f = Format::Text;
    else if (format == "csv")
        f = Format::Csv;
    else if (format == "json")
        f = Format::Json;
    else if (!format.empty())
        throw UsageError("unknown --format '" + format + "'");
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
        throw UsageError("--format " + format + " is not available for " + subcommand);
    return f;
}

void RunConfig::validate() const {
    if (workers < 1)
        throw UsageError("--workers must be >= 1");
    const std::int64_t X = bound();
    const bool traces = subcommand == "traces" || subcommand == "satotate" || subcommand == "forcing" ||
                        subcommand == "countT" || (subcommand == "density" && !curve.empty());
    if (traces) {
        resolve_curve(curve);
        if (X > kMaxSweepBound)
            throw ResourceError("X=" + std::to_string(X) + " exceeds the sweep limit 10^7");
    }
    if (subcommand == "density") {
        if (curve.empty() == poly.empty())
            throw UsageError("density needs exactly one of --curve or --poly");
        if (!b.empty() && curve.empty())
            throw UsageError("--b applies to --curve densities only");
    }
    if (subcommand == "density" || subcommand == "split") {
        if (poly.empty() && subcommand == "split")
            throw UsageError("split needs --poly");
        if (!poly.empty()) {
            parse_poly(poly);
            if (X > kMaxSweepBound)
                throw ResourceError("X=" + std::to_string(X) + " exceeds the sweep limit 10^7");
        }
    }
    if (subcommand == "density" && !b.empty() && parse_rational(b, "--b").is_zero())
        throw UsageError("--b must be nonzero");
    if (subcommand == "forcing") {
        if (b.empty())
            throw UsageError("forcing needs --b");
        if (parse_rational(b, "--b").is_zero())
            throw UsageError("forcing needs b != 0");
        if (!poly.empty())
            parse_poly(poly);
    }
    if (subcommand == "countT")
        for (const std::string& s : b_list)
            parse_rational(s, "--b-list");
    if (subcommand == "satotate" && bins < 2)
        throw UsageError("--bins must be >= 2");
    if (subcommand == "aring") {
        if (p_min < 2)
            throw UsageError("--pmin must be >= 2");
        if (X < p_min)
            throw UsageError("--x must be >= --pmin");
        if (aring_source == "linrec") {
            if (X > kMaxRecurrenceBound)
                throw ResourceError("X=" + std::to_string(X) + " exceeds the recurrence limit 10^7");
            parse_rational_list(coeffs, "--coeffs");
            parse_rational_list(init, "--init");
        } else if (aring_source == "qfib") {
            if (X > kMaxQFibBound)
                throw ResourceError("X=" + std::to_string(X) + " exceeds the q-Fibonacci limit 10^6");
            if (q < 2)
                throw UsageError("--q must be >= 2");
        } else {
            throw UsageError("aring needs linrec or qfib");
        }
        if (relation) {
            if (degree < 0 || height < 1)
                throw UsageError("relation needs --deg >= 0 and --height >= 1");
            const std::uint64_t budget = relation_budget(degree, height);
            if (budget > kRelationBudget)
                throw ResourceError("relation search needs a budget of " + std::to_string(budget) +
                                    " candidates; the limit is 10^8");
        }
    }
    if (subcommand == "gsp") {
        if (g < 1 || m < 1 || decay < 0)
            throw UsageError("gsp needs --g >= 1, --m >= 1 and --decay >= 0");
        try {
            Prime::certify(ell);
        } catch (const DomainError&) {
            throw UsageError("--l must be prime");
        }
        const GspParams p{g, ell, std::max(m, decay)};
        if (p.search_space() > kCensusBudget)
            throw ResourceError("GSp census infeasible for g=" + std::to_string(g) + " l=" + std::to_string(ell) +
                                " m=" + std::to_string(p.m) + ": l^(m(2g)^2) exceeds 5e9");
    }
}

int cmd_traces(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Format fmt = cfg.output_format(Format::Text, {Format::Text, Format::Json});
    const CurveSpec curve = resolve_curve(cfg.curve);
    const CachedTable cached = load_or_compute(curve, cfg.bound(), cfg.workers, cfg.cache_directory());
    const TraceTable& t = cached.table;

    std::int64_t max_abs = 0;
    std::size_t zeros = 0, hasse_violations = 0;
    for (const TraceRecord& r : t.records) {
        max_abs = std::max(max_abs, std::abs(r.a_p));
        zeros += r.a_p == 0;
        hasse_violations += std::abs(r.a_p) > hasse_weil_bound(t.genus, r.p);
    }
    if (hasse_violations)
        throw InvariantViolation("cached traces violate the Hasse-Weil bound");
    const double zero_fraction = t.records.empty() ? 0.0 : static_cast<double>(zeros) / t.records.size();

    if (fmt == Format::Json) {
        Json j;
        j["curve"] = t.curve_text;
        j["id"] = t.curve_id;
        j["genus"] = t.genus;
        j["X"] = t.X;
        j["records"] = t.records.size();
        j["bad_primes"] = t.bad_primes;
        j["max_abs_a_p"] = max_abs;
        j["zero_trace_fraction"] = zero_fraction;
        j["hasse_violations"] = hasse_violations;
        j["cache"] = to_string(cached.status);
        j["cache_file"] = cached.path.string();
        write_json(out, j);
        return kOk;
    }
    out << "curve " << t.curve_text << " genus " << t.genus << " X " << t.X << '\n';
    out << "records " << t.records.size() << '\n';
    out << "bad_primes";
    for (std::int64_t p : t.bad_primes)
        out << ' ' << p;
    out << '\n';
    out << "max_abs_a_p " << max_abs << '\n';
    out << "zero_trace_fraction " << fixed12(zero_fraction) << '\n';
    out << "hasse_violations " << hasse_violations << '\n';
    out << "cache " << to_string(cached.status) << ' ' << cached.path.string() << '\n';
    return kOk;
}

int cmd_satotate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Format fmt = cfg.output_format(Format::Csv, {Format::Csv, Format::Json});
    const TraceTable table = load_traces(cfg, err);
    const AngleSample sample = AngleSample::from_table(table);
    const double d_noncm = sup_distance(sample, MeasureKind::NonCM);
    const double d_cm = sup_distance(sample, MeasureKind::CM);
    const std::vector<HistogramBin> bins = histogram(sample, cfg.bins);

    if (fmt == Format::Json) {
        Json j;
        j["curve"] = table.curve_text;
        j["X"] = table.X;
        j["n"] = sample.size();
        j["sup_distance_noncm"] = d_noncm;
        j["sup_distance_cm"] = d_cm;
        j["histogram"] = to_json(bins);
        write_json(out, j);
        return kOk;
    }
    out << "# curve=" << table.curve_text << " X=" << table.X << " n=" << sample.size() << '\n';
    out << "# sup_distance_noncm=" << fixed12(d_noncm) << " sup_distance_cm=" << fixed12(d_cm) << '\n';
    out << "lo,hi,count,noncm_mass,cm_mass\n";
    for (const HistogramBin& b : bins)
        out << fixed12(b.lo) << ',' << fixed12(b.hi) << ',' << b.count << ',' << fixed12(b.noncm_mass) << ','
            << fixed12(b.cm_mass) << '\n';
    return kOk;
}

int cmd_density(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.output_format(Format::Json, {Format::Json});
    Json estimates = Json::array();
    if (!cfg.poly.empty()) {
        estimates.push_back(to_json(split_density(parse_poly(cfg.poly), cfg.bound(), cfg.workers)));
    } else {
        const TraceTable table = load_traces(cfg, err);
        estimates.push_back(to_json(zero_trace_density(table, table.X)));
        if (!cfg.b.empty())
            estimates.push_back(to_json(s3_density(table, parse_rational(cfg.b, "--b"), table.X)));
    }
    write_json(out, Json{{"estimates", std::move(estimates)}});
    return kOk;
}

int cmd_forcing(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.output_format(Format::Json, {Format::Json});
    const Rational b = parse_rational(cfg.b, "--b");
    const NumberFieldPoly L = parse_poly(cfg.poly.empty() ? "poly:0,1" : cfg.poly);
    const TraceTable table = load_traces(cfg, err);
    write_json(out, to_json(forcing_scan(table, b, L, cfg.workers), cfg.entries));
    return kOk;
}

int cmd_countT(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.output_format(Format::Json, {Format::Json});
    const TraceTable table = load_traces(cfg, err);
    std::vector<Rational> b_list;
    for (const std::string& s : cfg.b_list)
        b_list.push_back(parse_rational(s, "--b-list"));
    if (b_list.empty())
        b_list = default_b_values();
    const CountReport count = count_T(table, cfg.ell, table.X);
    if (count.t_count + count.zero_count + count.nondivisible_count != count.records)
        throw InvariantViolation("T, zero and nondivisible counts do not partition the records");
    Json j;
    j["curve"] = table.curve_text;
    j["count"] = to_json(count);
    j["norm_gap"] = to_json(norm_gap_census(table, b_list, table.X));
    write_json(out, j);
    return kOk;
}

int cmd_split(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Format fmt = cfg.output_format(Format::Csv, {Format::Csv, Format::Json});
    const NumberFieldPoly f = parse_poly(cfg.poly);
    const std::int64_t X = cfg.bound();
    const std::vector<Prime> primes = X >= 2 ? sieve_primes(X) : std::vector<Prime>{};
    std::vector<int> roots(primes.size());
    std::vector<SplitType> types(primes.size());
    parallel_chunks(primes.size(), cfg.workers, 512, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            types[i] = is_totally_split(f, primes[i]);
            roots[i] = types[i] == SplitType::Ramified ? -1 : count_roots(f, primes[i]);
        }
    });
    const auto split = static_cast<std::size_t>(std::count(types.begin(), types.end(), SplitType::Split));
    const double estimate = primes.empty() ? 0.0 : static_cast<double>(split) / primes.size();

    if (fmt == Format::Json) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < primes.size(); ++i)
            rows.push_back(Json{{"p", primes[i].value()},
                                {"roots", roots[i] < 0 ? Json(nullptr) : Json(roots[i])},
                                {"type", to_string(types[i])}});
        Json j;
        j["poly"] = f.text();
        j["X"] = X;
        j["split"] = split;
        j["pi_x"] = primes.size();
        j["estimate"] = estimate;
        j["primes"] = std::move(rows);
        write_json(out, j);
        return kOk;
    }
    out << "# poly=" << f.text() << " X=" << X << " split=" << split << " pi_x=" << primes.size()
        << " estimate=" << fixed12(estimate) << '\n';
    out << "p,roots,type\n";
    for (std::size_t i = 0; i < primes.size(); ++i) {
        out << primes[i].value() << ',';
        if (roots[i] >= 0)
            out << roots[i];
        out << ',' << to_string(types[i]) << '\n';
    }
    return kOk;
}

int cmd_aring(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Window w{cfg.p_min, cfg.bound()};
    ResidueSequence seq;
    if (cfg.aring_source == "linrec") {
        LinearRecurrence rec{parse_rational_list(cfg.coeffs, "--coeffs"), parse_rational_list(cfg.init, "--init")};
        try {
            rec.validate();
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        seq = from_linear_recurrence(rec, w, cfg.workers);
        seq.set_label("linrec c=" + cfg.coeffs + " init=" + cfg.init);
    } else {
        seq = from_qfibonacci(cfg.q, w, cfg.workers);
    }
    if (cfg.relation) {
        cfg.output_format(Format::Json, {Format::Json});
        write_json(out, to_json(relation_search(seq, cfg.degree, cfg.height, cfg.workers)));
        return kOk;
    }
    cfg.output_format(Format::Csv, {Format::Csv});
    write_sequence_csv(out, seq);
    return kOk;
}

int cmd_gsp(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    cfg.output_format(Format::Json, {Format::Json});
    if (cfg.decay > 0) {
        write_json(out, to_json(trace_decay_report(cfg.g, cfg.ell, cfg.decay, cfg.workers)));
        return kOk;
    }
    const GspCensus c = census(GspParams{cfg.g, cfg.ell, cfg.m}, cfg.workers);
    if (c.order != order_formula(c.params))
        throw InvariantViolation("census order disagrees with the order formula");
    write_json(out, to_json(c));
    return kOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Finite-field and prime-sequence computations", "ffl"};
    app.require_subcommand(1);

    auto add_x = [&](CLI::App* sub) {
        sub->add_option("--x", cfg.x, "Prime bound X (e.g. 100000, 1e5, 10^5)");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--workers", cfg.workers, "Worker threads");
        sub->add_option("--format", cfg.format, "Output format: text, csv or json");
    };
    auto add_curve = [&](CLI::App* sub) {
        sub->add_option("--curve", cfg.curve, "genus1:A,B, genus2:c4,c3,c2,c1,c0 or a shipped name");
        sub->add_option("--cache-dir", cfg.cache_dir, "Trace cache directory");
        add_x(sub);
        add_common(sub);
    };

    CLI::App* traces = app.add_subcommand("traces", "Sweep Frobenius traces into the cache");
    add_curve(traces);

    CLI::App* satotate = app.add_subcommand("satotate", "Angle distribution against both limiting measures");
    add_curve(satotate);
    satotate->add_option("--bins", cfg.bins, "Histogram bins");

    CLI::App* density = app.add_subcommand("density", "Zero-trace, S3 or split-prime densities");
    add_curve(density);
    density->add_option("--b", cfg.b, "b = r or r/N for the S3 density");
    density->add_option("--poly", cfg.poly, "Split density of poly:c_{d-1},...,c_0");

    CLI::App* forcing = app.add_subcommand("forcing", "Forcing scan a_p = b (mod p) on split primes");
    add_curve(forcing);
    forcing->add_option("--b", cfg.b, "b = r or r/N, nonzero");
    forcing->add_option("--poly", cfg.poly, "Splitting field polynomial (default poly:0,1)");
    forcing->add_flag("--entries", cfg.entries, "Include per-prime rows");

    CLI::App* countT = app.add_subcommand("countT", "Count primes with a_p != 0 divisible by l");
    add_curve(countT);
    countT->add_option("--l", cfg.ell, "Prime l");
    countT->add_option("--b-list", cfg.b_list, "b values for the norm-gap census")->delimiter(',');

    CLI::App* split = app.add_subcommand("split", "Per-prime splitting of a polynomial");
    split->add_option("--poly", cfg.poly, "poly:c_{d-1},...,c_0");
    add_x(split);
    add_common(split);

    CLI::App* aring = app.add_subcommand("aring", "Residue sequences and relation search");
    aring->require_subcommand(1);
    auto add_relation = [&](CLI::App* source) {
        CLI::App* rel = source->add_subcommand("relation", "Search for an annihilating polynomial");
        rel->fallthrough();
        rel->add_option("--deg", cfg.degree, "Degree bound D");
        rel->add_option("--height", cfg.height, "Coefficient bound H");
        rel->callback([&] { cfg.relation = true; });
    };
    CLI::App* linrec = aring->add_subcommand("linrec", "Linear recurrence at prime indices");
    linrec->add_option("--coeffs", cfg.coeffs, "c_1,...,c_k");
    linrec->add_option("--init", cfg.init, "a_0,...,a_{k-1}");
    CLI::App* qfib = aring->add_subcommand("qfib", "q-Fibonacci at prime indices");
    qfib->add_option("--q", cfg.q, "Integer q >= 2");
    for (CLI::App* source : {linrec, qfib}) {
        source->fallthrough();
        source->add_option("--pmin", cfg.p_min, "Smallest prime of the window");
        add_x(source);
        add_common(source);
        add_relation(source);
    }

    CLI::App* gsp = app.add_subcommand("gsp", "Exhaustive GSp_2g(Z/l^m) census");
    gsp->add_option("--g", cfg.g, "Genus g");
    gsp->add_option("--l", cfg.ell, "Prime l");
    gsp->add_option("--m", cfg.m, "Exponent m");
    gsp->add_option("--decay", cfg.decay, "Report h_m/order for m = 1..M instead");
    add_common(gsp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    for (CLI::App* sub : app.get_subcommands())
        cfg.subcommand = sub->get_name();
    if (cfg.subcommand == "aring")
        cfg.aring_source = aring->get_subcommands().front()->get_name();

    try {
        cfg.validate();
        if (cfg.subcommand == "traces")
            return cmd_traces(cfg, out, err);
        if (cfg.subcommand == "satotate")
            return cmd_satotate(cfg, out, err);
        if (cfg.subcommand == "density")
            return cmd_density(cfg, out, err);
        if (cfg.subcommand == "forcing")
            return cmd_forcing(cfg, out, err);
        if (cfg.subcommand == "countT")
            return cmd_countT(cfg, out, err);
        if (cfg.subcommand == "split")
            return cmd_split(cfg, out, err);
        if (cfg.subcommand == "aring")
            return cmd_aring(cfg, out, err);
        return cmd_gsp(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const Error& e) {
        if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const BoundsError*>(&e) ||
            dynamic_cast<const Unsupported*>(&e) || dynamic_cast<const InsufficientData*>(&e) ||
            dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const WindowMismatch*>(&e) ||
            dynamic_cast<const NotInvertible*>(&e)) {
            err << "error: " << e.what() << '\n';
            return kUsage;
        }
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }
}

} // namespace ffl::cli
