#include "ffl/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace ffl {

namespace {

Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const Rational& b : v)
        a.push_back(b.to_string());
    return a;
}

Json coefficients(const PolyCoeffs& f) {
    Json a = Json::array();
    for (std::int64_t c : f)
        a.push_back(c);
    return a;
}

void emit(std::ostream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first)
                os << ",\n";
            first = false;
            os << pad << Json(key).dump() << ": ";
            emit(os, value, indent + 2);
        }
        os << '\n' << close << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool scalars = true;
        for (const Json& v : j)
            scalars = scalars && !v.is_structured();
        if (scalars) {
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    os << ", ";
                emit(os, j[i], indent);
            }
            os << ']';
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                os << ",\n";
            os << pad;
            emit(os, j[i], indent + 2);
        }
        os << '\n' << close << ']';
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            os << "null";
            return;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12f", v);
        os << buf;
        return;
    }
    default:
        os << j.dump();
    }
}

} // namespace

Json to_json(const ForcingReport& r, bool include_entries) {
    Json j;
    j["curve"] = r.curve_id;
    j["b"] = r.b.to_string();
    j["K"] = r.K;
    j["L"] = r.L_poly;
    j["X"] = r.X;
    j["records"] = r.entries.size();
    j["s1_count"] = r.s1_count;
    j["s2_count"] = r.s2_count;
    j["s3_count"] = r.s3_count;
    j["congruent_count"] = r.congruent_count;
    j["violations"] = r.violations;
    j["chain_failures"] = r.chain_failures;
    if (include_entries) {
        Json rows = Json::array();
        for (const ForcingEntry& e : r.entries)
            rows.push_back(Json{{"p", e.p}, {"split", e.split}, {"congruent", e.congruent}, {"equal", e.equal}});
        j["entries"] = std::move(rows);
    }
    return j;
}

Json to_json(const CountReport& r) {
    Json j;
    j["X"] = r.X;
    j["l"] = r.ell;
    j["pi_x"] = r.pi_x;
    j["records"] = r.records;
    j["t_count"] = r.t_count;
    j["zero_count"] = r.zero_count;
    j["nondivisible_count"] = r.nondivisible_count;
    j["x_over_log_x"] = r.x_over_log_x;
    j["sqrt_x_log_x"] = r.sqrt_x_log_x;
    j["t_over_pi"] = r.t_over_pi;
    j["t_over_x_over_log_x"] = r.t_over_x_over_log_x;
    j["t_over_sqrt_x_log_x"] = r.t_over_sqrt_x_log_x;
    j["exceeds_sqrt_bound"] = r.exceeds_sqrt_bound;
    return j;
}

Json to_json(const DensityEstimate& d) {
    Json j;
    j["set"] = d.set_label;
    j["X"] = d.X;
    j["count"] = d.count;
    j["pi_x"] = d.pi_x;
    j["estimate"] = d.estimate;
    return j;
}

Json to_json(const NormGapReport& r) {
    Json j;
    j["X"] = r.X;
    j["b_list"] = rationals(r.b_list);
    j["count"] = r.count;
    j["sqrt_x_log_x"] = r.sqrt_x_log_x;
    j["fitted_C"] = r.fitted_C;
    j["chain_failures"] = r.chain_failures;
    j["primes"] = r.primes;
    return j;
}

Json to_json(const AnnihilatorReport& r) {
    Json j;
    j["label"] = r.label;
    j["degree_bound"] = r.degree_bound;
    j["height_bound"] = r.height_bound;
    j["pmin"] = r.window.p_min;
    j["X"] = r.window.X;
    j["candidates"] = r.candidates;
    Json found = Json::array();
    for (const Annihilator& a : r.found) {
        Json f;
        f["poly"] = poly_to_string(a.f);
        f["coeffs"] = coefficients(a.f);
        if (a.largest_violation)
            f["largest_violation"] = *a.largest_violation;
        else
            f["largest_violation"] = nullptr;
        f["rational_roots"] = rationals(a.rational_roots);
        found.push_back(std::move(f));
    }
    j["found"] = std::move(found);
    return j;
}

Json to_json(const GspCensus& c) {
    Json j;
    j["g"] = c.params.g;
    j["l"] = c.params.ell;
    j["m"] = c.params.m;
    j["order"] = c.order;
    j["order_formula"] = order_formula(c.params).str();
    Json counts = Json::object();
    for (const auto& [t, n] : c.trace_counts)
        counts[std::to_string(t)] = n;
    j["trace_counts"] = std::move(counts);
    j["h_m"] = c.h_m;
    j["ratio"] = c.ratio();
    return j;
}

Json to_json(const DecayReport& r) {
    Json j;
    j["g"] = r.g;
    j["l"] = r.ell;
    Json rows = Json::array();
    for (const DecayRow& row : r.rows)
        rows.push_back(Json{{"m", row.m},
                            {"order", row.order},
                            {"h_m", row.h_m},
                            {"ratio", row.ratio},
                            {"l_pow_neg_m", row.ell_pow_neg_m}});
    j["rows"] = std::move(rows);
    j["fitted_C"] = r.fitted_C;
    j["C_at_m1"] = r.C_at_m1;
    j["holds_with_C_at_m1"] = r.holds_with_C_at_m1;
    return j;
}

Json to_json(const std::vector<HistogramBin>& bins) {
    Json a = Json::array();
    for (const HistogramBin& b : bins)
        a.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"noncm_mass", b.noncm_mass},
                         {"cm_mass", b.cm_mass}});
    return a;
}

void write_json(std::ostream& os, const Json& j) {
    emit(os, j, 0);
    os << '\n';
}

std::string dump_json(const Json& j) {
    std::ostringstream os;
    write_json(os, j);
    return os.str();
}

} // namespace ffl
