#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffl/aring.hpp"
#include "ffl/gsp.hpp"
#include "ffl/satotate.hpp"
#include "ffl/splitfield.hpp"
#include "ffl/transcheck.hpp"

namespace ffl {

using Json = nlohmann::ordered_json;

/// `include_entries` adds the per-prime rows of a forcing scan.
Json to_json(const ForcingReport& r, bool include_entries = false);
Json to_json(const CountReport& r);
Json to_json(const DensityEstimate& d);
Json to_json(const NormGapReport& r);
Json to_json(const AnnihilatorReport& r);
Json to_json(const GspCensus& c);
Json to_json(const DecayReport& r);
Json to_json(const std::vector<HistogramBin>& bins);

/// Pretty printer with two-space indentation and every floating value in
/// fixed notation with 12 digits after the point, so reruns are byte-identical.
/// Non-finite values print as null.
void write_json(std::ostream& os, const Json& j);
std::string dump_json(const Json& j);

} // namespace ffl
