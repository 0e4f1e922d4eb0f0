#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "frozenperc/connectivity.hpp"
#include "frozenperc/lattice.hpp"
#include "frozenperc/lemma.hpp"
#include "frozenperc/montecarlo.hpp"
#include "json.hpp"

namespace frozenperc {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kConfigSchemaVersion = 1;

using Json = nlohmann::ordered_json;

void to_json(Json& j, const Rect& r);
void from_json(const Json& j, Rect& r);
void to_json(Json& j, const ShapeParams& p);
void from_json(const Json& j, ShapeParams& p);
void to_json(Json& j, const ProofGeometry& g);
void to_json(Json& j, const Circuit& c);
void to_json(Json& j, const OriginStats& o);
void to_json(Json& j, const Estimate& e);
void to_json(Json& j, const TauSolution& s);
void to_json(Json& j, const EventReport& r);
void to_json(Json& j, const ImplicationVerdict& v);
void to_json(Json& j, const Proportion& p);
void to_json(Json& j, const SweepRow& row);
void to_json(Json& j, const Histogram& h);
void to_json(Json& j, const Plan& p);

const char* to_string(BoundaryPolicy p);
/// Throws std::invalid_argument for unknown names.
BoundaryPolicy parse_boundary_policy(const std::string& name);
const char* to_string(BracketEdge e);
const char* to_string(SearchStrategy s);
/// "unbounded" or the integer.
std::string to_string(FreezeThreshold n);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

inline constexpr const char* kSweepCsvHeader =
    "N,window,replicates,p_interval,p_interval_lo,p_interval_hi,p_giant,p_giant_lo,p_giant_hi,p_max,excluded_boundary";
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Columns: bin_lo,bin_hi,count,mass.
void write_histogram_csv(std::ostream& out, const Histogram& h);

/// Run manifest. Everything that varies between identical invocations
/// lives under the "timestamp" key.
Json make_manifest(const std::string& command, const Json& config, std::uint64_t master_seed,
                   const std::string& output, const std::string& started_utc, double wall_seconds);

/// ISO-8601 UTC time of now, to the second.
std::string utc_now();

}  // namespace frozenperc
