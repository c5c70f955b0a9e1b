#pragma once

// Serialization: the run manifest embedded in every output, the fixed CSV
// record layout, JSON forms of records and bin series, and the density
// matrix file format {"dim":4,"entries":[[re,im] x 16 row-major]}.
//
// Data files must reproduce byte-for-byte when a run is repeated with the
// manifest's parameters, so the wall time is reported on stderr instead of
// being written into the file. CSV numbers carry 17 significant digits to
// round-trip doubles exactly.

#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "qmix/experiments.hpp"
#include "qmix/measures.hpp"
#include "qmix/rng.hpp"
#include "qmix/version.hpp"

namespace qmix {

inline constexpr const char* kCsvHeader =
    "C,E,R,lambda_max,SL,Sinf_AB,Sinf_BA,F_EF,entangled,classical_ineq";

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> params;  // resolved flags, sorted by key
    SeedSpec seed{};
    std::string generator_id = kGeneratorId;
    std::string tool_version = kVersion;
    double wall_time_s = 0.0;  // stderr only
};

std::string format_double(double v);  // %.17g

nlohmann::json manifest_json(const RunManifest& m);
std::string csv_manifest_header(const RunManifest& m);  // '#'-prefixed lines

std::string csv_row(const MeasureRecord& r);
nlohmann::json record_json(const MeasureRecord& r);

// empty bins serialize max_C as null
nlohmann::json bin_series_json(const BinSeries& b);

nlohmann::json density_to_json(const Mat4& m);
Mat4 density_from_json(const nlohmann::json& j);
Mat4 load_density_file(const std::string& path);

}  // namespace qmix
