#pragma once

// JSON envelopes and CSV rows. Reals in payloads are hex-float strings so that
// a round trip is bit-exact; reports also carry decimal mirror fields.

#include "pinchlab/catalog.hpp"
#include "pinchlab/morse.hpp"
#include "pinchlab/pinch_constants.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace pinchlab::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string hex(double v);
double unhex(const json& j);

json to_json(const VectorFormd& f);
VectorFormd form_from_json(const json& j);

json to_json(const QuadratureSpec& q);
QuadratureSpec quad_from_json(const json& j);

json to_json(const EstimateRecord& r);
EstimateRecord record_from_json(const json& j);

json to_json(const TheoremConstants& c);
TheoremConstants constants_from_json(const json& j);

json to_json(const InequalityReport& r);
json to_json(const TotalCurvature& t);
json to_json(const CatalogImmersion& m);

/// {schema_version, timestamp, kind, config, payload}
json envelope(const std::string& kind, const json& config, const json& payload);

/// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& text);

json read_json(const std::filesystem::path& path);

/// Appends a row, writing the header first when the file is new.
void append_csv(const std::filesystem::path& path, const std::string& header, const std::string& row);

std::string csv_header_estimate();
std::string csv_row(const EstimateRecord& r);
std::string csv_header_report();
std::string csv_row(const InequalityReport& r);

}  // namespace pinchlab::io
