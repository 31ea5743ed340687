#pragma once

#include <ellseg/augmentation.hpp>
#include <ellseg/evaluation.hpp>
#include <ellseg/geometry.hpp>
#include <ellseg/labels.hpp>
#include <ellseg/synth.hpp>

#include "json.hpp"

#include <string>
#include <vector>

namespace ellseg::json {

using Json = nlohmann::ordered_json;

/// Rounds to 9 significant digits so dumps are short and byte-stable.
/// Non-finite values become null.
Json number(double value);

Json to_json(const Ellipse& e);
Json to_json(Point p);
Json to_json(const FitResult& fit);
Json to_json(const augment::Choice& choice);

/// One JSON-lines record keyed by relative path.
Json record_to_json(const std::string& key, const GroundTruthRecord& record);

Json report_to_json(const MetricsReport& report);

/// Throw io::SchemaError on missing or mistyped fields.
Ellipse ellipse_from_json(const Json& j);
Point point_from_json(const Json& j);

struct KeyedRecord {
    std::string key;
    GroundTruthRecord record;
};
KeyedRecord record_from_json(const Json& j);
std::vector<KeyedRecord> read_records(const std::string& jsonl);

/// "threshold,rate" rows.
std::string curve_to_csv(const DetectionCurve& curve);
std::string occlusion_to_csv(const std::vector<OcclusionRow>& rows);

/// Shortest round-trip text of a 9-significant-digit value ("nan"/"inf" otherwise).
std::string format_number(double value);

}  // namespace ellseg::json
