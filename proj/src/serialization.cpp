#include <ellseg/serialization.hpp>

#include <ellseg/io.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ellseg::json {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double round9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::strtod(buf, nullptr);
}

double get_number(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw io::SchemaError(std::string("expected numeric field '") + key + "'");
    }
    return j[key].get<double>();
}

Json optional_or_null(const auto& opt) { return opt ? to_json(*opt) : Json(nullptr); }

Json distribution(const Distribution& d) {
    Json out;
    out["count"] = d.values.size();
    out["median"] = d.values.empty() ? Json(nullptr) : number(d.median);
    Json values = Json::array();
    for (double v : d.values) values.push_back(number(v));
    out["values"] = values;
    return out;
}

Json curve(const DetectionCurve& c) {
    Json out = Json::array();
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
        out.push_back(Json{{"threshold", number(c.thresholds[i])}, {"rate", number(c.rates[i])}});
    }
    return out;
}

}  // namespace

Json number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return round9(value);
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return Json(round9(value)).dump();
}

Json to_json(const Ellipse& e) {
    return Json{{"cx", number(e.cx)}, {"cy", number(e.cy)}, {"a", number(e.a)}, {"b", number(e.b)},
                {"theta", number(e.theta)}};
}

Json to_json(Point p) { return Json::array({number(p.x), number(p.y)}); }

Json to_json(const FitResult& fit) {
    return Json{{"method", to_string(fit.method)},
                {"inliers", fit.inlier_count},
                {"residual_rms", number(fit.residual_rms)}};
}

Json to_json(const augment::Choice& choice) {
    Json out;
    out["choice"] = augment::name(choice);
    out["params"] = std::visit(
        Overloaded{
            [](const augment::Flip&) { return Json::object(); },
            [](const augment::Rotate& r) { return Json{{"degrees", number(r.degrees)}}; },
            [](const augment::Blur& b) { return Json{{"sigma", number(b.sigma)}}; },
            [](const augment::Gamma& g) { return Json{{"gamma", number(g.gamma)}}; },
            [](const augment::Exposure& e) { return Json{{"offset", number(e.offset)}}; },
            [](const augment::Noise& n) { return Json{{"sigma", number(n.sigma)}}; },
            [](const augment::LineMask& l) {
                return Json{{"angle", number(l.angle)}, {"u", number(l.u)}, {"v", number(l.v)}};
            },
            [](const augment::None&) { return Json::object(); },
        },
        choice);
    return out;
}

Json record_to_json(const std::string& key, const GroundTruthRecord& record) {
    Json j;
    j["path"] = key;
    j["pupil_valid"] = record.pupil_valid();
    j["iris_valid"] = record.iris_valid();
    j["pupil"] = optional_or_null(record.pupil);
    j["iris"] = optional_or_null(record.iris);
    j["pupil_center"] = optional_or_null(record.pupil_center);
    j["pupil_fit"] = optional_or_null(record.pupil_fit);
    j["iris_fit"] = optional_or_null(record.iris_fit);
    j["pupil_failure"] = record.pupil_failure.empty() ? Json(nullptr) : Json(record.pupil_failure);
    j["iris_failure"] = record.iris_failure.empty() ? Json(nullptr) : Json(record.iris_failure);
    return j;
}

Ellipse ellipse_from_json(const Json& j) {
    if (!j.is_object()) throw io::SchemaError("ellipse must be a JSON object");
    try {
        return make_ellipse(get_number(j, "cx"), get_number(j, "cy"), get_number(j, "a"), get_number(j, "b"),
                            get_number(j, "theta"));
    } catch (const std::invalid_argument& e) {
        throw io::SchemaError(std::string("invalid ellipse: ") + e.what());
    }
}

Point point_from_json(const Json& j) {
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object()) return {get_number(j, "x"), get_number(j, "y")};
    throw io::SchemaError("point must be [x, y] or {x, y}");
}

KeyedRecord record_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("path") || !j["path"].is_string()) {
        throw io::SchemaError("record needs a string 'path'");
    }
    KeyedRecord out;
    out.key = j["path"].get<std::string>();
    const auto present = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };
    if (present("pupil")) out.record.pupil = ellipse_from_json(j["pupil"]);
    if (present("iris")) out.record.iris = ellipse_from_json(j["iris"]);
    if (present("pupil_center")) {
        out.record.pupil_center = point_from_json(j["pupil_center"]);
    } else if (out.record.pupil) {
        out.record.pupil_center = out.record.pupil->center();
    }
    // explicit validity flags override present ellipses
    if (j.contains("pupil_valid") && j["pupil_valid"].is_boolean() && !j["pupil_valid"].get<bool>()) {
        out.record.pupil.reset();
    }
    if (j.contains("iris_valid") && j["iris_valid"].is_boolean() && !j["iris_valid"].get<bool>()) {
        out.record.iris.reset();
    }
    if (present("pupil_failure") && j["pupil_failure"].is_string()) out.record.pupil_failure = j["pupil_failure"];
    if (present("iris_failure") && j["iris_failure"].is_string()) out.record.iris_failure = j["iris_failure"];
    return out;
}

std::vector<KeyedRecord> read_records(const std::string& jsonl) {
    std::vector<KeyedRecord> out;
    std::istringstream in(jsonl);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(record_from_json(Json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw io::SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const io::SchemaError& e) {
            throw io::SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

Json report_to_json(const MetricsReport& report) {
    Json j;
    j["images"] = report.image_count;
    Json classes = Json::array();
    for (const auto& c : report.class_iou) classes.push_back(c ? number(*c) : Json(nullptr));
    j["class_iou"] = classes;
    j["miou"] = report.miou ? number(*report.miou) : Json(nullptr);
    j["pupil_invalid"] = report.pupil_invalid;
    j["iris_invalid"] = report.iris_invalid;
    j["pupil_center_error"] = distribution(report.pupil_center_error);
    j["iris_center_error"] = distribution(report.iris_center_error);
    j["pupil_boundary_iou"] = distribution(report.pupil_bbox_iou);
    j["iris_boundary_iou"] = distribution(report.iris_bbox_iou);
    j["pupil_orientation_error"] = distribution(report.pupil_orientation_error);
    j["iris_orientation_error"] = distribution(report.iris_orientation_error);
    j["pupil_detection"] = curve(report.pupil_detection);
    j["iris_detection"] = curve(report.iris_detection);
    j["model_selection_score"] = number(report.selection_score);
    return j;
}

std::string curve_to_csv(const DetectionCurve& c) {
    std::string out = "threshold,rate\n";
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
        out += format_number(c.thresholds[i]) + "," + format_number(c.rates[i]) + "\n";
    }
    return out;
}

std::string occlusion_to_csv(const std::vector<OcclusionRow>& rows) {
    std::string out = std::string(kOcclusionCsvHeader) + "\n";
    for (const OcclusionRow& r : rows) {
        out += format_number(r.aperture) + "," + format_number(r.partseg_median) + "," +
               format_number(r.ellseg_median) + "," + std::to_string(r.partseg_fail) + "," +
               std::to_string(r.ellseg_fail) + "\n";
    }
    return out;
}

}  // namespace ellseg::json
