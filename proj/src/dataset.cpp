#include <ellseg/dataset.hpp>

#include <ellseg/classes.hpp>
#include <ellseg/image_ops.hpp>
#include <ellseg/io.hpp>
#include <ellseg/labels.hpp>
#include <ellseg/random.hpp>
#include <ellseg/serialization.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ellseg::dataset {

namespace fs = std::filesystem;
using Json = json::Json;

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table{
        {"nvgaze", 1280, 960, std::nullopt, 0.25, false},
        {"openeds", 400, 640, std::array<int, 2>{400, 300}, 0.8, false},
        {"riteyes", 640, 480, std::nullopt, 0.5, false},
        {"lpw", 640, 480, std::nullopt, 0.5, true},
        {"else", 384, 288, std::nullopt, 5.0 / 6.0, true},
        {"pupilnet", 384, 288, std::nullopt, 5.0 / 6.0, true},
        {"synthetic", 320, 240, std::nullopt, 1.0, false},
    };
    return table;
}

const Preset& preset(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {

std::optional<Point> optional_point(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return json::point_from_json(j[key]);
}

std::optional<Ellipse> optional_ellipse(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return json::ellipse_from_json(j[key]);
}

std::string string_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw io::SchemaError(std::string("expected string field '") + key + "'");
    }
    return j[key].get<std::string>();
}

std::array<int, 256> parse_class_map(const Json& j) {
    if (!j.is_object()) throw io::SchemaError("class_map must map source values to class indices");
    std::array<int, 256> map{};
    for (int v = 0; v < 256; ++v) map[static_cast<std::size_t>(v)] = v;
    for (const auto& [key, value] : j.items()) {
        int source = -1;
        try {
            source = std::stoi(key);
        } catch (const std::exception&) {
            throw io::SchemaError("class_map key '" + key + "' is not an integer");
        }
        if (source < 0 || source > 255 || !value.is_number_integer()) {
            throw io::SchemaError("class_map entry '" + key + "' out of range");
        }
        map[static_cast<std::size_t>(source)] = value.get<int>();
    }
    return map;
}

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

/// Weights of source samples for each output sample along one axis.
struct Taps {
    std::vector<std::vector<std::pair<int, double>>> taps;
};

Taps axis_taps(int out_size, int src_size, double origin, double scale) {
    Taps t;
    t.taps.resize(static_cast<std::size_t>(out_size));
    for (int u = 0; u < out_size; ++u) {
        auto& row = t.taps[static_cast<std::size_t>(u)];
        const double center = origin + u / scale;
        if (scale < 1.0) {
            const double lo = center - 0.5 / scale;
            const double hi = center + 0.5 / scale;
            double total = 0.0;
            for (int i = static_cast<int>(std::floor(lo + 0.5)); i <= static_cast<int>(std::ceil(hi - 0.5)); ++i) {
                const double w = overlap(lo, hi, i - 0.5, i + 0.5);
                if (w <= 0.0) continue;
                row.emplace_back(std::clamp(i, 0, src_size - 1), w);
                total += w;
            }
            for (auto& tap : row) tap.second /= total;
        } else {
            const double c = std::clamp(center, 0.0, static_cast<double>(src_size - 1));
            const int i0 = static_cast<int>(std::floor(c));
            const int i1 = std::min(i0 + 1, src_size - 1);
            const double f = c - i0;
            row.emplace_back(i0, 1.0 - f);
            if (f > 0.0) row.emplace_back(i1, f);
        }
    }
    return t;
}

bool is_identity(const Resampling& r, int width, int height) {
    return r.scale == 1.0 && r.x0 == 0.0 && r.y0 == 0.0 && r.width == width && r.height == height;
}

}  // namespace

Manifest read_manifest(const fs::path& path) {
    const std::string text = io::read_text(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw io::SchemaError("manifest is not JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw io::SchemaError("manifest must be a JSON object");
    Manifest m;
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path root = j.contains("root") && j["root"].is_string() ? fs::path(j["root"].get<std::string>()) : fs::path(".");
    m.root = root.is_absolute() ? root : base / root;
    if (j.contains("preset")) m.preset = string_field(j, "preset");
    try {
        preset(m.preset);
    } catch (const std::invalid_argument& e) {
        throw io::SchemaError(e.what());
    }
    if (j.contains("scale") && !j["scale"].is_null()) {
        if (!j["scale"].is_number() || !(j["scale"].get<double>() > 0.0)) throw io::SchemaError("scale must be > 0");
        m.scale = j["scale"].get<double>();
    }
    if (j.contains("class_map") && !j["class_map"].is_null()) m.class_map = parse_class_map(j["class_map"]);
    if (!j.contains("entries") || !j["entries"].is_array()) throw io::SchemaError("manifest needs an 'entries' array");
    for (const Json& e : j["entries"]) {
        if (!e.is_object()) throw io::SchemaError("manifest entries must be objects");
        ManifestEntry entry;
        entry.image = string_field(e, "image");
        if (e.contains("mask") && !e["mask"].is_null()) entry.mask = string_field(e, "mask");
        entry.pupil_center = optional_point(e, "pupil_center");
        entry.pupil = optional_ellipse(e, "pupil");
        entry.iris = optional_ellipse(e, "iris");
        if (e.contains("subset") && !e["subset"].is_null()) {
            entry.subset = e["subset"].is_string() ? e["subset"].get<std::string>() : e["subset"].dump();
        }
        if (!entry.mask && !entry.pupil_center && !entry.pupil && !entry.iris) {
            throw io::SchemaError("entry '" + entry.image + "' has no ground truth");
        }
        m.entries.push_back(std::move(entry));
    }
    return m;
}

Point Resampling::apply(Point p) const noexcept { return {(p.x - x0) * scale, (p.y - y0) * scale}; }

Ellipse Resampling::apply(const Ellipse& e) const noexcept {
    const Point c = apply(e.center());
    return Ellipse{c.x, c.y, e.a * scale, e.b * scale, e.theta};
}

Resampling plan_resampling(const Preset& p, std::optional<double> scale_override, int width, int height,
                           const ClassGrid* mask) {
    Resampling r;
    r.scale = scale_override.value_or(p.scale);
    int region_w = width;
    int region_h = height;
    if (p.crop) {
        region_w = std::min((*p.crop)[0], width);
        region_h = std::min((*p.crop)[1], height);
        double cx = (width - 1) / 2.0;
        double cy = (height - 1) / 2.0;
        if (mask != nullptr) {
            double sx = 0.0, sy = 0.0, n = 0.0;
            for (int y = 0; y < mask->height(); ++y) {
                for (int x = 0; x < mask->width(); ++x) {
                    if ((*mask)(x, y) != partseg::kSclera) continue;
                    sx += x;
                    sy += y;
                    n += 1.0;
                }
            }
            if (n > 0.0) {
                cx = sx / n;
                cy = sy / n;
            }
        }
        r.x0 = std::clamp(std::round(cx - (region_w - 1) / 2.0), 0.0, static_cast<double>(width - region_w));
        r.y0 = std::clamp(std::round(cy - (region_h - 1) / 2.0), 0.0, static_cast<double>(height - region_h));
    }
    r.width = std::max(1, static_cast<int>(std::lround(region_w * r.scale)));
    r.height = std::max(1, static_cast<int>(std::lround(region_h * r.scale)));
    return r;
}

GrayImage resample_image(const GrayImage& src, const Resampling& r) {
    if (is_identity(r, src.width(), src.height())) return src;
    const Taps tx = axis_taps(r.width, src.width(), r.x0, r.scale);
    const Taps ty = axis_taps(r.height, src.height(), r.y0, r.scale);
    RealGrid rows(r.width, src.height());
    for (int y = 0; y < src.height(); ++y) {
        for (int u = 0; u < r.width; ++u) {
            double acc = 0.0;
            for (const auto& [i, w] : tx.taps[static_cast<std::size_t>(u)]) acc += w * src(i, y);
            rows(u, y) = acc;
        }
    }
    RealGrid out(r.width, r.height);
    for (int v = 0; v < r.height; ++v) {
        for (int u = 0; u < r.width; ++u) {
            double acc = 0.0;
            for (const auto& [j, w] : ty.taps[static_cast<std::size_t>(v)]) acc += w * rows(u, j);
            out(u, v) = acc;
        }
    }
    return to_gray(out);
}

ClassGrid resample_mask(const ClassGrid& src, const Resampling& r) {
    if (is_identity(r, src.width(), src.height())) return src;
    ClassGrid out(r.width, r.height);
    for (int v = 0; v < r.height; ++v) {
        const int y = std::clamp(static_cast<int>(std::lround(r.y0 + v / r.scale)), 0, src.height() - 1);
        for (int u = 0; u < r.width; ++u) {
            const int x = std::clamp(static_cast<int>(std::lround(r.x0 + u / r.scale)), 0, src.width() - 1);
            out(u, v) = src(x, y);
        }
    }
    return out;
}

LoadResult load_dataset(const Manifest& manifest) {
    const Preset& p = preset(manifest.preset);
    LoadResult result;
    for (const ManifestEntry& entry : manifest.entries) {
        const fs::path image_path = manifest.root / entry.image;
        if (!fs::is_regular_file(image_path)) {
            result.warnings.push_back("missing image " + entry.image + "; entry skipped");
            continue;
        }
        std::optional<fs::path> mask_path;
        if (entry.mask) {
            mask_path = manifest.root / *entry.mask;
            if (!fs::is_regular_file(*mask_path)) {
                result.warnings.push_back("missing mask " + *entry.mask + "; entry skipped");
                continue;
            }
        }
        Record rec;
        rec.key = entry.image;
        rec.subset = entry.subset;
        GrayImage image;
        try {
            image = io::read_png(image_path);
        } catch (const std::exception& e) {
            result.warnings.push_back("unreadable image " + entry.image + ": " + e.what() + "; entry skipped");
            continue;
        }
        std::optional<ClassGrid> mask;
        if (mask_path) {
            try {
                mask = io::read_png(*mask_path);
                if (manifest.class_map) {
                    for (auto& v : mask->data()) v = static_cast<std::uint8_t>((*manifest.class_map)[v]);
                }
                if (!mask->same_shape(image) || !is_valid_partseg(*mask)) rec.mask_valid = false;
            } catch (const io::SchemaError&) {
                rec.mask_valid = false;
                mask.reset();
            }
            if (!rec.mask_valid) result.warnings.push_back("malformed mask " + *entry.mask + "; entry flagged invalid");
        }
        const Resampling r = plan_resampling(p, manifest.scale, image.width(), image.height(),
                                             rec.mask_valid && mask ? &*mask : nullptr);
        rec.image = resample_image(image, r);
        if (mask && rec.mask_valid) rec.mask = resample_mask(*mask, r);
        if (entry.pupil_center) rec.pupil_center = r.apply(*entry.pupil_center);
        if (entry.pupil) {
            rec.pupil = r.apply(*entry.pupil);
            if (!rec.pupil_center) rec.pupil_center = rec.pupil->center();
        }
        if (entry.iris) rec.iris = r.apply(*entry.iris);
        result.records.push_back(std::move(rec));
    }
    return result;
}

Split stratified_split(std::span<const SplitItem> items, const SplitConfig& config, std::uint64_t seed) {
    if (config.bins_x <= 0 || config.bins_y <= 0 || config.width <= 0 || config.height <= 0) {
        throw std::invalid_argument("bin grid and frame must be positive");
    }
    if (!(config.ratio >= 0.0 && config.ratio <= 1.0)) throw std::invalid_argument("ratio must lie in [0, 1]");
    std::map<std::tuple<std::string, int, int>, std::vector<std::size_t>> bins;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const Point c = items[i].center;
        const int bx = std::clamp(static_cast<int>(std::floor(c.x / config.width * config.bins_x)), 0, config.bins_x - 1);
        const int by = std::clamp(static_cast<int>(std::floor(c.y / config.height * config.bins_y)), 0, config.bins_y - 1);
        bins[{items[i].subset, by, bx}].push_back(i);
    }
    Split split;
    bool any = false;
    std::uint64_t ordinal = 0;
    for (auto& [key, members] : bins) {
        ++ordinal;
        if (static_cast<int>(members.size()) < config.min_bin) {
            split.dropped += members.size();
            continue;
        }
        any = true;
        auto rng = derive_rng(seed, {ordinal});
        std::shuffle(members.begin(), members.end(), rng);
        const auto cut = static_cast<std::size_t>(std::lround(config.ratio * static_cast<double>(members.size())));
        split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(cut));
        split.validation.insert(split.validation.end(), members.begin() + static_cast<std::ptrdiff_t>(cut), members.end());
    }
    if (!any) throw std::runtime_error("no stratification bin has at least " + std::to_string(config.min_bin) + " items");
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    return split;
}

}  // namespace ellseg::dataset
