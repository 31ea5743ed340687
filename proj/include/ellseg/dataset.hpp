#pragma once

#include <ellseg/geometry.hpp>
#include <ellseg/grid.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ellseg::dataset {

/// Per-source preprocessing to the 320x240 working resolution.
struct Preset {
    std::string name;
    int source_width = 0;
    int source_height = 0;
    /// Crop window placed about the sclera centroid before scaling.
    std::optional<std::array<int, 2>> crop;
    double scale = 1.0;
    /// Sources that only publish pupil centers.
    bool center_only = false;
};

/// Throws std::invalid_argument for unknown names.
const Preset& preset(const std::string& name);
const std::vector<Preset>& presets();

struct ManifestEntry {
    std::string image;
    std::optional<std::string> mask;
    std::optional<Point> pupil_center;
    std::optional<Ellipse> pupil;
    std::optional<Ellipse> iris;
    std::string subset = "0";
};

struct Manifest {
    std::filesystem::path root;
    std::string preset = "synthetic";
    std::optional<double> scale;
    /// Source mask value -> class index. Unmapped values pass through.
    std::optional<std::array<int, 256>> class_map;
    std::vector<ManifestEntry> entries;
};

/// Relative `root` resolves against the manifest's directory.
/// Throws io::ReadError or io::SchemaError.
Manifest read_manifest(const std::filesystem::path& path);

/// Crop offset followed by a uniform scale: x' = (x - x0) * s.
struct Resampling {
    double x0 = 0.0;
    double y0 = 0.0;
    double scale = 1.0;
    int width = 0;
    int height = 0;

    [[nodiscard]] Point apply(Point p) const noexcept;
    [[nodiscard]] Ellipse apply(const Ellipse& e) const noexcept;
};

/// Scale from the manifest override or the preset; the crop (if any) is
/// centered on the sclera pixels of `mask`, else on the frame, and kept inside it.
Resampling plan_resampling(const Preset& preset, std::optional<double> scale_override, int width, int height,
                           const ClassGrid* mask);

/// Area-weighted average when shrinking, bilinear when enlarging.
GrayImage resample_image(const GrayImage& src, const Resampling& r);
/// Nearest neighbor.
ClassGrid resample_mask(const ClassGrid& src, const Resampling& r);

struct Record {
    std::string key;  ///< image path relative to the root
    std::string subset;
    GrayImage image;
    std::optional<ClassGrid> mask;
    bool mask_valid = true;
    std::optional<Point> pupil_center;
    std::optional<Ellipse> pupil;
    std::optional<Ellipse> iris;
};

struct LoadResult {
    std::vector<Record> records;
    std::vector<std::string> warnings;
};

/// Missing files skip their entry with a warning; masks with out-of-range
/// classes or a size different from the image are kept but flagged invalid.
LoadResult load_dataset(const Manifest& manifest);

struct SplitItem {
    Point center;
    std::string subset;
};

struct SplitConfig {
    double ratio = 0.8;
    int bins_x = 8;
    int bins_y = 6;
    int min_bin = 5;
    int width = 320;
    int height = 240;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::size_t dropped = 0;  ///< items in bins below min_bin
};

/// Bins by (subset, center cell), drops small bins, shuffles each surviving
/// bin with its own seeded stream and cuts it at round(ratio * size).
/// Throws std::runtime_error when no bin survives.
Split stratified_split(std::span<const SplitItem> items, const SplitConfig& config, std::uint64_t seed);

}  // namespace ellseg::dataset
