#pragma once

#include <ellseg/fitting.hpp>
#include <ellseg/geometry.hpp>
#include <ellseg/grid.hpp>
#include <ellseg/labels.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace ellseg {

inline constexpr int kWorkingWidth = 320;
inline constexpr int kWorkingHeight = 240;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Generator settings for synthetic eyes at the working resolution.
struct SynthParams {
    int width = kWorkingWidth;
    int height = kWorkingHeight;
    Range iris_cx{120.0, 200.0};
    Range iris_cy{100.0, 140.0};
    Range iris_semi_major{34.0, 46.0};
    /// Angle between gaze and camera axis in degrees. Pupil and iris are
    /// coplanar circles, so both project with aspect cos(obliquity) and the
    /// same orientation.
    Range obliquity_deg{0.0, 40.0};
    Range pupil_scale{0.35, 0.6};  ///< pupil radius relative to iris radius
    double pupil_offset = 0.2;  ///< max pupil-center offset relative to iris semi-minor
    /// Fraction of the iris height left visible by the eyelids, in [0, 1].
    double aperture = 1.0;
    /// Clearance between eyelid and iris when fully open, in pixels.
    double lid_margin = 4.0;
    double background_level = 150.0;
    double sclera_level = 210.0;
    double iris_level = 90.0;
    double pupil_level = 25.0;
    double noise_sigma = 4.0;

    /// Throws std::invalid_argument when a range or level is out of bounds.
    void validate() const;
};

/// Aperture-independent eye geometry.
struct EyeGeometry {
    Ellipse pupil;
    Ellipse iris;
};

struct SynthEye {
    GrayImage image;
    ClassGrid partseg;
    ClassGrid ellseg;
    GroundTruthRecord truth;
};

EyeGeometry sample_eye_geometry(const SynthParams& params, std::mt19937_64& rng);

/// PartSeg mask of the eye seen through two elliptical eyelid caps.
ClassGrid render_partseg(const EyeGeometry& eye, const SynthParams& params);

/// Per-region intensities plus Gaussian noise drawn from `rng`.
GrayImage render_image(const ClassGrid& partseg, const SynthParams& params, std::mt19937_64& rng);

SynthEye synth_eye(const SynthParams& params, std::mt19937_64& rng);

struct OcclusionRow {
    double aperture = 0.0;
    double partseg_median = 0.0;  ///< median iris-center error over valid PartSeg fits
    double ellseg_median = 0.0;   ///< same for EllSeg fits
    int partseg_fail = 0;         ///< images with an invalid pupil or iris fit
    int ellseg_fail = 0;
};

/// For each aperture the same n eye geometries are rendered, fitted from the
/// visible PartSeg boundary and from the full EllSeg mask, and scored against
/// the analytic iris center.
std::vector<OcclusionRow> occlusion_experiment(int n_per_level, const std::vector<double>& apertures,
                                               std::uint64_t seed, const SynthParams& base = {},
                                               const RansacConfig& ransac = {});

inline constexpr const char* kOcclusionCsvHeader = "aperture,partseg_med,ellseg_med,partseg_fail,ellseg_fail";

}  // namespace ellseg
