#pragma once

#include <ellseg/classes.hpp>
#include <ellseg/fitting.hpp>
#include <ellseg/geometry.hpp>
#include <ellseg/grid.hpp>

#include <optional>
#include <random>
#include <string>

namespace ellseg {

/// Per-image ground truth. A structure is valid iff its ellipse is present.
/// Fit diagnostics are only filled for fitted (not analytic) ellipses.
struct GroundTruthRecord {
    std::optional<Ellipse> pupil;
    std::optional<Ellipse> iris;
    std::optional<Point> pupil_center;
    std::optional<FitResult> pupil_fit;
    std::optional<FitResult> iris_fit;
    std::string pupil_failure;
    std::string iris_failure;

    [[nodiscard]] bool pupil_valid() const noexcept { return pupil.has_value(); }
    [[nodiscard]] bool iris_valid() const noexcept { return iris.has_value(); }
};

bool is_valid_partseg(const ClassGrid& mask) noexcept;
bool is_valid_ellseg(const ClassGrid& mask) noexcept;

/// Fits pupil and iris ellipses to the filtered boundary points of a PartSeg
/// mask. Never throws on fit failures; they are recorded per structure.
GroundTruthRecord partseg_to_ellipses(const ClassGrid& mask, const RansacConfig& config, std::mt19937_64& rng);

/// Same pipeline on a full-ellipse mask (pupil = class 2, iris = classes 1 and 2).
GroundTruthRecord ellseg_to_ellipses(const ClassGrid& mask, const RansacConfig& config, std::mt19937_64& rng);

/// Paints the iris as class 1, then the pupil as class 2 over it.
ClassGrid ellipses_to_ellseg(const Ellipse& pupil, const Ellipse& iris, int width, int height);

struct OcclusionFractions {
    std::optional<double> pupil;
    std::optional<double> iris;
};

/// One minus the visible share of each full-ellipse region; a structure with
/// zero full-ellipse area has no fraction. Throws std::invalid_argument on a
/// shape mismatch.
OcclusionFractions occlusion_fraction(const ClassGrid& part, const ClassGrid& ell);

}  // namespace ellseg
