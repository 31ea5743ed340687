#pragma once

#include <ellseg/grid.hpp>

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ellseg {

enum class BoundaryKind { pupil_iris, limbus, other };

struct EdgePoint {
    double x = 0.0;
    double y = 0.0;
    BoundaryKind kind = BoundaryKind::other;

    [[nodiscard]] Point point() const noexcept { return {x, y}; }
};

/// Hysteresis thresholds used for binary-mask inputs on the 0-255 scale.
inline constexpr double kMaskCannyLow = 50.0;
inline constexpr double kMaskCannyHigh = 150.0;

/// Canny edge detector: Gaussian pre-smoothing, 3x3 Sobel gradients,
/// non-maximum suppression along the signed gradient direction and
/// hysteresis linking (8-connected). Returns a 0/1 grid of thinned edges.
///
/// Along a plateau of equal magnitude the pixel on the low-intensity side
/// survives suppression, so an indicator and its complement place their
/// edges on opposite sides of a step.
BinaryGrid canny(const RealGrid& gray, double low, double high, double sigma = 1.0);

/// Sub-pixel boundary of the region {mask in classes}. Canny edges of the
/// region indicator and of its complement are merged; each edge pixel pairs
/// with the nearest pixel of opposite membership within Chebyshev distance 1
/// (ties go to the neighbor best aligned with the local transition) and the
/// pair midpoint is emitted once. Unpaired pixels are emitted at their
/// integer location.
std::vector<EdgePoint> class_boundary_points(const ClassGrid& mask, std::initializer_list<std::uint8_t> classes);
std::vector<EdgePoint> class_boundary_points(const ClassGrid& mask, const std::vector<std::uint8_t>& classes);
std::vector<EdgePoint> class_boundary_points(const ClassGrid& mask, std::uint8_t class_id);

/// Keeps points whose rounded location has no forbidden PartSeg class in its
/// 3x3 neighborhood: sclera/background for pupil_iris, pupil/background for
/// limbus. Surviving points are tagged with `kind`.
std::vector<EdgePoint> filter_neighbor_condition(const std::vector<EdgePoint>& points, const ClassGrid& mask,
                                                 BoundaryKind kind);

}  // namespace ellseg
