#pragma once

#include <ellseg/grid.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace ellseg {

/// Geometric ellipse: center, semi-axes (a >= b > 0) and major-axis
/// orientation theta in [0, pi). Construct through make_ellipse() to get the
/// canonical form.
struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double a = 1.0;
    double b = 1.0;
    double theta = 0.0;

    [[nodiscard]] Point center() const noexcept { return {cx, cy}; }
    friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

struct BBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    [[nodiscard]] double area() const noexcept { return (xmax - xmin) * (ymax - ymin); }
};

/// Wraps an angle into [0, pi).
double normalize_orientation(double theta) noexcept;

/// Builds a canonical ellipse: swaps axes so a >= b, wraps theta into [0, pi)
/// and pins theta to 0 for circles. Throws std::invalid_argument on
/// non-finite or non-positive axes.
Ellipse make_ellipse(double cx, double cy, double a, double b, double theta);

/// True if the ellipse satisfies all representation invariants.
bool is_valid(const Ellipse& e) noexcept;

/// Normalized quadratic form value: <= 1 inside, 1 on the boundary.
double quadratic_form(const Ellipse& e, Point p) noexcept;

bool contains(const Ellipse& e, Point p) noexcept;

/// Binary grid with cell (x, y) set iff the pixel center (x, y) lies inside
/// or on the ellipse.
BinaryGrid rasterize(const Ellipse& e, int width, int height);

BBox bounding_box(const Ellipse& e) noexcept;

/// IoU of two axis-aligned boxes; 0 for disjoint or degenerate boxes.
double box_iou(const BBox& lhs, const BBox& rhs) noexcept;

/// n points at uniformly spaced parametric angles, each pushed radially by
/// N(0, noise_sigma). Throws std::invalid_argument when n < 5.
std::vector<Point> sample_boundary(const Ellipse& e, int n, double noise_sigma, std::mt19937_64& rng);

/// Point on the boundary at parametric angle t.
Point boundary_point(const Ellipse& e, double t) noexcept;

inline double distance(Point p, Point q) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return std::sqrt(dx * dx + dy * dy);
}

constexpr double kPi = std::numbers::pi;
constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

}  // namespace ellseg
