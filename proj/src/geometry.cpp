#include <ellseg/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellseg {

namespace {

// Relative axis difference below which an ellipse is treated as a circle.
constexpr double kCircleTolerance = 1e-9;

}  // namespace

double normalize_orientation(double theta) noexcept {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t = 0.0;
    return t;
}

Ellipse make_ellipse(double cx, double cy, double a, double b, double theta) {
    if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(theta)) {
        throw std::invalid_argument("ellipse parameters must be finite");
    }
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("ellipse semi-axes must be positive");
    if (a < b) {
        std::swap(a, b);
        theta += kPi / 2.0;
    }
    theta = normalize_orientation(theta);
    if (a - b <= kCircleTolerance * a) theta = 0.0;
    return Ellipse{cx, cy, a, b, theta};
}

bool is_valid(const Ellipse& e) noexcept {
    return std::isfinite(e.cx) && std::isfinite(e.cy) && std::isfinite(e.a) && std::isfinite(e.b) &&
           std::isfinite(e.theta) && e.b > 0.0 && e.a >= e.b && e.theta >= 0.0 && e.theta < kPi;
}

double quadratic_form(const Ellipse& e, Point p) noexcept {
    const double dx = p.x - e.cx;
    const double dy = p.y - e.cy;
    const double c = std::cos(e.theta);
    const double s = std::sin(e.theta);
    const double u = (dx * c + dy * s) / e.a;
    const double v = (-dx * s + dy * c) / e.b;
    return u * u + v * v;
}

bool contains(const Ellipse& e, Point p) noexcept { return quadratic_form(e, p) <= 1.0; }

BinaryGrid rasterize(const Ellipse& e, int width, int height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("raster dimensions must be positive");
    BinaryGrid grid(width, height, 0);
    const BBox box = bounding_box(e);
    const int x0 = std::max(0, static_cast<int>(std::floor(box.xmin)));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.ymin)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(box.xmax)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(box.ymax)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (contains(e, {static_cast<double>(x), static_cast<double>(y)})) grid(x, y) = 1;
        }
    }
    return grid;
}

BBox bounding_box(const Ellipse& e) noexcept {
    const double c = std::cos(e.theta);
    const double s = std::sin(e.theta);
    const double hw = std::sqrt(e.a * e.a * c * c + e.b * e.b * s * s);
    const double hh = std::sqrt(e.a * e.a * s * s + e.b * e.b * c * c);
    return BBox{e.cx - hw, e.cy - hh, e.cx + hw, e.cy + hh};
}

double box_iou(const BBox& lhs, const BBox& rhs) noexcept {
    const double iw = std::min(lhs.xmax, rhs.xmax) - std::max(lhs.xmin, rhs.xmin);
    const double ih = std::min(lhs.ymax, rhs.ymax) - std::max(lhs.ymin, rhs.ymin);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = lhs.area() + rhs.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

Point boundary_point(const Ellipse& e, double t) noexcept {
    const double c = std::cos(e.theta);
    const double s = std::sin(e.theta);
    const double u = e.a * std::cos(t);
    const double v = e.b * std::sin(t);
    return {e.cx + u * c - v * s, e.cy + u * s + v * c};
}

std::vector<Point> sample_boundary(const Ellipse& e, int n, double noise_sigma, std::mt19937_64& rng) {
    if (n < 5) throw std::invalid_argument("sample_boundary needs at least 5 points");
    if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        Point p = boundary_point(e, t);
        if (noise_sigma > 0.0) {
            const double dx = p.x - e.cx;
            const double dy = p.y - e.cy;
            const double r = std::hypot(dx, dy);
            const double offset = noise_sigma * noise(rng);
            p.x += offset * dx / r;
            p.y += offset * dy / r;
        }
        points.push_back(p);
    }
    return points;
}

}  // namespace ellseg
