#include <ellseg/edges.hpp>

#include <ellseg/classes.hpp>
#include <ellseg/geometry.hpp>
#include <ellseg/image_ops.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ellseg {

namespace {

constexpr std::array<int, 8> kDx{1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy{0, 1, 1, 1, 0, -1, -1, -1};

// Magnitudes from the two sides of a symmetric step agree only up to rounding.
constexpr double kPlateauTolerance = 1e-9;

}  // namespace

BinaryGrid canny(const RealGrid& gray, double low, double high, double sigma) {
    if (low < 0.0 || high < low) throw std::invalid_argument("canny thresholds must satisfy 0 <= low <= high");
    const int w = gray.width();
    const int h = gray.height();
    BinaryGrid edges(w, h, 0);
    if (w < 3 || h < 3) return edges;

    const RealGrid smooth = gaussian_blur(gray, sigma);
    RealGrid magnitude(w, h);
    Grid<std::uint8_t> sector(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto s = [&](int dx, int dy) { return smooth.clamped(x + dx, y + dy); };
            const double gx = (s(1, -1) + 2.0 * s(1, 0) + s(1, 1)) - (s(-1, -1) + 2.0 * s(-1, 0) + s(-1, 1));
            const double gy = (s(-1, 1) + 2.0 * s(0, 1) + s(1, 1)) - (s(-1, -1) + 2.0 * s(0, -1) + s(1, -1));
            magnitude(x, y) = std::hypot(gx, gy);
            const long k = std::lround(std::atan2(gy, gx) / (kPi / 4.0));
            sector(x, y) = static_cast<std::uint8_t>(((k % 8) + 8) % 8);
        }
    }

    const auto mag_at = [&](int x, int y) { return magnitude.in_bounds(x, y) ? magnitude(x, y) : 0.0; };
    RealGrid thin(w, h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = magnitude(x, y);
            if (m < low || m == 0.0) continue;
            const int k = sector(x, y);
            const double ahead = mag_at(x + kDx[k], y + kDy[k]);
            const double behind = mag_at(x - kDx[k], y - kDy[k]);
            const double tol = kPlateauTolerance * m;
            if (m - behind > tol && m - ahead >= -tol) thin(x, y) = m;
        }
    }

    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (thin(x, y) >= high && !edges(x, y)) {
                edges(x, y) = 1;
                stack.emplace_back(x, y);
            }
        }
    }
    while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
            const int nx = x + kDx[k];
            const int ny = y + kDy[k];
            if (!edges.in_bounds(nx, ny) || edges(nx, ny)) continue;
            if (thin(nx, ny) >= low && thin(nx, ny) > 0.0) {
                edges(nx, ny) = 1;
                stack.emplace_back(nx, ny);
            }
        }
    }
    return edges;
}

std::vector<EdgePoint> class_boundary_points(const ClassGrid& mask, const std::vector<std::uint8_t>& classes) {
    const auto member = [&](std::uint8_t c) { return std::find(classes.begin(), classes.end(), c) != classes.end(); };
    int x0 = mask.width();
    int y0 = mask.height();
    int x1 = -1;
    int y1 = -1;
    std::size_t members = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!member(mask(x, y))) continue;
            ++members;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    std::vector<EdgePoint> points;
    if (members == 0 || members == mask.size()) return points;

    // Beyond smoothing + gradient support from the region the indicator is
    // constant, so edges computed on this window equal full-frame edges.
    constexpr int kPad = 6;
    x0 = std::max(0, x0 - kPad);
    y0 = std::max(0, y0 - kPad);
    x1 = std::min(mask.width() - 1, x1 + kPad);
    y1 = std::min(mask.height() - 1, y1 + kPad);
    const int w = x1 - x0 + 1;
    const int h = y1 - y0 + 1;
    RealGrid indicator(w, h, 0.0);
    RealGrid complement(w, h, 255.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (member(mask(x + x0, y + y0))) {
                indicator(x, y) = 255.0;
                complement(x, y) = 0.0;
            }
        }
    }

    const BinaryGrid from_indicator = canny(indicator, kMaskCannyLow, kMaskCannyHigh);
    const BinaryGrid from_complement = canny(complement, kMaskCannyLow, kMaskCannyHigh);
    const auto inside = [&](int x, int y) { return indicator(x, y) > 0.0; };

    std::set<std::pair<int, int>> emitted;  // doubled coordinates of midpoints
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!from_indicator(x, y) && !from_complement(x, y)) continue;
            const bool side = inside(x, y);
            int gx = 0;
            int gy = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (indicator.in_bounds(x + dx, y + dy) && inside(x + dx, y + dy) != side) {
                        gx += dx;
                        gy += dy;
                    }
                }
            }
            int best_dx = 0;
            int best_dy = 0;
            int best_d2 = 3;
            int best_dot = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if ((dx == 0 && dy == 0) || !indicator.in_bounds(x + dx, y + dy)) continue;
                    if (inside(x + dx, y + dy) == side) continue;
                    const int d2 = dx * dx + dy * dy;
                    const int dot = dx * gx + dy * gy;
                    if (d2 < best_d2 || (d2 == best_d2 && dot > best_dot)) {
                        best_d2 = d2;
                        best_dot = dot;
                        best_dx = dx;
                        best_dy = dy;
                    }
                }
            }
            const int px = x + x0;
            const int py = y + y0;
            const std::pair<int, int> key{2 * px + best_dx, 2 * py + best_dy};
            if (!emitted.insert(key).second) continue;
            points.push_back({0.5 * key.first, 0.5 * key.second, BoundaryKind::other});
        }
    }
    return points;
}

std::vector<EdgePoint> class_boundary_points(const ClassGrid& mask, std::initializer_list<std::uint8_t> classes) {
    return class_boundary_points(mask, std::vector<std::uint8_t>(classes));
}

std::vector<EdgePoint> class_boundary_points(const ClassGrid& mask, std::uint8_t class_id) {
    return class_boundary_points(mask, std::vector<std::uint8_t>{class_id});
}

std::vector<EdgePoint> filter_neighbor_condition(const std::vector<EdgePoint>& points, const ClassGrid& mask,
                                                 BoundaryKind kind) {
    if (kind == BoundaryKind::other) throw std::invalid_argument("neighbor condition needs pupil_iris or limbus");
    const auto forbidden = [kind](std::uint8_t c) {
        if (c == partseg::kBackground) return true;
        return kind == BoundaryKind::pupil_iris ? c == partseg::kSclera : c == partseg::kPupil;
    };
    std::vector<EdgePoint> kept;
    kept.reserve(points.size());
    for (const EdgePoint& p : points) {
        const int rx = static_cast<int>(std::lround(p.x));
        const int ry = static_cast<int>(std::lround(p.y));
        bool ok = true;
        for (int dy = -1; dy <= 1 && ok; ++dy) {
            for (int dx = -1; dx <= 1 && ok; ++dx) {
                if (mask.in_bounds(rx + dx, ry + dy) && forbidden(mask(rx + dx, ry + dy))) ok = false;
            }
        }
        if (ok) kept.push_back({p.x, p.y, kind});
    }
    return kept;
}

}  // namespace ellseg
