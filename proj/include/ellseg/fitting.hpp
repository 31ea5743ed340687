#pragma once

#include <ellseg/geometry.hpp>

#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellseg {

enum class FitErrorKind {
    fewer_than_five_points,
    insufficient_points,
    degenerate_configuration,
    non_elliptical_fit,
    no_consensus,
};

const char* to_string(FitErrorKind kind) noexcept;

class FitError : public std::runtime_error {
public:
    FitError(FitErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] FitErrorKind kind() const noexcept { return kind_; }

private:
    FitErrorKind kind_;
};

enum class FitMethod { lsq, ransac };

const char* to_string(FitMethod method) noexcept;

struct FitResult {
    Ellipse ellipse;
    int inlier_count = 0;
    double residual_rms = 0.0;
    FitMethod method = FitMethod::lsq;
};

/// Sampson (first-order geometric) distance of p from the ellipse boundary.
double sampson_distance(const Ellipse& e, Point p) noexcept;

/// Direct ellipse-specific least-squares fit on similarity-normalized
/// coordinates. Non-iterative; exact for noise-free points.
FitResult fit_ellipse_lsq(std::span<const Point> points);

struct RansacConfig {
    int iterations = 300;
    double inlier_tol = 1.0;
    /// Minimum consensus size; nullopt selects max(10, ceil(25% of points)).
    std::optional<int> min_inliers;

    [[nodiscard]] int resolved_min_inliers(std::size_t point_count) const noexcept;
};

/// RANSAC over 5-point samples scored by Sampson distance, followed by a
/// least-squares refit on the largest consensus set. Ties go to the lower
/// consensus RMS, then the earlier iteration.
FitResult fit_ellipse_ransac(std::span<const Point> points, const RansacConfig& config, std::mt19937_64& rng);

}  // namespace ellseg
