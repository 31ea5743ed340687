#pragma once

#include <ellseg/grid.hpp>

#include <array>

namespace ellseg {

inline constexpr double kDefaultBeta = 4.0;

/// Decoder activations, one channel per EllSeg class (background, iris, pupil).
struct ProbMaps {
    std::array<RealGrid, 3> channels;

    ProbMaps() = default;
    ProbMaps(int width, int height, double fill = 0.0)
        : channels{RealGrid(width, height, fill), RealGrid(width, height, fill), RealGrid(width, height, fill)} {}

    [[nodiscard]] int width() const noexcept { return channels[0].width(); }
    [[nodiscard]] int height() const noexcept { return channels[0].height(); }

    RealGrid& background() noexcept { return channels[0]; }
    RealGrid& iris() noexcept { return channels[1]; }
    RealGrid& pupil() noexcept { return channels[2]; }
    [[nodiscard]] const RealGrid& background() const noexcept { return channels[0]; }
    [[nodiscard]] const RealGrid& iris() const noexcept { return channels[1]; }
    [[nodiscard]] const RealGrid& pupil() const noexcept { return channels[2]; }

    /// Equal shapes and finite values.
    [[nodiscard]] bool is_valid() const noexcept;
};

/// exp(beta * O) / sum(exp(beta * O)) over every pixel, max-subtracted.
RealGrid spatial_softmax(const RealGrid& field, double beta = kDefaultBeta);

/// Expected pixel coordinate under the spatial softmax of `field`.
Point soft_center(const RealGrid& field, double beta = kDefaultBeta);

struct EllSegCenters {
    Point pupil;
    Point iris;
};

/// Pupil center from the pupil channel; iris center from the negated
/// background channel.
EllSegCenters ellseg_centers(const ProbMaps& maps, double beta = kDefaultBeta);

struct CenterGradient {
    RealGrid d_x;  ///< d(x_c)/dO per pixel
    RealGrid d_y;  ///< d(y_c)/dO per pixel
};

/// Analytic gradient of soft_center: beta * p * (coord - center).
CenterGradient grad_soft_center(const RealGrid& field, double beta = kDefaultBeta);

}  // namespace ellseg
