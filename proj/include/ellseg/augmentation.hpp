#pragma once

#include <ellseg/geometry.hpp>
#include <ellseg/grid.hpp>

#include <random>
#include <string>
#include <variant>
#include <vector>

namespace ellseg::augment {

struct Flip {};
struct Rotate {
    double degrees = 0.0;  ///< [-30, 30]
};
struct Blur {
    double sigma = 2.0;  ///< [2, 7]
};
struct Gamma {
    double gamma = 1.0;  ///< one of 0.6, 0.8, 1.2, 1.4
};
struct Exposure {
    double offset = 0.0;  ///< integer levels in [-25, 25]
};
struct Noise {
    double sigma = 2.0;  ///< [2, 16]
};
/// 4 px thick line through the point (u, v) in normalized image coordinates.
struct LineMask {
    double angle = 0.0;  ///< radians, [0, pi)
    double u = 0.5;
    double v = 0.5;
};
struct None {};

using Choice = std::variant<Flip, Rotate, Blur, Gamma, Exposure, Noise, LineMask, None>;

inline constexpr std::size_t kVariantCount = std::variant_size_v<Choice>;
inline constexpr double kMaxRotationDeg = 30.0;
inline constexpr double kLineThickness = 4.0;

std::string name(const Choice& choice);

/// Draws one of the eight variants with equal probability, then its
/// parameters uniformly from their ranges.
Choice sample_choice(std::mt19937_64& rng);

struct Sample {
    GrayImage image;
    ClassGrid mask;
    std::vector<Point> centers;
};

/// Geometric variants move image, mask and centers together; photometric
/// variants and the line mask touch the image only. The rng is only consumed
/// by Noise.
Sample apply(const Sample& input, const Choice& choice, std::mt19937_64& rng);

}  // namespace ellseg::augment
