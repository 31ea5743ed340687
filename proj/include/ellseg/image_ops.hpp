#pragma once

#include <ellseg/grid.hpp>

#include <vector>

namespace ellseg {

/// Normalized 1D Gaussian taps of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with replicated borders. sigma <= 0 returns a copy.
RealGrid gaussian_blur(const RealGrid& src, double sigma);

RealGrid to_real(const Grid<std::uint8_t>& src);

/// Rounds and clamps to [0, 255].
GrayImage to_gray(const RealGrid& src);

/// Bilinear sample with coordinates in pixel-center units; returns `outside`
/// for samples that fall off the grid.
double sample_bilinear(const RealGrid& src, double x, double y, double outside) noexcept;

}  // namespace ellseg
