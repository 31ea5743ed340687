#include <ellseg/image_ops.hpp>

#include <algorithm>
#include <cmath>

namespace ellseg {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        taps[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : taps) w /= sum;
    return taps;
}

RealGrid gaussian_blur(const RealGrid& src, double sigma) {
    if (sigma <= 0.0 || src.empty()) return src;
    const std::vector<double> taps = gaussian_kernel(sigma);
    const int radius = static_cast<int>(taps.size() / 2);
    const int w = src.width();
    const int h = src.height();

    RealGrid tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += taps[static_cast<std::size_t>(k + radius)] * src.clamped(x + k, y);
            tmp(x, y) = acc;
        }
    }
    RealGrid out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += taps[static_cast<std::size_t>(k + radius)] * tmp.clamped(x, y + k);
            out(x, y) = acc;
        }
    }
    return out;
}

RealGrid to_real(const Grid<std::uint8_t>& src) {
    RealGrid out(src.width(), src.height());
    for (std::size_t i = 0; i < src.size(); ++i) out[i] = src[i];
    return out;
}

GrayImage to_gray(const RealGrid& src) {
    GrayImage out(src.width(), src.height());
    for (std::size_t i = 0; i < src.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(src[i]), 0L, 255L));
    }
    return out;
}

double sample_bilinear(const RealGrid& src, double x, double y, double outside) noexcept {
    if (src.empty() || x < 0.0 || y < 0.0 || x > src.width() - 1 || y > src.height() - 1) return outside;
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = src.clamped(x0, y0);
    const double v10 = src.clamped(x0 + 1, y0);
    const double v01 = src.clamped(x0, y0 + 1);
    const double v11 = src.clamped(x0 + 1, y0 + 1);
    return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
}

}  // namespace ellseg
