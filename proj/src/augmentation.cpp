#include <ellseg/augmentation.hpp>

#include <ellseg/image_ops.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace ellseg::augment {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<double, 4> kGammas{0.6, 0.8, 1.2, 1.4};

std::uint8_t clamp_level(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Sample flip(const Sample& in) {
    Sample out = in;
    const int w = in.image.width();
    for (int y = 0; y < in.image.height(); ++y) {
        for (int x = 0; x < w; ++x) {
            out.image(x, y) = in.image(w - 1 - x, y);
            out.mask(x, y) = in.mask(w - 1 - x, y);
        }
    }
    for (Point& p : out.centers) p.x = (w - 1) - p.x;
    return out;
}

Sample rotate(const Sample& in, double degrees) {
    Sample out = in;
    const double phi = deg_to_rad(degrees);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double ox = 0.5 * (in.image.width() - 1);
    const double oy = 0.5 * (in.image.height() - 1);
    const RealGrid src = to_real(in.image);
    for (int y = 0; y < in.image.height(); ++y) {
        for (int x = 0; x < in.image.width(); ++x) {
            const double dx = x - ox;
            const double dy = y - oy;
            const double sx = c * dx + s * dy + ox;
            const double sy = -s * dx + c * dy + oy;
            out.image(x, y) = clamp_level(sample_bilinear(src, sx, sy, 0.0));
            const int nx = static_cast<int>(std::lround(sx));
            const int ny = static_cast<int>(std::lround(sy));
            out.mask(x, y) = in.mask.in_bounds(nx, ny) ? in.mask(nx, ny) : 0;
        }
    }
    for (Point& p : out.centers) {
        const double dx = p.x - ox;
        const double dy = p.y - oy;
        p = {c * dx - s * dy + ox, s * dx + c * dy + oy};
    }
    return out;
}

template <typename F>
Sample map_intensity(const Sample& in, F&& f) {
    Sample out = in;
    for (std::size_t i = 0; i < out.image.size(); ++i) out.image[i] = clamp_level(f(static_cast<double>(in.image[i])));
    return out;
}

}  // namespace

std::string name(const Choice& choice) {
    return std::visit(Overloaded{
                          [](const Flip&) { return std::string("flip"); },
                          [](const Rotate&) { return std::string("rotate"); },
                          [](const Blur&) { return std::string("blur"); },
                          [](const Gamma&) { return std::string("gamma"); },
                          [](const Exposure&) { return std::string("exposure"); },
                          [](const Noise&) { return std::string("noise"); },
                          [](const LineMask&) { return std::string("line_mask"); },
                          [](const None&) { return std::string("none"); },
                      },
                      choice);
}

Choice sample_choice(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> variant(0, static_cast<int>(kVariantCount) - 1);
    switch (variant(rng)) {
        case 0: return Flip{};
        case 1: return Rotate{std::uniform_real_distribution<double>(-kMaxRotationDeg, kMaxRotationDeg)(rng)};
        case 2: return Blur{std::uniform_real_distribution<double>(2.0, 7.0)(rng)};
        case 3: return Gamma{kGammas[std::uniform_int_distribution<std::size_t>(0, kGammas.size() - 1)(rng)]};
        case 4: return Exposure{static_cast<double>(std::uniform_int_distribution<int>(-25, 25)(rng))};
        case 5: return Noise{std::uniform_real_distribution<double>(2.0, 16.0)(rng)};
        case 6: {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double angle = unit(rng) * kPi;
            const double u = unit(rng);
            const double v = unit(rng);
            return LineMask{angle, u, v};
        }
        default: return None{};
    }
}

Sample apply(const Sample& input, const Choice& choice, std::mt19937_64& rng) {
    if (!input.image.same_shape(input.mask)) throw std::invalid_argument("augment: image and mask differ in shape");
    return std::visit(
        Overloaded{
            [&](const Flip&) { return flip(input); },
            [&](const Rotate& r) { return rotate(input, r.degrees); },
            [&](const Blur& b) {
                Sample out = input;
                out.image = to_gray(gaussian_blur(to_real(input.image), b.sigma));
                return out;
            },
            [&](const Gamma& g) {
                return map_intensity(input, [&](double v) { return 255.0 * std::pow(v / 255.0, g.gamma); });
            },
            [&](const Exposure& e) { return map_intensity(input, [&](double v) { return v + e.offset; }); },
            [&](const Noise& n) {
                std::normal_distribution<double> noise(0.0, n.sigma);
                return map_intensity(input, [&](double v) { return v + noise(rng); });
            },
            [&](const LineMask& l) {
                Sample out = input;
                const double px = l.u * (input.image.width() - 1);
                const double py = l.v * (input.image.height() - 1);
                const double nx = -std::sin(l.angle);
                const double ny = std::cos(l.angle);
                for (int y = 0; y < out.image.height(); ++y) {
                    for (int x = 0; x < out.image.width(); ++x) {
                        if (std::abs((x - px) * nx + (y - py) * ny) < 0.5 * kLineThickness) out.image(x, y) = 0;
                    }
                }
                return out;
            },
            [&](const None&) { return input; },
        },
        choice);
}

}  // namespace ellseg::augment
