#pragma once

// Independent reference computations for the test suites. Deliberately
// naive: brute force, no shared code paths with the library beyond the
// plain data types.

#include <ellseg/grid.hpp>
#include <ellseg/soft_centers.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace oracle {

using ellseg::ClassGrid;
using ellseg::ProbMaps;
using ellseg::RealGrid;

inline ProbMaps random_maps(int w, int h, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    ProbMaps m(w, h);
    for (auto& c : m.channels) {
        for (auto& v : c.data()) v = n(rng);
    }
    return m;
}

inline ClassGrid random_labels(int w, int h, int classes, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(0, classes - 1);
    ClassGrid g(w, h);
    for (auto& v : g.data()) v = static_cast<std::uint8_t>(d(rng));
    return g;
}

/// Labels with spatially coherent regions (a disk and a smaller disk).
inline ClassGrid blob_labels(int w, int h, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cx = 3 + u(rng) * (w - 6), cy = 3 + u(rng) * (h - 6);
    const double r1 = 3 + 2 * u(rng), r2 = 1 + 1.5 * u(rng);
    ClassGrid g(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            g(x, y) = d <= r2 ? 2 : (d <= r1 ? 1 : 0);
        }
    }
    return g;
}

inline double softmax_prob(const ProbMaps& z, int k, std::size_t i) {
    double denom = 0.0;
    for (int c = 0; c < 3; ++c) denom += std::exp(z.channels[static_cast<std::size_t>(c)][i]);
    return std::exp(z.channels[static_cast<std::size_t>(k)][i]) / denom;
}

inline double cross_entropy_mean(const ProbMaps& z, const ClassGrid& labels) {
    double s = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) s += -std::log(softmax_prob(z, labels[i], i));
    return s / static_cast<double>(labels.size());
}

inline double generalized_dice(const ProbMaps& probs, const ClassGrid& labels) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 3; ++k) {
        double count = 0.0, inter = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const double g = labels[i] == k ? 1.0 : 0.0;
            const double p = probs.channels[static_cast<std::size_t>(k)][i];
            count += g;
            inter += p * g;
            sum += p + g;
        }
        if (count == 0.0) continue;
        const double w = 1.0 / (count * count);
        num += w * inter;
        den += w * sum;
    }
    return 1.0 - 2.0 * num / den;
}

/// Signed distance by exhaustive search over all pixels.
inline RealGrid brute_signed_distance(const ClassGrid& labels, int k) {
    const int w = labels.width(), h = labels.height();
    RealGrid out(w, h, 0.0);
    bool any_in = false, any_out = false;
    for (auto v : labels.data()) (v == k ? any_in : any_out) = true;
    if (!any_in || !any_out) return out;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool in = labels(x, y) == k;
            double best = std::numeric_limits<double>::infinity();
            for (int v = 0; v < h; ++v) {
                for (int u = 0; u < w; ++u) {
                    if ((labels(u, v) == k) != in) best = std::min(best, std::hypot(u - x, v - y));
                }
            }
            out(x, y) = in ? -best : best;
        }
    }
    return out;
}

inline ellseg::Point soft_center(const RealGrid& f, double beta) {
    double z = 0.0, sx = 0.0, sy = 0.0;
    double m = -std::numeric_limits<double>::infinity();
    for (double v : f.data()) m = std::max(m, v);
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            const double e = std::exp(beta * (f(x, y) - m));
            z += e;
            sx += e * x;
            sy += e * y;
        }
    }
    return {sx / z, sy / z};
}

/// Central difference of a scalar function of a grid at element i.
inline double central_difference(const std::function<double(const RealGrid&)>& f, RealGrid g, std::size_t i,
                                 double eps = 1e-4) {
    const double v = g[i];
    g[i] = v + eps;
    const double hi = f(g);
    g[i] = v - eps;
    const double lo = f(g);
    return (hi - lo) / (2.0 * eps);
}

inline double central_difference(const std::function<double(const ProbMaps&)>& f, ProbMaps m, int channel,
                                 std::size_t i, double eps = 1e-4) {
    auto& c = m.channels[static_cast<std::size_t>(channel)];
    const double v = c[i];
    c[i] = v + eps;
    const double hi = f(m);
    c[i] = v - eps;
    const double lo = f(m);
    return (hi - lo) / (2.0 * eps);
}

/// Relative error with a floor on the denominator so entries that are
/// essentially zero are compared absolutely.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

}  // namespace oracle
