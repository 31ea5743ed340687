#include <ellseg/distance_transform.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace ellseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over one line of
// squared distances.
void squared_edt_1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = 0.0;
        while (true) {
            const int p = v[k];
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p));
            if (s > z[k]) break;
            if (--k < 0) break;
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double diff = q - v[j];
        d[q] = diff * diff + f[v[j]];
    }
}

}  // namespace

RealGrid euclidean_distance(const BinaryGrid& seeds) {
    const int w = seeds.width();
    const int h = seeds.height();
    RealGrid sq(w, h, kInf);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i]) sq[i] = 0.0;
    }

    std::vector<double> f(static_cast<std::size_t>(h));
    std::vector<double> d(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = sq(x, y);
        squared_edt_1d(f, d);
        for (int y = 0; y < h; ++y) sq(x, y) = d[y];
    }
    f.resize(static_cast<std::size_t>(w));
    d.resize(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = sq(x, y);
        squared_edt_1d(f, d);
        for (int x = 0; x < w; ++x) sq(x, y) = d[x];
    }
    for (double& v : sq.data()) v = std::sqrt(v);
    return sq;
}

RealGrid signed_distance(const BinaryGrid& region) {
    std::size_t inside = 0;
    for (std::size_t i = 0; i < region.size(); ++i) inside += region[i] ? 1 : 0;
    RealGrid out(region.width(), region.height(), 0.0);
    if (inside == 0 || inside == region.size()) return out;

    BinaryGrid complement(region.width(), region.height());
    for (std::size_t i = 0; i < region.size(); ++i) complement[i] = region[i] ? 0 : 1;
    const RealGrid to_region = euclidean_distance(region);
    const RealGrid to_outside = euclidean_distance(complement);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_region[i] - to_outside[i];
    return out;
}

}  // namespace ellseg
