#include <ellseg/soft_centers.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellseg {

bool ProbMaps::is_valid() const noexcept {
    for (const RealGrid& c : channels) {
        if (!c.same_shape(channels[0]) || c.empty()) return false;
        for (double v : c.data()) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

RealGrid spatial_softmax(const RealGrid& field, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("temperature beta must be positive");
    if (field.empty()) throw std::invalid_argument("spatial_softmax on an empty field");
    const double peak = *std::max_element(field.data().begin(), field.data().end());
    RealGrid p(field.width(), field.height());
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        p[i] = std::exp(beta * (field[i] - peak));
        sum += p[i];
    }
    for (double& v : p.data()) v /= sum;
    return p;
}

Point soft_center(const RealGrid& field, double beta) {
    const RealGrid p = spatial_softmax(field, beta);
    double xc = 0.0;
    double yc = 0.0;
    for (int y = 0; y < p.height(); ++y) {
        for (int x = 0; x < p.width(); ++x) {
            xc += p(x, y) * x;
            yc += p(x, y) * y;
        }
    }
    xc = std::clamp(xc, 0.0, static_cast<double>(p.width() - 1));
    yc = std::clamp(yc, 0.0, static_cast<double>(p.height() - 1));
    return {xc, yc};
}

EllSegCenters ellseg_centers(const ProbMaps& maps, double beta) {
    RealGrid negated = maps.background();
    for (double& v : negated.data()) v = -v;
    return {soft_center(maps.pupil(), beta), soft_center(negated, beta)};
}

CenterGradient grad_soft_center(const RealGrid& field, double beta) {
    const RealGrid p = spatial_softmax(field, beta);
    const Point c = soft_center(field, beta);
    CenterGradient g{RealGrid(p.width(), p.height()), RealGrid(p.width(), p.height())};
    for (int y = 0; y < p.height(); ++y) {
        for (int x = 0; x < p.width(); ++x) {
            g.d_x(x, y) = beta * p(x, y) * (x - c.x);
            g.d_y(x, y) = beta * p(x, y) * (y - c.y);
        }
    }
    return g;
}

}  // namespace ellseg
