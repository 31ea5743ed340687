#include <ellseg/geometry.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace ellseg;

TEST(Contains, CircleCenterAndOutside) {
    const Ellipse unit = make_ellipse(0, 0, 1, 1, 0);
    EXPECT_TRUE(contains(unit, {0, 0}));
    EXPECT_FALSE(contains(unit, {2, 0}));
}

TEST(Contains, HandEvaluatedQuadraticForm) {
    const Ellipse e = make_ellipse(0, 0, 2, 1, 0);
    // (1.9/2)^2 = 0.9025 and (1.9/1)^2 = 3.61
    EXPECT_TRUE(contains(e, {1.9, 0}));
    EXPECT_FALSE(contains(e, {0, 1.9}));
    EXPECT_NEAR(quadratic_form(e, {1.9, 0}), 0.9025, 1e-12);
    EXPECT_NEAR(quadratic_form(e, {0, 1.9}), 3.61, 1e-12);
}

TEST(Contains, InvariantUnderHalfTurn) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 200; ++i) {
        const Ellipse e{u(rng), u(rng), 4.0, 2.0, 0.7};
        const Ellipse flipped{e.cx, e.cy, e.a, e.b, e.theta + kPi};
        const Point p{u(rng), u(rng)};
        EXPECT_EQ(contains(e, p), contains(flipped, p));
    }
}

TEST(MakeEllipse, CanonicalForm) {
    const Ellipse e = make_ellipse(1, 2, 2, 5, 0.3);
    EXPECT_DOUBLE_EQ(e.a, 5);
    EXPECT_DOUBLE_EQ(e.b, 2);
    EXPECT_NEAR(e.theta, 0.3 + kPi / 2, 1e-12);
    EXPECT_DOUBLE_EQ(make_ellipse(0, 0, 3, 3, 1.2).theta, 0.0);
    EXPECT_NEAR(make_ellipse(0, 0, 3, 1, -0.5).theta, kPi - 0.5, 1e-12);
    EXPECT_THROW(make_ellipse(0, 0, 0, 1, 0), std::invalid_argument);
    EXPECT_THROW(make_ellipse(0, 0, 1, -1, 0), std::invalid_argument);
    EXPECT_THROW(make_ellipse(NAN, 0, 1, 1, 0), std::invalid_argument);
}

TEST(Rasterize, SmallCircleIsAPlus) {
    const BinaryGrid g = rasterize(make_ellipse(2, 2, 1, 1, 0), 5, 5);
    std::set<std::pair<int, int>> set;
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) {
            if (g(x, y)) set.insert({x, y});
        }
    }
    const std::set<std::pair<int, int>> expected{{2, 2}, {1, 2}, {3, 2}, {2, 1}, {2, 3}};
    EXPECT_EQ(set, expected);
}

TEST(Rasterize, MatchesBruteForceEnumeration) {
    const Ellipse e = make_ellipse(10.3, 7.8, 6.5, 3.2, 0.9);
    const BinaryGrid g = rasterize(e, 24, 18);
    for (int y = 0; y < 18; ++y) {
        for (int x = 0; x < 24; ++x) {
            const double dx = x - e.cx, dy = y - e.cy;
            const double u = (dx * std::cos(e.theta) + dy * std::sin(e.theta)) / e.a;
            const double v = (-dx * std::sin(e.theta) + dy * std::cos(e.theta)) / e.b;
            EXPECT_EQ(g(x, y) != 0, u * u + v * v <= 1.0) << x << "," << y;
        }
    }
}

TEST(Rasterize, OutsideAndCovering) {
    const BinaryGrid empty = rasterize(make_ellipse(-50, -50, 3, 2, 0), 10, 8);
    for (auto v : empty.data()) EXPECT_EQ(v, 0);
    const BinaryGrid full = rasterize(make_ellipse(5, 4, 100, 90, 0.2), 10, 8);
    for (auto v : full.data()) EXPECT_EQ(v, 1);
    EXPECT_THROW(rasterize(make_ellipse(0, 0, 1, 1, 0), 0, 5), std::invalid_argument);
}

TEST(Rasterize, MonotoneInAxes) {
    const Ellipse small = make_ellipse(20, 15, 8, 5, 0.4);
    const Ellipse large = make_ellipse(20, 15, 9.5, 5.5, 0.4);
    const BinaryGrid a = rasterize(small, 40, 30);
    const BinaryGrid b = rasterize(large, 40, 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) { EXPECT_TRUE(b[i]); }
    }
}

TEST(BoundingBox, Examples) {
    const BBox circle = bounding_box(make_ellipse(0, 0, 3, 3, 0));
    EXPECT_DOUBLE_EQ(circle.xmin, -3);
    EXPECT_DOUBLE_EQ(circle.ymax, 3);
    const BBox upright = bounding_box(make_ellipse(0, 0, 2, 1, kPi / 2));
    EXPECT_NEAR(upright.xmin, -1, 1e-12);
    EXPECT_NEAR(upright.xmax, 1, 1e-12);
    EXPECT_NEAR(upright.ymin, -2, 1e-12);
    EXPECT_NEAR(upright.ymax, 2, 1e-12);
    const BBox diag = bounding_box(make_ellipse(0, 0, 2, 1, kPi / 4));
    EXPECT_NEAR(diag.xmax, std::sqrt(2.5), 1e-12);
    EXPECT_NEAR(diag.ymax, std::sqrt(2.5), 1e-12);
}

TEST(BoundingBox, SelfIouAndHalfTurn) {
    const Ellipse e{3, 4, 5, 2, 0.3};
    EXPECT_EQ(box_iou(bounding_box(e), bounding_box(e)), 1.0);
    const BBox a = bounding_box(e);
    const BBox b = bounding_box(Ellipse{3, 4, 5, 2, 0.3 + kPi});
    EXPECT_NEAR(a.xmin, b.xmin, 1e-12);
    EXPECT_NEAR(a.ymin, b.ymin, 1e-12);
    EXPECT_NEAR(a.xmax, b.xmax, 1e-12);
    EXPECT_NEAR(a.ymax, b.ymax, 1e-12);
}

TEST(BoundingBox, ContainsSampledBoundary) {
    const Ellipse e = make_ellipse(-2, 7, 9, 4, 2.2);
    const BBox box = bounding_box(e);
    for (int i = 0; i < 3600; ++i) {
        const Point p = boundary_point(e, 2 * kPi * i / 3600.0);
        EXPECT_GE(p.x, box.xmin - 1e-9);
        EXPECT_LE(p.x, box.xmax + 1e-9);
        EXPECT_GE(p.y, box.ymin - 1e-9);
        EXPECT_LE(p.y, box.ymax + 1e-9);
    }
}

TEST(SampleBoundary, Preconditions) {
    std::mt19937_64 rng(1);
    EXPECT_THROW(sample_boundary(make_ellipse(0, 0, 1, 1, 0), 4, 0.0, rng), std::invalid_argument);
}

TEST(SampleBoundary, ExactPointsOnUnitCircle) {
    std::mt19937_64 rng(1);
    const auto pts = sample_boundary(make_ellipse(0, 0, 1, 1, 0), 8, 0.0, rng);
    ASSERT_EQ(pts.size(), 8u);
    for (Point p : pts) EXPECT_NEAR(std::hypot(p.x, p.y), 1.0, 1e-12);
}

TEST(SampleBoundary, ExactPointsSatisfyQuadraticForm) {
    std::mt19937_64 rng(1);
    const Ellipse e = make_ellipse(3, 4, 5, 2, 0.3);
    for (Point p : sample_boundary(e, 100, 0.0, rng)) EXPECT_NEAR(quadratic_form(e, p), 1.0, 1e-12);
}

TEST(SampleBoundary, NoiseIsSeededAndRadial) {
    const Ellipse e = make_ellipse(0, 0, 10, 10, 0);
    std::mt19937_64 r1(9), r2(9);
    const auto a = sample_boundary(e, 500, 0.5, r1);
    const auto b = sample_boundary(e, 500, 0.5, r2);
    EXPECT_EQ(a, b);
    double sum = 0, sum2 = 0;
    for (Point p : a) {
        const double d = std::hypot(p.x, p.y) - 10.0;
        sum += d;
        sum2 += d * d;
    }
    EXPECT_NEAR(sum / 500, 0.0, 0.1);
    EXPECT_NEAR(std::sqrt(sum2 / 500), 0.5, 0.1);
}
