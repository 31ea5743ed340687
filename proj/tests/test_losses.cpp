#include <ellseg/losses.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ellseg;

namespace {

double max_grad_error(const ProbMaps& analytic, const std::function<double(const ProbMaps&)>& f, const ProbMaps& at) {
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& g = analytic.channels[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < g.size(); ++i) {
            worst = std::max(worst, oracle::relative_error(g[i], oracle::central_difference(f, at, c, i)));
        }
    }
    return worst;
}

}  // namespace

TEST(CrossEntropy, EqualLogitsGiveLn3) {
    const ProbMaps z(6, 4, 0.7);
    const CrossEntropy ce = cross_entropy(z, ClassGrid(6, 4, 1));
    EXPECT_NEAR(ce.mean, std::log(3.0), 1e-12);
    for (double v : ce.per_pixel.data()) EXPECT_NEAR(v, std::log(3.0), 1e-12);
}

TEST(CrossEntropy, ConfidentTrueClassGoesToZero) {
    ProbMaps z(3, 3, 0.0);
    for (double& v : z.pupil().data()) v = 800.0;
    EXPECT_NEAR(cross_entropy(z, ClassGrid(3, 3, 2)).mean, 0.0, 1e-12);
}

TEST(CrossEntropy, MatchesBruteForce) {
    std::mt19937_64 rng(1);
    const auto z = oracle::random_maps(8, 8, rng, 2.0);
    const auto labels = oracle::random_labels(8, 8, 3, rng);
    const CrossEntropy ce = cross_entropy(z, labels);
    EXPECT_NEAR(ce.mean, oracle::cross_entropy_mean(z, labels), 1e-9);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        EXPECT_NEAR(ce.per_pixel[i], -std::log(oracle::softmax_prob(z, labels[i], i)), 1e-9);
        EXPECT_GE(ce.per_pixel[i], 0.0);
    }
}

TEST(CrossEntropy, ShapeMismatch) {
    EXPECT_THROW(cross_entropy(ProbMaps(4, 4), ClassGrid(4, 5)), ShapeMismatch);
}

TEST(ClassSoftmax, IsPerPixelDistribution) {
    std::mt19937_64 rng(2);
    const ProbMaps p = class_softmax(oracle::random_maps(5, 5, rng, 50.0));
    for (std::size_t i = 0; i < p.pupil().size(); ++i) {
        EXPECT_NEAR(p.channels[0][i] + p.channels[1][i] + p.channels[2][i], 1.0, 1e-12);
    }
}

TEST(BoundaryWeight, UniformAndHalfPlanes) {
    const BinaryGrid zero = boundary_weight_map(ClassGrid(6, 6, 1));
    for (auto v : zero.data()) EXPECT_EQ(v, 0);
    ClassGrid halves(6, 6, 0);
    for (int y = 0; y < 6; ++y) {
        for (int x = 3; x < 6; ++x) halves(x, y) = 1;
    }
    const BinaryGrid b = boundary_weight_map(halves);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 6; ++x) EXPECT_EQ(b(x, y), (x == 2 || x == 3) ? 1 : 0) << x << "," << y;
    }
}

TEST(BoundaryWeight, DiskRing) {
    ClassGrid disk(40, 40, 0);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) disk(x, y) = std::hypot(x - 20, y - 20) <= 10 ? 1 : 0;
    }
    const BinaryGrid b = boundary_weight_map(disk);
    const auto n = std::count(b.data().begin(), b.data().end(), 1);
    // two one-pixel rings straddling a circle of circumference ~63
    EXPECT_GT(n, 2 * 2 * kPi * 10 * 0.8);
    EXPECT_LT(n, 2 * 2 * kPi * 10 * 1.6);
}

TEST(GeneralizedDice, PerfectAndDisjoint) {
    ClassGrid labels(4, 4, 0);
    labels(1, 1) = 1;
    labels(2, 2) = 2;
    ProbMaps perfect(4, 4, 0.0);
    ProbMaps wrong(4, 4, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        perfect.channels[labels[i]][i] = 1.0;
        wrong.channels[(labels[i] + 1) % 3][i] = 1.0;
    }
    EXPECT_NEAR(generalized_dice(perfect, labels), 0.0, 1e-12);
    EXPECT_NEAR(generalized_dice(wrong, labels), 1.0, 1e-12);
}

TEST(GeneralizedDice, MatchesFormulaAndRange) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        const ProbMaps p = class_softmax(oracle::random_maps(8, 8, rng, 2.0));
        const auto labels = oracle::random_labels(8, 8, 3, rng);
        const double v = generalized_dice(p, labels);
        EXPECT_NEAR(v, oracle::generalized_dice(p, labels), 1e-9);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0 + 1e-12);
    }
}

TEST(GeneralizedDice, AbsentClassDropped) {
    std::mt19937_64 rng(4);
    const ProbMaps p = class_softmax(oracle::random_maps(8, 8, rng));
    ClassGrid labels(8, 8, 0);
    labels(3, 3) = 1;
    EXPECT_NEAR(generalized_dice(p, labels), oracle::generalized_dice(p, labels), 1e-12);
    EXPECT_TRUE(std::isfinite(generalized_dice(p, labels)));
}

TEST(SignedDistance, MatchesBruteForce) {
    std::mt19937_64 rng(5);
    const ClassGrid labels = oracle::blob_labels(14, 11, rng);
    const SignedDistanceField sdf = signed_distance_fields(labels);
    for (int k = 0; k < 3; ++k) {
        const RealGrid want = oracle::brute_signed_distance(labels, k);
        for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_NEAR(sdf[static_cast<std::size_t>(k)][i], want[i], 1e-9);
    }
}

TEST(SurfaceLoss, SignConventionAndMonotonicity) {
    ClassGrid labels(10, 10, 0);
    for (int y = 2; y < 8; ++y) {
        for (int x = 2; x < 8; ++x) labels(x, y) = 1;
    }
    const SignedDistanceField sdf = signed_distance_fields(labels);
    ProbMaps inside(10, 10, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) inside.channels[labels[i]][i] = 1.0;
    const double base = surface_loss(inside, sdf);
    EXPECT_LT(base, 0.0);
    ProbMaps moved = inside;
    moved.channels[1](0, 0) = 1.0;
    moved.channels[0](0, 0) = 0.0;
    EXPECT_GT(surface_loss(moved, sdf), base);
}

TEST(SurfaceLoss, MatchesBruteForceSum) {
    std::mt19937_64 rng(6);
    const ClassGrid labels = oracle::blob_labels(8, 8, rng);
    const ProbMaps p = class_softmax(oracle::random_maps(8, 8, rng));
    double want = 0.0;
    for (int k = 0; k < 3; ++k) {
        const RealGrid phi = oracle::brute_signed_distance(labels, k);
        for (std::size_t i = 0; i < labels.size(); ++i) want += p.channels[static_cast<std::size_t>(k)][i] * phi[i];
    }
    want /= 3.0 * labels.size();
    EXPECT_NEAR(surface_loss(p, signed_distance_fields(labels)), want, 1e-9);
}

TEST(LossWeights, Schedule) {
    const LossWeights start = LossWeights::schedule(0, 40);
    EXPECT_EQ(start.lambda1, 1.0);
    EXPECT_EQ(start.lambda2, 20.0);
    EXPECT_EQ(start.lambda3, 1.0);
    EXPECT_EQ(start.lambda4, 0.0);
    const LossWeights end = LossWeights::schedule(40, 40);
    EXPECT_EQ(end.lambda3, 0.0);
    EXPECT_EQ(end.lambda4, 1.0);
    EXPECT_DOUBLE_EQ(LossWeights::schedule(10, 40).lambda4, 0.25);
    EXPECT_THROW(LossWeights::schedule(41, 40), std::invalid_argument);
    EXPECT_THROW(LossWeights::schedule(-1, 40), std::invalid_argument);
}

TEST(SegLoss, CompositionOfComponents) {
    std::mt19937_64 rng(7);
    const auto z = oracle::random_maps(16, 12, rng, 2.0);
    const ClassGrid labels = oracle::blob_labels(16, 12, rng);
    for (int epoch : {0, 3, 10}) {
        const LossWeights w = LossWeights::schedule(epoch, 10);
        const CrossEntropy ce = cross_entropy(z, labels);
        const BinaryGrid b = boundary_weight_map(labels);
        double weighted = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i) weighted += ce.per_pixel[i] * (w.lambda1 + w.lambda2 * b[i]);
        weighted /= labels.size();
        const ProbMaps p = class_softmax(z);
        const double expected =
            weighted + w.lambda3 * generalized_dice(p, labels) + w.lambda4 * surface_loss(p, signed_distance_fields(labels));
        EXPECT_NEAR(seg_loss(z, labels, epoch, 10), expected, 1e-12);
        const SegLossBreakdown br = seg_loss_breakdown(z, labels, w);
        EXPECT_NEAR(br.total, expected, 1e-12);
    }
}

TEST(SegLoss, ReducesToCrossEntropyPlusDice) {
    std::mt19937_64 rng(8);
    const auto z = oracle::random_maps(16, 12, rng);
    const ClassGrid labels = oracle::blob_labels(16, 12, rng);
    LossWeights w;
    w.lambda2 = 0.0;
    const double want = oracle::cross_entropy_mean(z, labels) + oracle::generalized_dice(class_softmax(z), labels);
    EXPECT_NEAR(seg_loss(z, labels, w), want, 1e-12);
}

TEST(ComLoss, ZeroCases) {
    RealGrid peak(32, 24, 0.0);
    peak(10, 7) = 100.0;
    ProbMaps m(32, 24);
    m.pupil() = peak;
    EXPECT_NEAR(com_loss(m, {10, 7}, std::nullopt), 0.0, 1e-9);
    EXPECT_NEAR(com_loss(ProbMaps(32, 24), {15.5, 11.5}, Point{15.5, 11.5}), 0.0, 1e-12);
}

TEST(ComLoss, OffsetBump) {
    ProbMaps m(40, 30);
    for (int y = 0; y < 30; ++y) {
        for (int x = 0; x < 40; ++x) m.pupil()(x, y) = 10.0 * std::exp(-((x - 20.0) * (x - 20.0) + (y - 14.0) * (y - 14.0)) / 8.0);
    }
    // predicted (20, 14) vs ground truth (18, 15): offset (2, -1)
    EXPECT_NEAR(com_loss(m, {18, 15}, std::nullopt), 3.0, 1e-6);
}

TEST(ComLoss, InvariantToChannelOffsets) {
    std::mt19937_64 rng(9);
    auto m = oracle::random_maps(16, 12, rng, 2.0);
    const double base = com_loss(m, {4.2, 6.1}, Point{9.3, 2.2});
    for (auto& c : m.channels) {
        for (double& v : c.data()) v += 17.0;
    }
    EXPECT_NEAR(com_loss(m, {4.2, 6.1}, Point{9.3, 2.2}), base, 1e-12);
}

TEST(Gradients, CrossEntropy) {
    std::mt19937_64 rng(11);
    const auto z = oracle::random_maps(16, 12, rng);
    const auto labels = oracle::random_labels(16, 12, 3, rng);
    EXPECT_LE(max_grad_error(grad_cross_entropy(z, labels), [&](const ProbMaps& q) { return cross_entropy(q, labels).mean; }, z),
              1e-3);
}

TEST(Gradients, GeneralizedDice) {
    std::mt19937_64 rng(12);
    const auto z = oracle::random_maps(16, 12, rng);
    const auto labels = oracle::blob_labels(16, 12, rng);
    EXPECT_LE(max_grad_error(grad_generalized_dice(z, labels),
                             [&](const ProbMaps& q) { return generalized_dice(class_softmax(q), labels); }, z),
              1e-3);
}

TEST(Gradients, SegLoss) {
    std::mt19937_64 rng(13);
    const auto z = oracle::random_maps(16, 12, rng);
    const auto labels = oracle::blob_labels(16, 12, rng);
    const LossWeights w = LossWeights::schedule(3, 8);
    EXPECT_LE(max_grad_error(grad_seg_loss(z, labels, w), [&](const ProbMaps& q) { return seg_loss(q, labels, w); }, z), 1e-3);
}

TEST(Gradients, ComLoss) {
    std::mt19937_64 rng(14);
    const auto m = oracle::random_maps(16, 12, rng);
    const Point gp{3.1, 9.7};
    const Point gi{12.4, 1.6};
    EXPECT_LE(max_grad_error(grad_com_loss(m, gp, gi), [&](const ProbMaps& q) { return com_loss(q, gp, gi); }, m), 1e-3);
    const ProbMaps pupil_only = grad_com_loss(m, gp, std::nullopt);
    for (double v : pupil_only.background().data()) EXPECT_EQ(v, 0.0);
}
