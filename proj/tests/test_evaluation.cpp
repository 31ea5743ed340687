#include <ellseg/evaluation.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace ellseg;

TEST(Iou, IdenticalGrids) {
    ClassGrid g(5, 5, 0);
    g(1, 1) = 1;
    g(2, 2) = 2;
    const IouResult r = iou(g, g, 3);
    for (const auto& c : r.per_class) EXPECT_EQ(*c, 1.0);
    EXPECT_EQ(r.miou, 1.0);
}

TEST(Iou, DisjointClass) {
    ClassGrid pred(4, 4, 0), gt(4, 4, 0);
    pred(0, 0) = 1;
    gt(3, 3) = 1;
    EXPECT_EQ(*iou(pred, gt, 2).per_class[1], 0.0);
}

TEST(Iou, HandCounted) {
    // pred          gt
    // 0 0 1 1       0 0 1 1
    // 0 1 1 1       0 0 1 1
    // 0 0 2 2       0 2 2 2
    // 0 0 2 2       0 0 2 2
    ClassGrid pred(4, 4), gt(4, 4);
    const int p[16] = {0, 0, 1, 1, 0, 1, 1, 1, 0, 0, 2, 2, 0, 0, 2, 2};
    const int g[16] = {0, 0, 1, 1, 0, 0, 1, 1, 0, 2, 2, 2, 0, 0, 2, 2};
    for (int i = 0; i < 16; ++i) {
        pred[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(p[i]);
        gt[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(g[i]);
    }
    const IouResult r = iou(pred, gt, 3);
    EXPECT_DOUBLE_EQ(*r.per_class[0], 6.0 / 8.0);
    EXPECT_DOUBLE_EQ(*r.per_class[1], 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(*r.per_class[2], 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(r.miou, (6.0 / 8.0 + 0.8 + 0.8) / 3.0);
}

TEST(Iou, MeanOverClassesPresentInGroundTruth) {
    ClassGrid pred(2, 2, 0), gt(2, 2, 0);
    pred(0, 0) = 2;
    const IouResult r = iou(pred, gt, 3);
    EXPECT_FALSE(r.per_class[1].has_value());
    EXPECT_DOUBLE_EQ(*r.per_class[2], 0.0);
    EXPECT_DOUBLE_EQ(r.miou, 0.75);
    EXPECT_THROW(iou(ClassGrid(2, 2), ClassGrid(3, 2), 3), std::invalid_argument);
}

TEST(DetectionRate, Examples) {
    const std::vector<double> zeros(5, 0.0);
    const DetectionCurve all = detection_rate(zeros, default_detection_thresholds());
    for (double r : all.rates) EXPECT_EQ(r, 1.0);
    const std::vector<double> errs{0.4, 1.2, 3.0};
    const std::vector<double> t{1.0};
    EXPECT_DOUBLE_EQ(detection_rate(errs, t).rates[0], 1.0 / 3.0);
    const std::vector<double> with_invalid{0.0, std::numeric_limits<double>::infinity()};
    const std::vector<double> huge{1e300};
    EXPECT_DOUBLE_EQ(detection_rate(with_invalid, huge).rates[0], 0.5);
}

TEST(DetectionRate, DefaultThresholds) {
    const auto t = default_detection_thresholds();
    ASSERT_EQ(t.size(), 41u);
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_EQ(t.back(), 10.0);
    EXPECT_EQ(t[1], 0.25);
}

TEST(DetectionRate, MonotoneAndBounded) {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> d(0.5);
    std::vector<double> errs;
    for (int i = 0; i < 300; ++i) errs.push_back(i % 17 == 0 ? std::numeric_limits<double>::infinity() : d(rng));
    const DetectionCurve c = detection_rate(errs, default_detection_thresholds());
    for (std::size_t i = 1; i < c.rates.size(); ++i) EXPECT_GE(c.rates[i], c.rates[i - 1]);
    for (double r : c.rates) {
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 1.0);
    }
}

TEST(BboxIou, Examples) {
    const Ellipse e = make_ellipse(3, 4, 5, 2, 0.4);
    EXPECT_EQ(ellipse_bbox_iou(e, e), 1.0);
    EXPECT_EQ(ellipse_bbox_iou(make_ellipse(0, 0, 1, 1, 0), make_ellipse(10, 0, 1, 1, 0)), 0.0);
    EXPECT_NEAR(ellipse_bbox_iou(make_ellipse(0, 0, 1, 1, 0), make_ellipse(1, 0, 1, 1, 0)), 1.0 / 3.0, 1e-12);
}

TEST(BboxIou, SymmetricBoundedTranslationInvariant) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> c(-10, 10), ax(1, 8), th(0, kPi);
    for (int i = 0; i < 200; ++i) {
        const Ellipse a = make_ellipse(c(rng), c(rng), ax(rng), ax(rng), th(rng));
        const Ellipse b = make_ellipse(c(rng), c(rng), ax(rng), ax(rng), th(rng));
        const double v = ellipse_bbox_iou(a, b);
        EXPECT_DOUBLE_EQ(v, ellipse_bbox_iou(b, a));
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        const double dx = c(rng), dy = c(rng);
        const Ellipse a2{a.cx + dx, a.cy + dy, a.a, a.b, a.theta};
        const Ellipse b2{b.cx + dx, b.cy + dy, b.a, b.b, b.theta};
        EXPECT_NEAR(ellipse_bbox_iou(a2, b2), v, 1e-9);
    }
}

TEST(OrientationError, Examples) {
    const Ellipse a = make_ellipse(0, 0, 4, 2, deg_to_rad(10));
    const Ellipse b = make_ellipse(0, 0, 4, 2, deg_to_rad(170));
    EXPECT_NEAR(*orientation_error(a, b), 20.0, 1e-9);
    EXPECT_NEAR(*orientation_error(a, a), 0.0, 1e-12);
    EXPECT_FALSE(orientation_error(make_ellipse(0, 0, 3, 3, 0), a).has_value());
    EXPECT_FALSE(orientation_error(a, make_ellipse(0, 0, 3, 3, 0)).has_value());
    EXPECT_FALSE(orientation_error(a, make_ellipse(0, 0, 2.2, 2.0, 1.0)).has_value());
}

TEST(OrientationError, RangeWhenPresent) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(0, kPi);
    for (int i = 0; i < 500; ++i) {
        const auto e = orientation_error(make_ellipse(0, 0, 5, 2, th(rng)), make_ellipse(0, 0, 6, 3, th(rng)));
        ASSERT_TRUE(e.has_value());
        EXPECT_GE(*e, 0.0);
        EXPECT_LE(*e, 90.0);
    }
}

TEST(ModelSelectionScore, Formula) {
    EXPECT_DOUBLE_EQ(model_selection_score(1, 0, 0, 0, 0), 5.0);
    EXPECT_NEAR(model_selection_score(0.9, 2, 2, 0, 0), 4.89, 1e-12);
    EXPECT_NEAR(model_selection_score(1, 0, 0, 90, 90), 3.0, 1e-12);
    const double base = model_selection_score(0.8, 1, 1, 5, 5);
    EXPECT_LT(model_selection_score(0.8, 1.1, 1, 5, 5), base);
    EXPECT_LT(model_selection_score(0.8, 1, 1.1, 5, 5), base);
    EXPECT_LT(model_selection_score(0.8, 1, 1, 5.1, 5), base);
    EXPECT_LT(model_selection_score(0.8, 1, 1, 5, 5.1), base);
}

namespace {

std::vector<TrainingAction> trace(const std::vector<double>& scores) {
    std::vector<TrainingAction> out;
    for (std::size_t n = 1; n <= scores.size(); ++n) out.push_back(convergence_controller(std::span(scores.data(), n)));
    return out;
}

}  // namespace

TEST(ConvergenceController, StrictlyImproving) {
    std::vector<double> s;
    for (int i = 0; i < 30; ++i) s.push_back(4.0 + 0.01 * i);
    for (TrainingAction a : trace(s)) EXPECT_EQ(a, TrainingAction::continue_training);
}

TEST(ConvergenceController, FlatThenImproving) {
    std::vector<double> s{4.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.1, 4.2};
    const auto t = trace(s);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(t[i], TrainingAction::continue_training) << i;
    EXPECT_EQ(t[5], TrainingAction::drop_lr);
    EXPECT_EQ(t[6], TrainingAction::continue_training);
    EXPECT_EQ(t[7], TrainingAction::continue_training);
}

TEST(ConvergenceController, FlatForTenEpochs) {
    const std::vector<double> s(11, 4.5);
    const auto t = trace(s);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NE(t[i], TrainingAction::stop) << i;
    EXPECT_EQ(t[5], TrainingAction::drop_lr);
    for (std::size_t i = 6; i < 10; ++i) EXPECT_EQ(t[i], TrainingAction::continue_training) << i;
    EXPECT_EQ(t[10], TrainingAction::stop);
}

TEST(ConvergenceController, SmallGainsDoNotCount) {
    std::vector<double> s{4.0};
    for (int i = 1; i <= 10; ++i) s.push_back(4.0 + 0.0009 * i / 10.0);
    EXPECT_EQ(convergence_controller(s), TrainingAction::stop);
    EXPECT_STREQ(to_string(TrainingAction::drop_lr), "drop_lr");
}

TEST(Median, Values) {
    EXPECT_EQ(median({3, 1, 2}), 2);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(BuildReport, PerfectPredictions) {
    std::vector<EvalSample> samples;
    for (int i = 0; i < 4; ++i) {
        EvalSample s;
        s.key = std::to_string(i);
        s.gt_pupil = s.pred_pupil = make_ellipse(50 + i, 40, 8, 6, 0.3);
        s.gt_iris = s.pred_iris = make_ellipse(50 + i, 41, 20, 17, 0.3);
        s.gt_pupil_center = s.pred_pupil_center = s.gt_pupil->center();
        ClassGrid g(8, 8, 0);
        g(2, 2) = 1;
        g(3, 3) = 2;
        s.segmentation = iou(g, g, 3);
        samples.push_back(s);
    }
    const MetricsReport r = build_report(samples, 3);
    EXPECT_EQ(r.image_count, 4u);
    EXPECT_DOUBLE_EQ(*r.miou, 1.0);
    EXPECT_EQ(r.pupil_invalid, 0u);
    for (double v : r.pupil_detection.rates) EXPECT_EQ(v, 1.0);
    for (double v : r.iris_detection.rates) EXPECT_EQ(v, 1.0);
    EXPECT_DOUBLE_EQ(r.selection_score, 5.0);
}

TEST(BuildReport, MissingPredictionsAreInvalid) {
    EvalSample s;
    s.gt_pupil = make_ellipse(10, 10, 4, 3, 0);
    s.gt_pupil_center = s.gt_pupil->center();
    s.gt_iris = make_ellipse(10, 10, 9, 8, 0);
    const MetricsReport r = build_report(std::vector<EvalSample>{s}, 3);
    EXPECT_EQ(r.pupil_invalid, 1u);
    EXPECT_EQ(r.iris_invalid, 1u);
    EXPECT_EQ(r.pupil_detection.rates.back(), 0.0);
}
