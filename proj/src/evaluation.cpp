#include <ellseg/evaluation.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ellseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Distribution make_distribution(std::vector<double> values) {
    Distribution d;
    d.median = values.empty() ? 0.0 : median(values);
    d.values = std::move(values);
    return d;
}

double finite_mean(const std::vector<double>& values) {
    double acc = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        if (std::isfinite(v)) {
            acc += v;
            ++n;
        }
    }
    return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

}  // namespace

IouResult iou(const ClassGrid& pred, const ClassGrid& gt, int num_classes) {
    if (!pred.same_shape(gt)) throw std::invalid_argument("iou: shape mismatch");
    const auto k = static_cast<std::size_t>(num_classes);
    std::vector<std::size_t> inter(k, 0);
    std::vector<std::size_t> uni(k, 0);
    std::vector<std::size_t> gt_count(k, 0);
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const std::size_t p = pred[i];
        const std::size_t g = gt[i];
        if (p >= k || g >= k) throw std::invalid_argument("iou: class index out of range");
        ++gt_count[g];
        if (p == g) {
            ++inter[g];
            ++uni[g];
        } else {
            ++uni[p];
            ++uni[g];
        }
    }
    IouResult r;
    r.per_class.resize(k);
    double acc = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < k; ++c) {
        if (uni[c] == 0) continue;
        r.per_class[c] = static_cast<double>(inter[c]) / static_cast<double>(uni[c]);
        if (gt_count[c] > 0) {
            acc += *r.per_class[c];
            ++present;
        }
    }
    r.miou = present == 0 ? 0.0 : acc / static_cast<double>(present);
    return r;
}

std::vector<double> default_detection_thresholds() {
    std::vector<double> t;
    for (int i = 0; i <= 40; ++i) t.push_back(0.25 * i);
    return t;
}

DetectionCurve detection_rate(std::span<const double> errors, std::span<const double> thresholds) {
    DetectionCurve curve;
    curve.thresholds.assign(thresholds.begin(), thresholds.end());
    std::vector<double> finite;
    for (double e : errors) {
        if (std::isfinite(e)) finite.push_back(e);
    }
    std::sort(finite.begin(), finite.end());
    for (double t : thresholds) {
        if (errors.empty()) {
            curve.rates.push_back(0.0);
            continue;
        }
        const auto hits = std::upper_bound(finite.begin(), finite.end(), t) - finite.begin();
        curve.rates.push_back(static_cast<double>(hits) / static_cast<double>(errors.size()));
    }
    return curve;
}

double ellipse_bbox_iou(const Ellipse& lhs, const Ellipse& rhs) noexcept {
    return box_iou(bounding_box(lhs), bounding_box(rhs));
}

std::optional<double> orientation_error(const Ellipse& pred, const Ellipse& gt) noexcept {
    if (!(pred.a / pred.b > kOrientationAspectGate) || !(gt.a / gt.b > kOrientationAspectGate)) return std::nullopt;
    double diff = std::abs(rad_to_deg(pred.theta) - rad_to_deg(gt.theta));
    diff = std::fmod(diff, 180.0);
    return std::min(diff, 180.0 - diff);
}

double model_selection_score(double miou, double pupil_dist, double iris_dist, double pupil_theta_deg,
                             double iris_theta_deg) noexcept {
    return 4.0 + miou - 0.0025 * (pupil_dist + iris_dist) - (pupil_theta_deg + iris_theta_deg) / 90.0;
}

const char* to_string(TrainingAction action) noexcept {
    switch (action) {
        case TrainingAction::continue_training: return "continue";
        case TrainingAction::drop_lr: return "drop_lr";
        case TrainingAction::stop: return "stop";
    }
    return "continue";
}

TrainingAction convergence_controller(std::span<const double> history) noexcept {
    if (history.empty()) return TrainingAction::continue_training;
    double best = history.front();
    int stagnant = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history[i] > best + kImprovementThreshold) {
            best = history[i];
            stagnant = 0;
        } else {
            ++stagnant;
        }
    }
    if (stagnant >= kStopPatience) return TrainingAction::stop;
    if (stagnant == kDropLrPatience) return TrainingAction::drop_lr;
    return TrainingAction::continue_training;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    const double lo = values[mid - 1];
    const double hi = values[mid];
    if (std::isinf(hi)) return hi;
    return 0.5 * (lo + hi);
}

MetricsReport build_report(std::span<const EvalSample> samples, int num_classes) {
    MetricsReport report;
    report.image_count = samples.size();

    std::vector<double> pupil_err;
    std::vector<double> iris_err;
    std::vector<double> pupil_box;
    std::vector<double> iris_box;
    std::vector<double> pupil_theta;
    std::vector<double> iris_theta;
    std::vector<double> class_sum(static_cast<std::size_t>(num_classes), 0.0);
    std::vector<std::size_t> class_n(static_cast<std::size_t>(num_classes), 0);
    double miou_sum = 0.0;
    std::size_t miou_n = 0;

    for (const EvalSample& s : samples) {
        const std::optional<Point> gt_pc = s.gt_pupil ? std::optional<Point>(s.gt_pupil->center()) : s.gt_pupil_center;
        const std::optional<Point> pred_pc =
            s.pred_pupil ? std::optional<Point>(s.pred_pupil->center()) : s.pred_pupil_center;
        if (gt_pc) {
            if (pred_pc) {
                pupil_err.push_back(distance(*pred_pc, *gt_pc));
            } else {
                pupil_err.push_back(kInf);
                ++report.pupil_invalid;
            }
        }
        if (s.gt_iris) {
            if (s.pred_iris) {
                iris_err.push_back(distance(s.pred_iris->center(), s.gt_iris->center()));
            } else {
                iris_err.push_back(kInf);
                ++report.iris_invalid;
            }
        }
        if (s.gt_pupil && s.pred_pupil) {
            pupil_box.push_back(ellipse_bbox_iou(*s.pred_pupil, *s.gt_pupil));
            if (auto e = orientation_error(*s.pred_pupil, *s.gt_pupil)) pupil_theta.push_back(*e);
        }
        if (s.gt_iris && s.pred_iris) {
            iris_box.push_back(ellipse_bbox_iou(*s.pred_iris, *s.gt_iris));
            if (auto e = orientation_error(*s.pred_iris, *s.gt_iris)) iris_theta.push_back(*e);
        }
        if (s.segmentation) {
            miou_sum += s.segmentation->miou;
            ++miou_n;
            for (std::size_t c = 0; c < class_sum.size() && c < s.segmentation->per_class.size(); ++c) {
                if (s.segmentation->per_class[c]) {
                    class_sum[c] += *s.segmentation->per_class[c];
                    ++class_n[c];
                }
            }
        }
    }

    report.class_iou.resize(class_sum.size());
    for (std::size_t c = 0; c < class_sum.size(); ++c) {
        if (class_n[c] > 0) report.class_iou[c] = class_sum[c] / static_cast<double>(class_n[c]);
    }
    if (miou_n > 0) report.miou = miou_sum / static_cast<double>(miou_n);

    const std::vector<double> thresholds = default_detection_thresholds();
    report.pupil_detection = detection_rate(pupil_err, thresholds);
    report.iris_detection = detection_rate(iris_err, thresholds);
    report.selection_score = model_selection_score(report.miou.value_or(0.0), finite_mean(pupil_err),
                                                   finite_mean(iris_err), finite_mean(pupil_theta),
                                                   finite_mean(iris_theta));
    report.pupil_center_error = make_distribution(std::move(pupil_err));
    report.iris_center_error = make_distribution(std::move(iris_err));
    report.pupil_bbox_iou = make_distribution(std::move(pupil_box));
    report.iris_bbox_iou = make_distribution(std::move(iris_box));
    report.pupil_orientation_error = make_distribution(std::move(pupil_theta));
    report.iris_orientation_error = make_distribution(std::move(iris_theta));
    return report;
}

}  // namespace ellseg
