#pragma once

#include <ellseg/geometry.hpp>
#include <ellseg/grid.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ellseg {

struct IouResult {
    /// Per-class IoU; empty when the class is absent from both grids.
    std::vector<std::optional<double>> per_class;
    /// Mean over classes present in the ground truth.
    double miou = 0.0;
};

/// Throws std::invalid_argument on shape mismatch.
IouResult iou(const ClassGrid& pred, const ClassGrid& gt, int num_classes);

struct DetectionCurve {
    std::vector<double> thresholds;
    std::vector<double> rates;
};

/// 0 to 10 px in 0.25 px steps.
std::vector<double> default_detection_thresholds();

/// Fraction of errors <= each threshold. Invalid fits are passed as +inf.
DetectionCurve detection_rate(std::span<const double> errors, std::span<const double> thresholds);

double ellipse_bbox_iou(const Ellipse& lhs, const Ellipse& rhs) noexcept;

/// Minimum axis-folded orientation difference in degrees, or nothing unless
/// both ellipses have a/b above 1.1.
std::optional<double> orientation_error(const Ellipse& pred, const Ellipse& gt) noexcept;

inline constexpr double kOrientationAspectGate = 1.1;

/// 4 + mIoU - 0.0025 (d_p + d_i) - (theta_p + theta_i) / 90.
double model_selection_score(double miou, double pupil_dist, double iris_dist, double pupil_theta_deg,
                             double iris_theta_deg) noexcept;

enum class TrainingAction { continue_training, drop_lr, stop };

const char* to_string(TrainingAction action) noexcept;

inline constexpr double kImprovementThreshold = 1e-3;
inline constexpr int kDropLrPatience = 5;
inline constexpr int kStopPatience = 10;

/// Decision after the last epoch in `history` (scores in epoch order).
/// Improvement means beating the best earlier score by more than 0.001.
TrainingAction convergence_controller(std::span<const double> history) noexcept;

double median(std::vector<double> values);

/// One evaluated image. Missing ground truth structures are skipped; missing
/// predictions count as invalid fits.
struct EvalSample {
    std::string key;
    std::optional<Ellipse> pred_pupil;
    std::optional<Ellipse> pred_iris;
    std::optional<Point> pred_pupil_center;
    std::optional<Ellipse> gt_pupil;
    std::optional<Ellipse> gt_iris;
    std::optional<Point> gt_pupil_center;
    std::optional<IouResult> segmentation;
};

struct Distribution {
    std::vector<double> values;
    double median = 0.0;
};

struct MetricsReport {
    std::size_t image_count = 0;
    std::vector<std::optional<double>> class_iou;  ///< mean per class over images where defined
    std::optional<double> miou;
    Distribution pupil_center_error;
    Distribution iris_center_error;
    Distribution pupil_bbox_iou;
    Distribution iris_bbox_iou;
    Distribution pupil_orientation_error;
    Distribution iris_orientation_error;
    std::size_t pupil_invalid = 0;
    std::size_t iris_invalid = 0;
    DetectionCurve pupil_detection;
    DetectionCurve iris_detection;
    double selection_score = 0.0;
};

MetricsReport build_report(std::span<const EvalSample> samples, int num_classes);

}  // namespace ellseg
