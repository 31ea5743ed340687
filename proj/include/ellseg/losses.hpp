#pragma once

#include <ellseg/geometry.hpp>
#include <ellseg/grid.hpp>
#include <ellseg/soft_centers.hpp>

#include <array>
#include <optional>
#include <stdexcept>

namespace ellseg {

class ShapeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Segmentation loss weights. schedule() ramps the dice term down and the
/// surface term up linearly over training.
struct LossWeights {
    double lambda1 = 1.0;
    double lambda2 = 20.0;
    double lambda3 = 1.0;
    double lambda4 = 0.0;

    static LossWeights schedule(int epoch, int total_epochs);
};

/// Per-pixel 3-way class softmax (not the spatial softmax of soft_centers).
ProbMaps class_softmax(const ProbMaps& logits);

struct CrossEntropy {
    RealGrid per_pixel;
    double mean = 0.0;
};

CrossEntropy cross_entropy(const ProbMaps& logits, const ClassGrid& labels);

/// 1 where any 8-neighbor carries a different label.
BinaryGrid boundary_weight_map(const ClassGrid& labels);

/// Generalized dice on class probabilities; classes absent from `labels` are
/// left out of both sums.
double generalized_dice(const ProbMaps& probs, const ClassGrid& labels);

/// Per-class signed distance maps of an EllSeg label grid (negative inside).
using SignedDistanceField = std::array<RealGrid, 3>;
SignedDistanceField signed_distance_fields(const ClassGrid& labels);

/// Mean over pixels and classes of p_k * phi_k.
double surface_loss(const ProbMaps& probs, const SignedDistanceField& sdf);

struct SegLossBreakdown {
    LossWeights weights;
    double cross_entropy = 0.0;      ///< plain mean CE
    double weighted_cross_entropy = 0.0;  ///< mean of ce * (lambda1 + lambda2 * boundary)
    double dice = 0.0;
    double surface = 0.0;
    double total = 0.0;
};

SegLossBreakdown seg_loss_breakdown(const ProbMaps& logits, const ClassGrid& labels, const LossWeights& weights);
double seg_loss(const ProbMaps& logits, const ClassGrid& labels, const LossWeights& weights);
double seg_loss(const ProbMaps& logits, const ClassGrid& labels, int epoch, int total_epochs);

/// L1 distance between soft-argmax centers and ground truth. The iris term
/// is skipped when no iris center is given.
double com_loss(const ProbMaps& maps, Point gt_pupil, std::optional<Point> gt_iris, double beta = kDefaultBeta);

// Gradients with respect to the logits / activations.
ProbMaps grad_cross_entropy(const ProbMaps& logits, const ClassGrid& labels);
ProbMaps grad_generalized_dice(const ProbMaps& logits, const ClassGrid& labels);
ProbMaps grad_seg_loss(const ProbMaps& logits, const ClassGrid& labels, const LossWeights& weights);
ProbMaps grad_com_loss(const ProbMaps& maps, Point gt_pupil, std::optional<Point> gt_iris,
                       double beta = kDefaultBeta);

}  // namespace ellseg
