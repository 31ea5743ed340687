#include <ellseg/losses.hpp>

#include <ellseg/classes.hpp>
#include <ellseg/distance_transform.hpp>

#include <algorithm>
#include <cmath>

namespace ellseg {

namespace {

constexpr int kClasses = ellseg_classes::kNumClasses;

void check_shapes(const ProbMaps& maps, const ClassGrid& labels) {
    for (const RealGrid& c : maps.channels) {
        if (!c.same_shape(labels)) throw ShapeMismatch("maps and labels differ in shape");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= kClasses) throw std::invalid_argument("label outside the EllSeg class range");
    }
}

struct DiceTerms {
    std::array<double, kClasses> weight{};
    std::array<bool, kClasses> present{};
    double intersection = 0.0;
    double denominator = 0.0;
};

DiceTerms dice_terms(const ProbMaps& probs, const ClassGrid& labels) {
    DiceTerms t;
    std::array<double, kClasses> count{};
    for (std::size_t i = 0; i < labels.size(); ++i) count[labels[i]] += 1.0;
    for (int k = 0; k < kClasses; ++k) {
        t.present[k] = count[k] > 0.0;
        if (!t.present[k]) continue;
        t.weight[k] = 1.0 / (count[k] * count[k]);
        double inter = 0.0;
        double sum_p = 0.0;
        const RealGrid& p = probs.channels[k];
        for (std::size_t i = 0; i < labels.size(); ++i) {
            sum_p += p[i];
            if (labels[i] == k) inter += p[i];
        }
        t.intersection += t.weight[k] * inter;
        t.denominator += t.weight[k] * (sum_p + count[k]);
    }
    return t;
}

// Chain rule through the per-pixel class softmax.
ProbMaps softmax_backward(const ProbMaps& probs, const ProbMaps& grad_probs) {
    ProbMaps out(probs.width(), probs.height());
    for (std::size_t i = 0; i < probs.background().size(); ++i) {
        double dot = 0.0;
        for (int k = 0; k < kClasses; ++k) dot += probs.channels[k][i] * grad_probs.channels[k][i];
        for (int k = 0; k < kClasses; ++k) {
            out.channels[k][i] = probs.channels[k][i] * (grad_probs.channels[k][i] - dot);
        }
    }
    return out;
}

ProbMaps dice_grad_probs(const ProbMaps& probs, const ClassGrid& labels) {
    const DiceTerms t = dice_terms(probs, labels);
    ProbMaps g(probs.width(), probs.height());
    if (t.denominator <= 0.0) return g;
    const double u2 = t.denominator * t.denominator;
    for (int k = 0; k < kClasses; ++k) {
        if (!t.present[k]) continue;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const double gt = labels[i] == k ? 1.0 : 0.0;
            g.channels[k][i] = -2.0 * t.weight[k] * (gt * t.denominator - t.intersection) / u2;
        }
    }
    return g;
}

double sign(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

LossWeights LossWeights::schedule(int epoch, int total_epochs) {
    if (total_epochs <= 0) throw std::invalid_argument("total epochs must be positive");
    if (epoch < 0 || epoch > total_epochs) throw std::invalid_argument("epoch must lie in [0, total epochs]");
    const double alpha = static_cast<double>(epoch) / static_cast<double>(total_epochs);
    return LossWeights{1.0, 20.0, 1.0 - alpha, alpha};
}

ProbMaps class_softmax(const ProbMaps& logits) {
    ProbMaps out(logits.width(), logits.height());
    for (std::size_t i = 0; i < logits.background().size(); ++i) {
        double peak = logits.channels[0][i];
        for (int k = 1; k < kClasses; ++k) peak = std::max(peak, logits.channels[k][i]);
        double sum = 0.0;
        for (int k = 0; k < kClasses; ++k) {
            out.channels[k][i] = std::exp(logits.channels[k][i] - peak);
            sum += out.channels[k][i];
        }
        for (int k = 0; k < kClasses; ++k) out.channels[k][i] /= sum;
    }
    return out;
}

CrossEntropy cross_entropy(const ProbMaps& logits, const ClassGrid& labels) {
    check_shapes(logits, labels);
    CrossEntropy ce{RealGrid(labels.width(), labels.height()), 0.0};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        double peak = logits.channels[0][i];
        for (int k = 1; k < kClasses; ++k) peak = std::max(peak, logits.channels[k][i]);
        double sum = 0.0;
        for (int k = 0; k < kClasses; ++k) sum += std::exp(logits.channels[k][i] - peak);
        ce.per_pixel[i] = peak + std::log(sum) - logits.channels[labels[i]][i];
        ce.mean += ce.per_pixel[i];
    }
    if (!labels.empty()) ce.mean /= static_cast<double>(labels.size());
    return ce;
}

BinaryGrid boundary_weight_map(const ClassGrid& labels) {
    BinaryGrid out(labels.width(), labels.height(), 0);
    for (int y = 0; y < labels.height(); ++y) {
        for (int x = 0; x < labels.width(); ++x) {
            const std::uint8_t c = labels(x, y);
            for (int dy = -1; dy <= 1 && !out(x, y); ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (labels.in_bounds(x + dx, y + dy) && labels(x + dx, y + dy) != c) {
                        out(x, y) = 1;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

double generalized_dice(const ProbMaps& probs, const ClassGrid& labels) {
    check_shapes(probs, labels);
    const DiceTerms t = dice_terms(probs, labels);
    if (t.denominator <= 0.0) return 0.0;
    return 1.0 - 2.0 * t.intersection / t.denominator;
}

SignedDistanceField signed_distance_fields(const ClassGrid& labels) {
    SignedDistanceField sdf;
    for (int k = 0; k < kClasses; ++k) {
        BinaryGrid region(labels.width(), labels.height());
        for (std::size_t i = 0; i < labels.size(); ++i) region[i] = labels[i] == k ? 1 : 0;
        sdf[k] = signed_distance(region);
    }
    return sdf;
}

double surface_loss(const ProbMaps& probs, const SignedDistanceField& sdf) {
    for (int k = 0; k < kClasses; ++k) {
        if (!probs.channels[k].same_shape(sdf[k])) throw ShapeMismatch("probabilities and distance maps differ");
    }
    const std::size_t n = probs.background().size();
    if (n == 0) return 0.0;
    double acc = 0.0;
    for (int k = 0; k < kClasses; ++k) {
        for (std::size_t i = 0; i < n; ++i) acc += probs.channels[k][i] * sdf[k][i];
    }
    return acc / static_cast<double>(kClasses * n);
}

SegLossBreakdown seg_loss_breakdown(const ProbMaps& logits, const ClassGrid& labels, const LossWeights& weights) {
    const CrossEntropy ce = cross_entropy(logits, labels);
    const BinaryGrid boundary = boundary_weight_map(labels);
    const ProbMaps probs = class_softmax(logits);

    SegLossBreakdown out;
    out.weights = weights;
    out.cross_entropy = ce.mean;
    double acc = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        acc += ce.per_pixel[i] * (weights.lambda1 + weights.lambda2 * boundary[i]);
    }
    out.weighted_cross_entropy = labels.empty() ? 0.0 : acc / static_cast<double>(labels.size());
    out.dice = generalized_dice(probs, labels);
    out.surface = surface_loss(probs, signed_distance_fields(labels));
    out.total = out.weighted_cross_entropy + weights.lambda3 * out.dice + weights.lambda4 * out.surface;
    return out;
}

double seg_loss(const ProbMaps& logits, const ClassGrid& labels, const LossWeights& weights) {
    return seg_loss_breakdown(logits, labels, weights).total;
}

double seg_loss(const ProbMaps& logits, const ClassGrid& labels, int epoch, int total_epochs) {
    return seg_loss(logits, labels, LossWeights::schedule(epoch, total_epochs));
}

double com_loss(const ProbMaps& maps, Point gt_pupil, std::optional<Point> gt_iris, double beta) {
    const EllSegCenters c = ellseg_centers(maps, beta);
    double loss = std::abs(c.pupil.x - gt_pupil.x) + std::abs(c.pupil.y - gt_pupil.y);
    if (gt_iris) loss += std::abs(c.iris.x - gt_iris->x) + std::abs(c.iris.y - gt_iris->y);
    return loss;
}

ProbMaps grad_cross_entropy(const ProbMaps& logits, const ClassGrid& labels) {
    check_shapes(logits, labels);
    ProbMaps g = class_softmax(logits);
    const double inv_n = 1.0 / static_cast<double>(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        g.channels[labels[i]][i] -= 1.0;
        for (int k = 0; k < kClasses; ++k) g.channels[k][i] *= inv_n;
    }
    return g;
}

ProbMaps grad_generalized_dice(const ProbMaps& logits, const ClassGrid& labels) {
    check_shapes(logits, labels);
    const ProbMaps probs = class_softmax(logits);
    return softmax_backward(probs, dice_grad_probs(probs, labels));
}

ProbMaps grad_seg_loss(const ProbMaps& logits, const ClassGrid& labels, const LossWeights& weights) {
    check_shapes(logits, labels);
    const ProbMaps probs = class_softmax(logits);
    const BinaryGrid boundary = boundary_weight_map(labels);
    const SignedDistanceField sdf = signed_distance_fields(labels);
    const std::size_t n = labels.size();

    ProbMaps grad_probs = dice_grad_probs(probs, labels);
    const double surface_scale = weights.lambda4 / static_cast<double>(kClasses * n);
    for (int k = 0; k < kClasses; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            grad_probs.channels[k][i] = weights.lambda3 * grad_probs.channels[k][i] + surface_scale * sdf[k][i];
        }
    }
    ProbMaps g = softmax_backward(probs, grad_probs);

    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (weights.lambda1 + weights.lambda2 * boundary[i]) * inv_n;
        for (int k = 0; k < kClasses; ++k) {
            const double target = labels[i] == k ? 1.0 : 0.0;
            g.channels[k][i] += w * (probs.channels[k][i] - target);
        }
    }
    return g;
}

ProbMaps grad_com_loss(const ProbMaps& maps, Point gt_pupil, std::optional<Point> gt_iris, double beta) {
    ProbMaps g(maps.width(), maps.height());
    const Point pc = soft_center(maps.pupil(), beta);
    const CenterGradient gp = grad_soft_center(maps.pupil(), beta);
    const double sx = sign(pc.x - gt_pupil.x);
    const double sy = sign(pc.y - gt_pupil.y);
    for (std::size_t i = 0; i < g.pupil().size(); ++i) g.pupil()[i] = sx * gp.d_x[i] + sy * gp.d_y[i];

    if (gt_iris) {
        RealGrid negated = maps.background();
        for (double& v : negated.data()) v = -v;
        const Point ic = soft_center(negated, beta);
        const CenterGradient gi = grad_soft_center(negated, beta);
        const double ix = sign(ic.x - gt_iris->x);
        const double iy = sign(ic.y - gt_iris->y);
        for (std::size_t i = 0; i < g.background().size(); ++i) {
            g.background()[i] = -(ix * gi.d_x[i] + iy * gi.d_y[i]);
        }
    }
    return g;
}

}  // namespace ellseg
