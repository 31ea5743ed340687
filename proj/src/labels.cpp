#include <ellseg/labels.hpp>

#include <ellseg/edges.hpp>

#include <stdexcept>
#include <vector>

namespace ellseg {

namespace {

std::optional<FitResult> fit_structure(const std::vector<EdgePoint>& edge_points, const RansacConfig& config,
                                       std::mt19937_64& rng, std::string& failure) {
    if (edge_points.size() < 5) {
        failure = "FewerThanFivePoints";
        return std::nullopt;
    }
    std::vector<Point> points;
    points.reserve(edge_points.size());
    for (const EdgePoint& p : edge_points) points.push_back(p.point());
    try {
        return fit_ellipse_ransac(points, config, rng);
    } catch (const FitError& err) {
        failure = to_string(err.kind());
    } catch (const std::invalid_argument&) {
        failure = "NonEllipticalFit";
    }
    return std::nullopt;
}

}  // namespace

bool is_valid_partseg(const ClassGrid& mask) noexcept {
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] >= partseg::kNumClasses) return false;
    }
    return true;
}

bool is_valid_ellseg(const ClassGrid& mask) noexcept {
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] >= ellseg_classes::kNumClasses) return false;
    }
    return true;
}

GroundTruthRecord partseg_to_ellipses(const ClassGrid& mask, const RansacConfig& config, std::mt19937_64& rng) {
    GroundTruthRecord record;
    const auto pupil_points = filter_neighbor_condition(class_boundary_points(mask, {partseg::kPupil}), mask,
                                                        BoundaryKind::pupil_iris);
    const auto limbus_points = filter_neighbor_condition(
        class_boundary_points(mask, {partseg::kIris, partseg::kPupil}), mask, BoundaryKind::limbus);

    record.pupil_fit = fit_structure(pupil_points, config, rng, record.pupil_failure);
    record.iris_fit = fit_structure(limbus_points, config, rng, record.iris_failure);
    if (record.pupil_fit) {
        record.pupil = record.pupil_fit->ellipse;
        record.pupil_center = record.pupil->center();
    }
    if (record.iris_fit) record.iris = record.iris_fit->ellipse;
    return record;
}

GroundTruthRecord ellseg_to_ellipses(const ClassGrid& mask, const RansacConfig& config, std::mt19937_64& rng) {
    // Outside the iris counts as sclera so no boundary point is rejected.
    ClassGrid remapped(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        switch (mask[i]) {
            case ellseg_classes::kPupil: remapped[i] = partseg::kPupil; break;
            case ellseg_classes::kIris: remapped[i] = partseg::kIris; break;
            default: remapped[i] = partseg::kSclera; break;
        }
    }
    return partseg_to_ellipses(remapped, config, rng);
}

ClassGrid ellipses_to_ellseg(const Ellipse& pupil, const Ellipse& iris, int width, int height) {
    ClassGrid out(width, height, ellseg_classes::kBackground);
    const BinaryGrid iris_px = rasterize(iris, width, height);
    const BinaryGrid pupil_px = rasterize(pupil, width, height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (iris_px[i]) out[i] = ellseg_classes::kIris;
        if (pupil_px[i]) out[i] = ellseg_classes::kPupil;
    }
    return out;
}

OcclusionFractions occlusion_fraction(const ClassGrid& part, const ClassGrid& ell) {
    if (!part.same_shape(ell)) throw std::invalid_argument("occlusion_fraction: mask shapes differ");
    std::size_t pupil_full = 0;
    std::size_t pupil_seen = 0;
    std::size_t iris_full = 0;
    std::size_t iris_seen = 0;
    for (std::size_t i = 0; i < part.size(); ++i) {
        const bool full_pupil = ell[i] == ellseg_classes::kPupil;
        const bool full_iris = full_pupil || ell[i] == ellseg_classes::kIris;
        const bool vis_pupil = part[i] == partseg::kPupil;
        const bool vis_iris = vis_pupil || part[i] == partseg::kIris;
        pupil_full += full_pupil ? 1 : 0;
        pupil_seen += (full_pupil && vis_pupil) ? 1 : 0;
        iris_full += full_iris ? 1 : 0;
        iris_seen += (full_iris && vis_iris) ? 1 : 0;
    }
    OcclusionFractions out;
    if (pupil_full > 0) out.pupil = 1.0 - static_cast<double>(pupil_seen) / static_cast<double>(pupil_full);
    if (iris_full > 0) out.iris = 1.0 - static_cast<double>(iris_seen) / static_cast<double>(iris_full);
    return out;
}

}  // namespace ellseg
