#include <ellseg/synth.hpp>

#include <ellseg/classes.hpp>
#include <ellseg/evaluation.hpp>
#include <ellseg/random.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ellseg {

namespace {

double draw(const Range& r, std::mt19937_64& rng) {
    if (r.hi <= r.lo) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

void check_range(const Range& r, double lo, double hi, const char* what) {
    if (!(r.lo >= lo && r.hi <= hi && r.lo <= r.hi)) throw std::invalid_argument(what);
}

bool pupil_fits_inside(const Ellipse& pupil, const Ellipse& iris, double clearance) {
    if (iris.b <= clearance) return false;
    const Ellipse shrunk{iris.cx, iris.cy, iris.a - clearance, iris.b - clearance, iris.theta};
    for (int i = 0; i < 72; ++i) {
        if (!contains(shrunk, boundary_point(pupil, 2.0 * kPi * i / 72.0))) return false;
    }
    return true;
}

// Eyelid caps: the upper lid is the top arc of an ellipse hanging below the
// eye, the lower lid the bottom arc of one above it. Only the upper lid moves
// with the aperture.
struct Cap {
    double cx, cy, rx, ry;

    [[nodiscard]] bool inside(double x, double y) const noexcept {
        const double dx = (x - cx) / rx;
        const double dy = (y - cy) / ry;
        return dx * dx + dy * dy <= 1.0;
    }
};

struct Lids {
    Cap upper;
    Cap lower;
};

Lids eyelids(const EyeGeometry& eye, const SynthParams& params) {
    const BBox box = bounding_box(eye.iris);
    const double half_w = 0.5 * (box.xmax - box.xmin);
    const double half_h = 0.5 * (box.ymax - box.ymin);
    const double m = params.lid_margin;
    const double a = params.aperture;
    const double rx = 1.8 * half_w + m;
    const double ry = 2.2 * half_h;
    const double upper_apex = eye.iris.cy - half_h - m * a + 2.0 * half_h * (1.0 - a);
    const double lower_apex = eye.iris.cy + half_h + m;
    return {Cap{eye.iris.cx, upper_apex + ry, rx, ry}, Cap{eye.iris.cx, lower_apex - ry, rx, ry}};
}

}  // namespace

void SynthParams::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("synth: frame size must be positive");
    if (!(aperture >= 0.0 && aperture <= 1.0)) throw std::invalid_argument("synth: aperture must lie in [0, 1]");
    check_range(obliquity_deg, 0.0, 80.0, "synth: obliquity must lie in [0, 80] degrees");
    check_range(pupil_scale, 0.01, 0.95, "synth: pupil scale must lie in (0, 1)");
    check_range(iris_semi_major, 1.0, 1e6, "synth: iris semi-major must be positive");
    check_range(iris_cx, 0.0, width - 1.0, "synth: iris center x outside the frame");
    check_range(iris_cy, 0.0, height - 1.0, "synth: iris center y outside the frame");
    if (pupil_offset < 0.0 || lid_margin < 0.0 || noise_sigma < 0.0) {
        throw std::invalid_argument("synth: offsets, margins and noise must be non-negative");
    }
}

EyeGeometry sample_eye_geometry(const SynthParams& params, std::mt19937_64& rng) {
    params.validate();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double iris_a = draw(params.iris_semi_major, rng);
    const double aspect = std::cos(deg_to_rad(draw(params.obliquity_deg, rng)));
    const double theta = unit(rng) * kPi;
    const Ellipse iris =
        make_ellipse(draw(params.iris_cx, rng), draw(params.iris_cy, rng), iris_a, iris_a * aspect, theta);
    constexpr double kClearance = 4.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double pupil_a = iris_a * draw(params.pupil_scale, rng);
        const double r = params.pupil_offset * iris.b * std::sqrt(unit(rng));
        const double phi = 2.0 * kPi * unit(rng);
        const Ellipse pupil = make_ellipse(iris.cx + r * std::cos(phi), iris.cy + r * std::sin(phi), pupil_a,
                                           pupil_a * aspect, theta);
        if (pupil_fits_inside(pupil, iris, kClearance)) return {pupil, iris};
    }
    const double pupil_a = iris_a * params.pupil_scale.lo;
    return {make_ellipse(iris.cx, iris.cy, pupil_a, pupil_a * aspect, theta), iris};
}

ClassGrid render_partseg(const EyeGeometry& eye, const SynthParams& params) {
    const Lids lids = eyelids(eye, params);
    const ClassGrid full = ellipses_to_ellseg(eye.pupil, eye.iris, params.width, params.height);
    ClassGrid part(params.width, params.height, partseg::kBackground);
    for (int y = 0; y < params.height; ++y) {
        for (int x = 0; x < params.width; ++x) {
            if (!lids.upper.inside(x, y) || !lids.lower.inside(x, y)) continue;
            switch (full(x, y)) {
                case ellseg_classes::kPupil: part(x, y) = partseg::kPupil; break;
                case ellseg_classes::kIris: part(x, y) = partseg::kIris; break;
                default: part(x, y) = partseg::kSclera; break;
            }
        }
    }
    return part;
}

GrayImage render_image(const ClassGrid& partseg, const SynthParams& params, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, 1.0);
    const double levels[partseg::kNumClasses] = {params.background_level, params.sclera_level, params.iris_level,
                                                 params.pupil_level};
    GrayImage image(partseg.width(), partseg.height());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double v = levels[partseg[i]] + params.noise_sigma * noise(rng);
        image[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
    return image;
}

SynthEye synth_eye(const SynthParams& params, std::mt19937_64& rng) {
    const EyeGeometry eye = sample_eye_geometry(params, rng);
    SynthEye out;
    out.partseg = render_partseg(eye, params);
    out.ellseg = ellipses_to_ellseg(eye.pupil, eye.iris, params.width, params.height);
    out.image = render_image(out.partseg, params, rng);
    out.truth.pupil = eye.pupil;
    out.truth.iris = eye.iris;
    out.truth.pupil_center = eye.pupil.center();
    return out;
}

std::vector<OcclusionRow> occlusion_experiment(int n_per_level, const std::vector<double>& apertures,
                                               std::uint64_t seed, const SynthParams& base,
                                               const RansacConfig& ransac) {
    if (n_per_level <= 0) throw std::invalid_argument("occlusion experiment needs at least one eye per level");
    for (double a : apertures) {
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("apertures must lie in (0, 1]");
    }
    std::vector<EyeGeometry> eyes;
    eyes.reserve(static_cast<std::size_t>(n_per_level));
    for (int i = 0; i < n_per_level; ++i) {
        std::mt19937_64 rng = derive_rng(seed, {static_cast<std::uint64_t>(i)});
        eyes.push_back(sample_eye_geometry(base, rng));
    }

    std::vector<OcclusionRow> rows;
    for (std::size_t level = 0; level < apertures.size(); ++level) {
        SynthParams params = base;
        params.aperture = apertures[level];
        OcclusionRow row;
        row.aperture = params.aperture;
        std::vector<double> part_err;
        std::vector<double> ell_err;
        for (int i = 0; i < n_per_level; ++i) {
            const EyeGeometry& eye = eyes[static_cast<std::size_t>(i)];
            const ClassGrid part = render_partseg(eye, params);
            const ClassGrid ell = ellipses_to_ellseg(eye.pupil, eye.iris, params.width, params.height);

            std::mt19937_64 part_rng = derive_rng(seed, {static_cast<std::uint64_t>(i), level, 1});
            std::mt19937_64 ell_rng = derive_rng(seed, {static_cast<std::uint64_t>(i), level, 2});
            const GroundTruthRecord from_part = partseg_to_ellipses(part, ransac, part_rng);
            const GroundTruthRecord from_ell = ellseg_to_ellipses(ell, ransac, ell_rng);

            if (!from_part.pupil_valid() || !from_part.iris_valid()) ++row.partseg_fail;
            if (!from_ell.pupil_valid() || !from_ell.iris_valid()) ++row.ellseg_fail;
            if (from_part.iris) part_err.push_back(distance(from_part.iris->center(), eye.iris.center()));
            if (from_ell.iris) ell_err.push_back(distance(from_ell.iris->center(), eye.iris.center()));
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.partseg_median = part_err.empty() ? nan : median(part_err);
        row.ellseg_median = ell_err.empty() ? nan : median(ell_err);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ellseg
