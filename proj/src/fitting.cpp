#include <ellseg/fitting.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ellseg {

namespace {

// Relative singular-value floor of the [x, y, 1] design block.
constexpr double kRankTolerance = 1e-10;

struct Conic {
    double A, B, C, D, E, F;
};

Ellipse conic_to_ellipse(Conic q) {
    const double disc = 4.0 * q.A * q.C - q.B * q.B;
    if (!(disc > 0.0)) throw FitError(FitErrorKind::non_elliptical_fit, "best conic is not an ellipse");
    if (q.A + q.C < 0.0) q = {-q.A, -q.B, -q.C, -q.D, -q.E, -q.F};

    const double x0 = (q.B * q.E - 2.0 * q.C * q.D) / disc;
    const double y0 = (q.B * q.D - 2.0 * q.A * q.E) / disc;
    const double f0 = q.F + 0.5 * (q.D * x0 + q.E * y0);
    if (!(f0 < 0.0)) throw FitError(FitErrorKind::non_elliptical_fit, "conic describes an empty ellipse");

    Eigen::Matrix2d quad;
    quad << q.A, 0.5 * q.B, 0.5 * q.B, q.C;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(quad);
    const Eigen::Vector2d lambda = eig.eigenvalues();
    if (!(lambda(0) > 0.0)) throw FitError(FitErrorKind::non_elliptical_fit, "conic is not positive definite");
    const Eigen::Vector2d major = eig.eigenvectors().col(0);
    const double a = std::sqrt(-f0 / lambda(0));
    const double b = std::sqrt(-f0 / lambda(1));
    return make_ellipse(x0, y0, a, b, std::atan2(major(1), major(0)));
}

double rms_residual(const Ellipse& e, std::span<const Point> points) {
    double acc = 0.0;
    for (const Point& p : points) {
        const double d = sampson_distance(e, p);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(points.size()));
}

}  // namespace

const char* to_string(FitErrorKind kind) noexcept {
    switch (kind) {
        case FitErrorKind::fewer_than_five_points: return "FewerThanFivePoints";
        case FitErrorKind::insufficient_points: return "InsufficientPoints";
        case FitErrorKind::degenerate_configuration: return "DegenerateConfiguration";
        case FitErrorKind::non_elliptical_fit: return "NonEllipticalFit";
        case FitErrorKind::no_consensus: return "NoConsensus";
    }
    return "Unknown";
}

const char* to_string(FitMethod method) noexcept { return method == FitMethod::lsq ? "lsq" : "ransac"; }

double sampson_distance(const Ellipse& e, Point p) noexcept {
    const double dx = p.x - e.cx;
    const double dy = p.y - e.cy;
    const double c = std::cos(e.theta);
    const double s = std::sin(e.theta);
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    const double ia2 = 1.0 / (e.a * e.a);
    const double ib2 = 1.0 / (e.b * e.b);
    const double q = u * u * ia2 + v * v * ib2 - 1.0;
    const double grad = 2.0 * std::sqrt(u * u * ia2 * ia2 + v * v * ib2 * ib2);
    if (grad == 0.0) return e.b;
    return std::abs(q) / grad;
}

FitResult fit_ellipse_lsq(std::span<const Point> points) {
    const std::size_t n = points.size();
    if (n < 5) throw FitError(FitErrorKind::fewer_than_five_points, "ellipse fit needs at least 5 points");

    double mx = 0.0;
    double my = 0.0;
    for (const Point& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double spread = 0.0;
    for (const Point& p : points) spread += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
    spread = std::sqrt(spread / static_cast<double>(n));
    if (!(spread > 0.0) || !std::isfinite(spread)) {
        throw FitError(FitErrorKind::degenerate_configuration, "points are coincident");
    }
    const double scale = 1.0 / spread;

    Eigen::MatrixXd quad(static_cast<Eigen::Index>(n), 3);
    Eigen::MatrixXd lin(static_cast<Eigen::Index>(n), 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (points[i].x - mx) * scale;
        const double y = (points[i].y - my) * scale;
        const auto r = static_cast<Eigen::Index>(i);
        quad.row(r) << x * x, x * y, y * y;
        lin.row(r) << x, y, 1.0;
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(lin);
    const Eigen::Vector3d sv = svd.singularValues();
    if (sv(2) <= kRankTolerance * sv(0)) {
        throw FitError(FitErrorKind::degenerate_configuration, "points are collinear");
    }

    const Eigen::Matrix3d s1 = quad.transpose() * quad;
    const Eigen::Matrix3d s2 = quad.transpose() * lin;
    const Eigen::Matrix3d s3 = lin.transpose() * lin;
    const Eigen::Matrix3d t = -s3.ldlt().solve(s2.transpose());
    const Eigen::Matrix3d reduced = s1 + s2 * t;
    Eigen::Matrix3d m;
    m.row(0) = reduced.row(2) / 2.0;
    m.row(1) = -reduced.row(1);
    m.row(2) = reduced.row(0) / 2.0;

    const Eigen::EigenSolver<Eigen::Matrix3d> eig(m);
    int best = -1;
    double best_lambda = std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_vec;
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d v = eig.eigenvectors().col(k).real();
        const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        const double lambda = eig.eigenvalues()(k).real();
        if (cond > 0.0 && lambda < best_lambda) {
            best = k;
            best_lambda = lambda;
            best_vec = v;
        }
    }
    if (best < 0) throw FitError(FitErrorKind::non_elliptical_fit, "no elliptical solution");
    const Eigen::Vector3d lin_coef = t * best_vec;

    const Ellipse normalized =
        conic_to_ellipse({best_vec(0), best_vec(1), best_vec(2), lin_coef(0), lin_coef(1), lin_coef(2)});
    const Ellipse e = make_ellipse(normalized.cx * spread + mx, normalized.cy * spread + my, normalized.a * spread,
                                   normalized.b * spread, normalized.theta);
    return FitResult{e, static_cast<int>(n), rms_residual(e, points), FitMethod::lsq};
}

int RansacConfig::resolved_min_inliers(std::size_t point_count) const noexcept {
    if (min_inliers) return *min_inliers;
    const int quarter = static_cast<int>((point_count + 3) / 4);
    return std::max(10, quarter);
}

FitResult fit_ellipse_ransac(std::span<const Point> points, const RansacConfig& config, std::mt19937_64& rng) {
    const std::size_t n = points.size();
    if (n < 5) throw FitError(FitErrorKind::fewer_than_five_points, "ellipse fit needs at least 5 points");
    const int min_inliers = config.resolved_min_inliers(n);
    if (n < static_cast<std::size_t>(std::max(5, min_inliers))) {
        throw FitError(FitErrorKind::insufficient_points, "fewer points than the minimum consensus size");
    }

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Point> sample(5);
    std::vector<std::size_t> chosen(5);
    std::vector<std::size_t> best_set;
    double best_rms = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> current;
    bool any_fit = false;
    std::optional<FitError> last_error;

    for (int it = 0; it < config.iterations; ++it) {
        for (std::size_t k = 0; k < 5; ++k) {
            std::size_t idx = 0;
            do {
                idx = pick(rng);
            } while (std::find(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(k), idx) !=
                     chosen.begin() + static_cast<std::ptrdiff_t>(k));
            chosen[k] = idx;
            sample[k] = points[idx];
        }
        Ellipse candidate;
        try {
            candidate = fit_ellipse_lsq(sample).ellipse;
        } catch (const FitError& err) {
            last_error = err;
            continue;
        }
        any_fit = true;

        current.clear();
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = sampson_distance(candidate, points[i]);
            if (d <= config.inlier_tol) {
                current.push_back(i);
                acc += d * d;
            }
        }
        const double rms = current.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(current.size()));
        if (current.size() > best_set.size() || (current.size() == best_set.size() && rms < best_rms)) {
            best_set = current;
            best_rms = rms;
        }
    }

    if (!any_fit && last_error) throw *last_error;
    if (static_cast<int>(best_set.size()) < min_inliers) {
        throw FitError(FitErrorKind::no_consensus, "no sample reached the minimum consensus size");
    }

    std::vector<Point> consensus;
    consensus.reserve(best_set.size());
    for (std::size_t i : best_set) consensus.push_back(points[i]);
    FitResult result = fit_ellipse_lsq(consensus);
    result.method = FitMethod::ransac;
    return result;
}

}  // namespace ellseg
