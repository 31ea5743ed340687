#include <ellseg/cli.hpp>

#include <ellseg/augmentation.hpp>
#include <ellseg/classes.hpp>
#include <ellseg/dataset.hpp>
#include <ellseg/evaluation.hpp>
#include <ellseg/io.hpp>
#include <ellseg/labels.hpp>
#include <ellseg/losses.hpp>
#include <ellseg/random.hpp>
#include <ellseg/serialization.hpp>
#include <ellseg/soft_centers.hpp>
#include <ellseg/synth.hpp>

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

namespace ellseg::cli {

namespace fs = std::filesystem;
using json::Json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string rel(const fs::path& p, const fs::path& base) { return fs::relative(p, base).generic_string(); }

/// Regular files with the given extension below `dir`, sorted by relative path.
std::vector<std::string> list_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) throw io::ReadError("not a directory: " + dir.string());
    std::vector<std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(rel(entry.path(), dir));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// A file, or every matching file of a directory. Keys are relative to the
/// directory (or the bare file name).
std::vector<std::pair<std::string, fs::path>> inputs(const fs::path& path, const std::string& ext) {
    if (fs::is_regular_file(path)) return {{path.filename().generic_string(), path}};
    std::vector<std::pair<std::string, fs::path>> out;
    for (const std::string& key : list_files(path, ext)) out.emplace_back(key, path / key);
    return out;
}

RansacConfig ransac_config(int iterations, double tol, int min_inliers) {
    RansacConfig cfg;
    cfg.iterations = iterations;
    cfg.inlier_tol = tol;
    if (min_inliers > 0) cfg.min_inliers = min_inliers;
    if (cfg.iterations <= 0 || !(cfg.inlier_tol > 0.0)) throw UsageError("RANSAC iterations and tolerance must be positive");
    return cfg;
}

struct RansacOptions {
    int iterations = 300;
    double tol = 1.0;
    int min_inliers = 0;

    void attach(CLI::App* app) {
        app->add_option("--iterations", iterations, "RANSAC iterations")->capture_default_str();
        app->add_option("--inlier-tol", tol, "RANSAC inlier tolerance in pixels")->capture_default_str();
        app->add_option("--min-inliers", min_inliers, "minimum consensus size (0: max(10, 25% of points))");
    }
    [[nodiscard]] RansacConfig config() const { return ransac_config(iterations, tol, min_inliers); }
};

std::vector<json::KeyedRecord> read_record_file(const fs::path& path) {
    const std::string text = io::read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw io::SchemaError(path.string() + ": " + e.what());
        }
        std::vector<json::KeyedRecord> out;
        for (const Json& item : j) out.push_back(json::record_from_json(item));
        return out;
    }
    return json::read_records(text);
}

std::string jsonl(const std::vector<Json>& rows) {
    std::string out;
    for (const Json& r : rows) out += r.dump() + "\n";
    return out;
}

GroundTruthRecord fit_mask(const ClassGrid& mask, bool ellseg_mask, const RansacConfig& cfg, std::mt19937_64& rng) {
    if (ellseg_mask ? !is_valid_ellseg(mask) : !is_valid_partseg(mask)) {
        GroundTruthRecord rec;
        rec.pupil_failure = rec.iris_failure = "invalid_mask";
        return rec;
    }
    return ellseg_mask ? ellseg_to_ellipses(mask, cfg, rng) : partseg_to_ellipses(mask, cfg, rng);
}

// ---- subcommands ----------------------------------------------------------

struct GenGt {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    RansacOptions ransac;

    int operator()(std::ostream& out) const {
        const RansacConfig cfg = ransac.config();
        const fs::path in(input);
        const fs::path dst(output);
        std::vector<Json> rows;
        std::size_t discarded = 0, pupil_invalid = 0, iris_invalid = 0, invalid_masks = 0;
        const auto files = inputs(in, ".png");
        for (std::size_t i = 0; i < files.size(); ++i) {
            const auto& [key, path] = files[i];
            const ClassGrid mask = io::read_png(path);
            auto rng = derive_rng(seed, {i});
            const GroundTruthRecord rec = fit_mask(mask, false, cfg, rng);
            if (!is_valid_partseg(mask)) ++invalid_masks;
            if (!rec.pupil_valid()) ++pupil_invalid;
            if (!rec.iris_valid()) ++iris_invalid;
            if (rec.pupil_valid() && rec.iris_valid()) {
                io::write_png(dst / "ellseg" / key, ellipses_to_ellseg(*rec.pupil, *rec.iris, mask.width(), mask.height()));
            } else {
                ++discarded;
            }
            rows.push_back(json::record_to_json(key, rec));
        }
        io::write_text(dst / "gt.jsonl", jsonl(rows));
        Json summary;
        summary["images"] = files.size();
        summary["discarded"] = discarded;
        summary["pupil_invalid"] = pupil_invalid;
        summary["iris_invalid"] = iris_invalid;
        summary["invalid_masks"] = invalid_masks;
        summary["seed"] = seed;
        io::write_text(dst / "summary.json", dump(summary));
        out << dump(summary);
        return kOk;
    }
};

struct Fit {
    std::string input;
    std::string output;
    std::string kind = "partseg";
    std::uint64_t seed = 0;
    RansacOptions ransac;

    int operator()(std::ostream& out) const {
        if (kind != "partseg" && kind != "ellseg") throw UsageError("--kind must be partseg or ellseg");
        const RansacConfig cfg = ransac.config();
        Json rows = Json::array();
        const auto files = inputs(input, ".png");
        for (std::size_t i = 0; i < files.size(); ++i) {
            auto rng = derive_rng(seed, {i});
            rows.push_back(json::record_to_json(files[i].first, fit_mask(io::read_png(files[i].second), kind == "ellseg", cfg, rng)));
        }
        if (output.empty()) {
            out << dump(rows);
        } else {
            io::write_text(output, dump(rows));
        }
        return kOk;
    }
};

struct Centers {
    std::string input;
    std::string output;
    double beta = kDefaultBeta;

    int operator()(std::ostream& out) const {
        if (!(beta > 0.0)) throw UsageError("--beta must be positive");
        Json rows = Json::array();
        for (const auto& [key, path] : inputs(input, ".f32")) {
            const ProbMaps maps = io::read_prob_maps(path);
            const EllSegCenters c = ellseg_centers(maps, beta);
            rows.push_back(Json{{"path", key}, {"pupil_center", json::to_json(c.pupil)}, {"iris_center", json::to_json(c.iris)}});
        }
        if (output.empty()) {
            out << dump(rows);
        } else {
            io::write_text(output, dump(rows));
        }
        return kOk;
    }
};

struct Eval {
    std::string pred;
    std::string gt;
    std::string pred_masks;
    std::string gt_masks;
    std::string output;
    int classes = ellseg_classes::kNumClasses;

    int operator()(std::ostream& out) const {
        if ((pred_masks.empty()) != (gt_masks.empty())) throw UsageError("--pred-masks and --gt-masks go together");
        std::map<std::string, GroundTruthRecord> predictions;
        for (auto& r : read_record_file(pred)) predictions[r.key] = std::move(r.record);
        std::vector<EvalSample> samples;
        for (const auto& g : read_record_file(gt)) {
            EvalSample s;
            s.key = g.key;
            s.gt_pupil = g.record.pupil;
            s.gt_iris = g.record.iris;
            s.gt_pupil_center = g.record.pupil_center;
            if (auto it = predictions.find(g.key); it != predictions.end()) {
                s.pred_pupil = it->second.pupil;
                s.pred_iris = it->second.iris;
                s.pred_pupil_center = it->second.pupil_center;
            }
            if (!gt_masks.empty()) {
                const ClassGrid gm = io::read_png(fs::path(gt_masks) / g.key);
                const ClassGrid pm = io::read_png(fs::path(pred_masks) / g.key);
                if (!gm.same_shape(pm)) throw io::SchemaError("mask size mismatch for " + g.key);
                s.segmentation = iou(pm, gm, classes);
            }
            samples.push_back(std::move(s));
        }
        const MetricsReport report = build_report(samples, classes);
        const fs::path dst(output);
        io::write_text(dst / "metrics.json", dump(json::report_to_json(report)));
        io::write_text(dst / "pupil_detection.csv", json::curve_to_csv(report.pupil_detection));
        io::write_text(dst / "iris_detection.csv", json::curve_to_csv(report.iris_detection));
        out << dump(Json{{"images", report.image_count},
                         {"miou", report.miou ? json::number(*report.miou) : Json(nullptr)},
                         {"model_selection_score", json::number(report.selection_score)}});
        return kOk;
    }
};

struct LossCheck {
    std::string maps;
    std::string mask;
    std::string centers;
    std::string output;
    int epoch = 0;
    int epochs = 1;
    double beta = kDefaultBeta;

    int operator()(std::ostream& out) const {
        if (!(beta > 0.0)) throw UsageError("--beta must be positive");
        if (epochs <= 0 || epoch < 0 || epoch > epochs) throw UsageError("need 0 <= --epoch <= --epochs and --epochs > 0");
        const ProbMaps logits = io::read_prob_maps(maps);
        const ClassGrid labels = io::read_png(mask);
        if (!is_valid_ellseg(labels)) throw io::SchemaError("labels must hold EllSeg classes 0..2");
        if (labels.width() != logits.width() || labels.height() != logits.height()) {
            throw io::SchemaError("mask and tensor sizes differ");
        }
        const LossWeights w = LossWeights::schedule(epoch, epochs);
        const SegLossBreakdown seg = seg_loss_breakdown(logits, labels, w);
        Json result;
        result["width"] = labels.width();
        result["height"] = labels.height();
        result["epoch"] = epoch;
        result["epochs"] = epochs;
        result["lambda"] = Json::array({json::number(w.lambda1), json::number(w.lambda2), json::number(w.lambda3),
                                        json::number(w.lambda4)});
        result["cross_entropy"] = json::number(seg.cross_entropy);
        result["boundary_weighted_cross_entropy"] = json::number(seg.weighted_cross_entropy);
        result["generalized_dice"] = json::number(seg.dice);
        result["surface"] = json::number(seg.surface);
        result["seg_loss"] = json::number(seg.total);
        if (!centers.empty()) {
            Json c;
            try {
                c = Json::parse(io::read_text(centers));
            } catch (const nlohmann::json::exception& e) {
                throw io::SchemaError(std::string("centers file: ") + e.what());
            }
            if (!c.is_object() || !c.contains("pupil")) throw io::SchemaError("centers file needs a 'pupil' point");
            const Point pupil = json::point_from_json(c["pupil"]);
            std::optional<Point> iris;
            if (c.contains("iris") && !c["iris"].is_null()) iris = json::point_from_json(c["iris"]);
            result["beta"] = json::number(beta);
            result["com_loss"] = json::number(com_loss(logits, pupil, iris, beta));
        } else {
            result["com_loss"] = nullptr;
        }
        if (output.empty()) {
            out << dump(result);
        } else {
            io::write_text(output, dump(result));
        }
        return kOk;
    }
};

struct Augment {
    std::string input;
    std::string output;
    std::string mask_dir = "partseg";
    std::uint64_t seed = 0;
    int count = 1;

    int operator()(std::ostream& out) const {
        if (count <= 0) throw UsageError("--count must be positive");
        const fs::path in(input);
        const fs::path dst(output);
        std::map<std::string, std::vector<Point>> centers;
        if (fs::is_regular_file(in / "gt.jsonl")) {
            for (const auto& r : json::read_records(io::read_text(in / "gt.jsonl"))) {
                std::vector<Point> c;
                if (r.record.pupil_center) c.push_back(*r.record.pupil_center);
                if (r.record.iris) c.push_back(r.record.iris->center());
                centers[r.key] = c;
            }
        }
        Json log = Json::array();
        const auto images = list_files(in / "images", ".png");
        for (std::size_t i = 0; i < images.size(); ++i) {
            const std::string& key = images[i];
            augment::Sample src;
            src.image = io::read_png(in / "images" / key);
            const fs::path mask_path = in / mask_dir / key;
            src.mask = fs::is_regular_file(mask_path) ? io::read_png(mask_path) : ClassGrid(src.image.width(), src.image.height());
            if (!src.mask.same_shape(src.image)) throw io::SchemaError("mask size differs from image for " + key);
            if (auto it = centers.find(key); it != centers.end()) src.centers = it->second;
            const fs::path stem = fs::path(key).replace_extension();
            for (int k = 0; k < count; ++k) {
                auto rng = derive_rng(seed, {i, static_cast<std::uint64_t>(k)});
                const augment::Choice choice = augment::sample_choice(rng);
                const augment::Sample res = augment::apply(src, choice, rng);
                char suffix[32];
                std::snprintf(suffix, sizeof(suffix), "_aug%03d.png", k);
                const std::string name = stem.generic_string() + suffix;
                io::write_png(dst / "images" / name, res.image);
                io::write_png(dst / "masks" / name, res.mask);
                Json entry = json::to_json(choice);
                Json pts = Json::array();
                for (Point p : res.centers) pts.push_back(json::to_json(p));
                log.push_back(Json{{"file", name}, {"source", key}, {"choice", entry["choice"]}, {"params", entry["params"]},
                                   {"centers", pts}});
            }
        }
        io::write_text(dst / "log.json", dump(log));
        out << dump(Json{{"inputs", images.size()}, {"outputs", log.size()}});
        return kOk;
    }
};

struct Synth {
    std::string output;
    std::uint64_t seed = 0;
    int count = 0;
    double aperture = 1.0;
    int batch = 100;

    int operator()(std::ostream& out) const {
        if (count <= 0 || batch <= 0) throw UsageError("--count and --batch must be positive");
        SynthParams params;
        params.aperture = aperture;
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        const fs::path dst(output);
        std::vector<Json> rows;
        Json entries = Json::array();
        for (int i = 0; i < count; ++i) {
            auto rng = derive_rng(seed, {static_cast<std::uint64_t>(i)});
            const SynthEye eye = synth_eye(params, rng);
            char name[32];
            std::snprintf(name, sizeof(name), "%05d.png", i);
            io::write_png(dst / "images" / name, eye.image);
            io::write_png(dst / "partseg" / name, eye.partseg);
            io::write_png(dst / "ellseg" / name, eye.ellseg);
            rows.push_back(json::record_to_json(name, eye.truth));
            entries.push_back(Json{{"image", std::string("images/") + name},
                                   {"mask", std::string("partseg/") + name},
                                   {"pupil_center", json::to_json(*eye.truth.pupil_center)},
                                   {"pupil", json::to_json(*eye.truth.pupil)},
                                   {"iris", json::to_json(*eye.truth.iris)},
                                   {"subset", std::to_string(i / batch)}});
        }
        io::write_text(dst / "gt.jsonl", jsonl(rows));
        Json manifest;
        manifest["root"] = ".";
        manifest["preset"] = "synthetic";
        manifest["seed"] = seed;
        manifest["aperture"] = json::number(aperture);
        manifest["entries"] = entries;
        io::write_text(dst / "manifest.json", dump(manifest));
        out << dump(Json{{"images", count}, {"seed", seed}});
        return kOk;
    }
};

struct OcclusionExp {
    std::string output;
    std::uint64_t seed = 0;
    int n = 200;
    std::vector<double> apertures{1.0, 0.8, 0.6, 0.5, 0.4};
    RansacOptions ransac;

    int operator()(std::ostream& out) const {
        if (n <= 0) throw UsageError("--n must be positive");
        for (double a : apertures) {
            if (!(a > 0.0 && a <= 1.0)) throw UsageError("apertures must lie in (0, 1]");
        }
        const std::string csv = json::occlusion_to_csv(occlusion_experiment(n, apertures, seed, {}, ransac.config()));
        if (output.empty()) {
            out << csv;
        } else {
            io::write_text(output, csv);
        }
        return kOk;
    }
};

struct SplitCmd {
    std::string manifest;
    std::string output;
    std::uint64_t seed = 0;
    dataset::SplitConfig config;

    int operator()(std::ostream& out, std::ostream& err) const {
        const dataset::Manifest m = dataset::read_manifest(manifest);
        const dataset::LoadResult loaded = dataset::load_dataset(m);
        for (const std::string& w : loaded.warnings) err << Json{{"warning", w}}.dump() << "\n";
        std::vector<dataset::SplitItem> items;
        std::vector<std::string> keys;
        std::size_t without_center = 0;
        for (const dataset::Record& r : loaded.records) {
            if (!r.pupil_center) {
                ++without_center;
                continue;
            }
            items.push_back({*r.pupil_center, r.subset});
            keys.push_back(r.key);
        }
        const dataset::Split split = dataset::stratified_split(items, config, seed);
        Json result;
        Json train = Json::array();
        Json validation = Json::array();
        for (std::size_t i : split.train) train.push_back(keys[i]);
        for (std::size_t i : split.validation) validation.push_back(keys[i]);
        result["seed"] = seed;
        result["train"] = train;
        result["validation"] = validation;
        result["dropped"] = split.dropped;
        result["skipped"] = m.entries.size() - loaded.records.size() + without_center;
        if (output.empty()) {
            out << dump(result);
        } else {
            io::write_text(output, dump(result));
        }
        return kOk;
    }
};

int report(std::ostream& err, int code, const std::string& kind, const std::string& message) {
    err << Json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ellipse ground truth, center, loss and metric toolkit for eye segmentation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "1.0.0");

    GenGt gen_gt;
    auto* c_gen = app.add_subcommand("gen-gt", "fit ellipses to PartSeg masks; write JSONL records and EllSeg masks");
    c_gen->add_option("--input", gen_gt.input, "PartSeg mask file or directory")->required();
    c_gen->add_option("--output", gen_gt.output, "output directory")->required();
    c_gen->add_option("--seed", gen_gt.seed, "RANSAC seed")->required();
    gen_gt.ransac.attach(c_gen);

    Fit fit;
    auto* c_fit = app.add_subcommand("fit", "fit pupil and iris ellipses to masks");
    c_fit->add_option("--input", fit.input, "mask file or directory")->required();
    c_fit->add_option("--output", fit.output, "JSON output (default: stdout)");
    c_fit->add_option("--kind", fit.kind, "partseg or ellseg")->capture_default_str();
    c_fit->add_option("--seed", fit.seed, "RANSAC seed")->required();
    fit.ransac.attach(c_fit);

    Centers centers;
    auto* c_centers = app.add_subcommand("centers", "soft-argmax pupil and iris centers from activation tensors");
    c_centers->add_option("--input", centers.input, "tensor file (.f32) or directory")->required();
    c_centers->add_option("--output", centers.output, "JSON output (default: stdout)");
    c_centers->add_option("--beta", centers.beta, "softmax temperature")->capture_default_str();

    Eval eval;
    auto* c_eval = app.add_subcommand("eval", "score predictions against ground truth");
    c_eval->add_option("--pred", eval.pred, "predicted records (JSONL or JSON array)")->required();
    c_eval->add_option("--gt", eval.gt, "ground-truth records")->required();
    c_eval->add_option("--pred-masks", eval.pred_masks, "directory of predicted class masks");
    c_eval->add_option("--gt-masks", eval.gt_masks, "directory of ground-truth class masks");
    c_eval->add_option("--classes", eval.classes, "number of mask classes")->capture_default_str();
    c_eval->add_option("--output", eval.output, "output directory")->required();

    LossCheck loss;
    auto* c_loss = app.add_subcommand("loss-check", "evaluate every loss term on an activation tensor");
    c_loss->add_option("--maps", loss.maps, "activation tensor (.f32 with .json sidecar)")->required();
    c_loss->add_option("--mask", loss.mask, "EllSeg label mask")->required();
    c_loss->add_option("--centers", loss.centers, "JSON {pupil: [x, y], iris: [x, y] | null}");
    c_loss->add_option("--epoch", loss.epoch, "current epoch")->capture_default_str();
    c_loss->add_option("--epochs", loss.epochs, "total epochs M")->capture_default_str();
    c_loss->add_option("--beta", loss.beta, "softmax temperature")->capture_default_str();
    c_loss->add_option("--output", loss.output, "JSON output (default: stdout)");

    Augment aug;
    auto* c_aug = app.add_subcommand("augment", "write augmented copies of a corpus with a JSON log");
    c_aug->add_option("--input", aug.input, "corpus directory with images/ and a mask directory")->required();
    c_aug->add_option("--output", aug.output, "output directory")->required();
    c_aug->add_option("--mask-dir", aug.mask_dir, "mask subdirectory")->capture_default_str();
    c_aug->add_option("--seed", aug.seed, "augmentation seed")->required();
    c_aug->add_option("--count", aug.count, "augmented copies per image")->capture_default_str();

    Synth synth;
    auto* c_synth = app.add_subcommand("synth", "render synthetic eyes with analytic ground truth");
    c_synth->add_option("--output", synth.output, "output directory")->required();
    c_synth->add_option("--seed", synth.seed, "generator seed")->required();
    c_synth->add_option("--count", synth.count, "number of images")->required();
    c_synth->add_option("--aperture", synth.aperture, "visible fraction of the iris height")->capture_default_str();
    c_synth->add_option("--batch", synth.batch, "images per subset id")->capture_default_str();

    OcclusionExp occ;
    auto* c_occ = app.add_subcommand("occlusion-exp", "PartSeg versus EllSeg fits under eyelid occlusion");
    c_occ->add_option("--output", occ.output, "CSV output (default: stdout)");
    c_occ->add_option("--seed", occ.seed, "generator seed")->required();
    c_occ->add_option("--n", occ.n, "eyes per aperture")->capture_default_str();
    c_occ->add_option("--apertures", occ.apertures, "aperture levels")->delimiter(',')->capture_default_str();
    occ.ransac.attach(c_occ);

    SplitCmd split;
    auto* c_split = app.add_subcommand("split", "stratified train/validation split of a manifest");
    c_split->add_option("--manifest", split.manifest, "dataset manifest")->required();
    c_split->add_option("--output", split.output, "JSON output (default: stdout)");
    c_split->add_option("--seed", split.seed, "shuffle seed")->required();
    c_split->add_option("--ratio", split.config.ratio, "training fraction")->capture_default_str();
    c_split->add_option("--bins-x", split.config.bins_x, "horizontal center bins")->capture_default_str();
    c_split->add_option("--bins-y", split.config.bins_y, "vertical center bins")->capture_default_str();
    c_split->add_option("--min-bin", split.config.min_bin, "smallest kept bin")->capture_default_str();

    if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
        const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args.front(); });
        if (!known) return report(err, kUsage, "unknown_subcommand", "unknown subcommand '" + args.front() + "'");
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        return report(err, kUsage, "usage", e.what());
    }

    try {
        if (c_gen->parsed()) return gen_gt(out);
        if (c_fit->parsed()) return fit(out);
        if (c_centers->parsed()) return centers(out);
        if (c_eval->parsed()) return eval(out);
        if (c_loss->parsed()) return loss(out);
        if (c_aug->parsed()) return aug(out);
        if (c_synth->parsed()) return synth(out);
        if (c_occ->parsed()) return occ(out);
        if (c_split->parsed()) return split(out, err);
        return report(err, kUsage, "usage", "no subcommand");
    } catch (const UsageError& e) {
        return report(err, kUsage, "usage", e.what());
    } catch (const io::ReadError& e) {
        return report(err, kUnreadable, "unreadable_input", e.what());
    } catch (const fs::filesystem_error& e) {
        return report(err, kUnreadable, "unreadable_input", e.what());
    } catch (const io::SchemaError& e) {
        return report(err, kSchema, "schema", e.what());
    } catch (const ShapeMismatch& e) {
        return report(err, kSchema, "schema", e.what());
    } catch (const std::exception& e) {
        return report(err, kFailure, "failure", e.what());
    }
}

}  // namespace ellseg::cli
