// Command-line surface: fixture synthesis, encoding, post-processing,
// evaluation, the invariance report and the self-check suites.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seine/encodings.hpp"
#include "seine/invariance.hpp"
#include "seine/io.hpp"
#include "seine/postproc.hpp"
#include "seine/selfcheck.hpp"
#include "seine/synth.hpp"

namespace {

seine::ShapeFamily parse_shape(const std::string& name) {
    if (name == "disk") return seine::ShapeFamily::disk;
    if (name == "ellipse") return seine::ShapeFamily::ellipse;
    return seine::ShapeFamily::square;
}

void emit_json(const nlohmann::ordered_json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path);
        if (!out) throw seine::IoError("cannot open " + path);
        out << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEINE structure-encoding toolkit"};
    app.require_subcommand(1);

    // --- synth ---------------------------------------------------------
    seine::FixtureSpec spec;
    std::string shape_name = "disk";
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate a synthetic label map");
    synth->add_option("--height", spec.height)->capture_default_str();
    synth->add_option("--width", spec.width)->capture_default_str();
    synth->add_option("--count", spec.instance_count)->capture_default_str();
    synth->add_option("--shape", shape_name, "disk|ellipse|square")
        ->check(CLI::IsMember({"disk", "ellipse", "square"}));
    synth->add_option("--rmin", spec.radius_min)->capture_default_str();
    synth->add_option("--rmax", spec.radius_max)->capture_default_str();
    synth->add_option("--gap", spec.min_gap, "background pixels between instances")
        ->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();
    synth->add_option("--out", synth_out, "output PGM path")->required();

    // --- encode --------------------------------------------------------
    std::string encode_in, encode_method, encode_out;
    int dir_classes = 8;
    std::optional<double> bg_cap;
    auto* encode = app.add_subcommand("encode", "derive an encoding from a label map");
    encode->add_option("--in", encode_in, "input label map (PGM)")->required();
    encode->add_option("--method", encode_method, "se|hv|dir|pos")
        ->required()
        ->check(CLI::IsMember({"se", "hv", "dir", "pos"}));
    encode->add_option("--out", encode_out, "output path (SEF1, or PGM for dir)")->required();
    encode->add_option("--dir-classes", dir_classes, "direction class count K")
        ->capture_default_str();
    encode->add_option("--bg-cap", bg_cap,
                       "background normalization cap (default: global max distance)");

    // --- postprocess ---------------------------------------------------
    std::string pp_semantic, pp_structure, pp_out;
    seine::PostprocConfig pcfg;
    auto* post = app.add_subcommand("postprocess", "fuse semantic and structure predictions");
    post->add_option("--semantic", pp_semantic, "3-class semantic mask (PGM)")->required();
    post->add_option("--structure", pp_structure, "structure field (SEF1)")->required();
    post->add_option("--out", pp_out, "output label map (PGM)")->required();
    post->add_option("--tp", pcfg.t_p)->capture_default_str();
    post->add_option("--tn", pcfg.t_n)->capture_default_str();
    post->add_option("--connectivity", pcfg.connectivity)->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    post->add_option("--min-area", pcfg.min_instance_area)->capture_default_str();

    // --- evaluate ------------------------------------------------------
    std::string eval_pred, eval_gt, eval_json;
    auto* eval = app.add_subcommand("evaluate", "score a prediction against ground truth");
    eval->add_option("--pred", eval_pred, "predicted label map (PGM)")->required();
    eval->add_option("--gt", eval_gt, "ground-truth label map (PGM)")->required();
    eval->add_option("--json", eval_json, "write the report here instead of stdout");

    // --- invariance ----------------------------------------------------
    std::string inv_in, inv_json;
    int inv_dir_classes = 8;
    std::optional<double> inv_bg_cap;
    auto* inv = app.add_subcommand("invariance", "equivariance and relation report");
    inv->add_option("--in", inv_in, "input label map (PGM)")->required();
    inv->add_option("--json", inv_json, "write the report here instead of stdout");
    inv->add_option("--dir-classes", inv_dir_classes)->capture_default_str();
    inv->add_option("--bg-cap", inv_bg_cap);

    // --- selfcheck -----------------------------------------------------
    seine::selfcheck::Options sc_opts;
    auto* check = app.add_subcommand("selfcheck", "run the built-in verification suites");
    check->add_flag("--inject-fault", sc_opts.inject_fault,
                    "corrupt one distance value (negative control)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            spec.shape = parse_shape(shape_name);
            seine::write_pgm(synth_out, seine::synthesize(spec));
        } else if (*encode) {
            const seine::LabelMap labels = seine::read_pgm(encode_in);
            seine::EncodingConfig cfg;
            cfg.dir_class_count = dir_classes;
            cfg.background_norm_cap = bg_cap;
            if (encode_method == "se") {
                seine::write_sef1(encode_out, seine::structure_encoding(labels, cfg));
            } else if (encode_method == "hv") {
                seine::write_sef1(encode_out, seine::hv_encoding(labels));
            } else if (encode_method == "pos") {
                seine::write_sef1(encode_out, seine::position_encoding(labels));
            } else {
                seine::write_pgm(encode_out, seine::dir_encoding(labels, cfg));
            }
        } else if (*post) {
            if (pcfg.t_p <= pcfg.t_n) {
                std::cerr << "error: --tp must be greater than --tn\n";
                return 2;
            }
            const seine::SemanticMask sem = seine::read_semantic_pgm(pp_semantic);
            const seine::ScalarField field = seine::read_sef1(pp_structure);
            seine::write_pgm(pp_out, seine::run_pipeline(sem, field, pcfg));
        } else if (*eval) {
            const seine::LabelMap pred = seine::read_pgm(eval_pred);
            const seine::LabelMap gt = seine::read_pgm(eval_gt);
            emit_json(seine::to_json(seine::evaluate(pred, gt)), eval_json);
        } else if (*inv) {
            const seine::LabelMap labels = seine::read_pgm(inv_in);
            seine::EncodingConfig cfg;
            cfg.dir_class_count = inv_dir_classes;
            cfg.background_norm_cap = inv_bg_cap;

            nlohmann::ordered_json j;
            auto& rows = j["rows"] = nlohmann::ordered_json::array();
            for (const seine::EncoderKind enc :
                 {seine::EncoderKind::se, seine::EncoderKind::hv, seine::EncoderKind::dir,
                  seine::EncoderKind::pos}) {
                for (const seine::RigidTransform t : seine::kAllTransforms) {
                    seine::InvarianceReport row = seine::equivariance_error(enc, labels, t, cfg);
                    if (enc == seine::EncoderKind::se) {
                        row.pipeline_dice_bias =
                            seine::pipeline_bias(labels, t, {}, seine::PipelineKind::se, cfg);
                    } else if (enc == seine::EncoderKind::hv) {
                        row.pipeline_dice_bias =
                            seine::pipeline_bias(labels, t, {}, seine::PipelineKind::hv, cfg);
                    }
                    rows.push_back(seine::to_json(row));
                }
            }
            j["relation"] = seine::to_json(seine::relation_check(labels, cfg));
            emit_json(j, inv_json);
        } else if (*check) {
            const auto results = seine::selfcheck::run_all(sc_opts);
            bool all_passed = true;
            std::printf("%-18s %-6s %8s  %s\n", "suite", "status", "time", "detail");
            for (const auto& r : results) {
                all_passed = all_passed && r.passed;
                std::printf("%-18s %-6s %7.2fs  %s\n", r.name.c_str(),
                            r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
            }
            return all_passed ? 0 : 1;
        }
    } catch (const seine::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
