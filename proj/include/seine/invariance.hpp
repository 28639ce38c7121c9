// Desk-scale invariance laboratory: encoder equivariance under rigid
// transforms, pipeline-level Dice bias, and the relation between the
// structure encoding's gradient field and the HV / direction baselines.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "seine/encodings.hpp"
#include "seine/metrics.hpp"
#include "seine/postproc.hpp"
#include "seine/transforms.hpp"

namespace seine {

enum class EncoderKind { se, hv, dir, pos };

inline const char* to_string(EncoderKind e) {
    switch (e) {
        case EncoderKind::se: return "se";
        case EncoderKind::hv: return "hv";
        case EncoderKind::dir: return "dir";
        case EncoderKind::pos: return "pos";
    }
    return "?";
}

struct InvarianceReport {
    std::string encoder;
    std::string transform;
    double max_abs_error = 0.0;
    double mean_abs_error = 0.0;
    double pipeline_dice_bias = 0.0;
};

/**
 * @brief Error field encode(T(labels)) - T(encode(labels)), summarized.
 *
 * For the scalar encoders the report carries max/mean absolute differences;
 * for the direction encoder both entries hold the fraction of pixels whose
 * class changed.
 */
inline InvarianceReport equivariance_error(EncoderKind encoder, const LabelMap& labels,
                                           RigidTransform t, const EncodingConfig& cfg = {}) {
    InvarianceReport report;
    report.encoder = to_string(encoder);
    report.transform = to_string(t);
    const LabelMap transformed = apply_transform(labels, t);

    if (encoder == EncoderKind::dir) {
        const DirMap direct = dir_encoding(transformed, cfg);
        const DirMap moved = apply_transform(dir_encoding(labels, cfg), t);
        std::int64_t mismatched = 0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            if (direct.cells()[i] != moved.cells()[i]) ++mismatched;
        }
        const double fraction = direct.size() == 0
                                    ? 0.0
                                    : static_cast<double>(mismatched) / static_cast<double>(direct.size());
        report.max_abs_error = fraction;
        report.mean_abs_error = fraction;
        return report;
    }

    ScalarField direct, moved;
    switch (encoder) {
        case EncoderKind::se:
            direct = structure_encoding(transformed, cfg);
            moved = apply_transform(structure_encoding(labels, cfg), t);
            break;
        case EncoderKind::hv:
            direct = hv_encoding(transformed);
            moved = apply_transform(hv_encoding(labels), t);
            break;
        case EncoderKind::pos:
            direct = position_encoding(transformed);
            moved = apply_transform(position_encoding(labels), t);
            break;
        default: break;
    }
    double max_err = 0.0, sum_err = 0.0;
    for (std::size_t i = 0; i < direct.values.size(); ++i) {
        const double err = std::abs(direct.values[i] - moved.values[i]);
        max_err = std::max(max_err, err);
        sum_err += err;
    }
    report.max_abs_error = max_err;
    report.mean_abs_error = direct.values.empty() ? 0.0 : sum_err / static_cast<double>(direct.values.size());
    return report;
}

/// Which encoder drives the separator in the desk-scale pipeline.
enum class PipelineKind { se, hv };

/// Separator candidates from an HV field: pixels where the absolute
/// divergence of the two channels exceeds the threshold.
inline BinaryMask contour_from_hv(const ScalarField& hv, double threshold = 0.4) {
    if (hv.channels != 2) {
        throw DimensionMismatch("contour_from_hv: expected a 2-channel field");
    }
    BinaryMask out(hv.height, hv.width, 0);
    auto value = [&](int r, int c, int ch) {
        return (r < 0 || r >= hv.height || c < 0 || c >= hv.width) ? 0.0 : hv.at(r, c, ch);
    };
    for (int r = 0; r < hv.height; ++r) {
        for (int c = 0; c < hv.width; ++c) {
            const double div = 0.5 * (value(r, c + 1, 0) - value(r, c - 1, 0)) +
                               0.5 * (value(r + 1, c, 1) - value(r - 1, c, 1));
            out.at(r, c) = std::abs(div) > threshold ? 1 : 0;
        }
    }
    return out;
}

namespace detail {

inline double pipeline_dice(const SemanticMask& sem, const ScalarField& field,
                            const LabelMap& gt, PipelineKind kind, const PostprocConfig& cfg) {
    LabelMap result = kind == PipelineKind::se
                          ? run_pipeline(sem, field, cfg)
                          : fuse_and_label(sem, contour_from_hv(field), cfg);
    return dice_score(result, gt);
}

}  // namespace detail

/**
 * @brief Dice bias of the deterministic encode-and-postprocess pipeline under
 *        a rigid transform of its inputs.
 *
 * The transformed run consumes the moved encoding field (grid moved, channels
 * untouched) — the output a perfectly transform-covariant predictor would
 * produce — so an encoder whose definition is direction-dependent shows a
 * nonzero bias while the structure encoding shows exactly zero.
 */
inline double pipeline_bias(const LabelMap& labels, RigidTransform t,
                            const PostprocConfig& cfg = {}, PipelineKind kind = PipelineKind::se,
                            const EncodingConfig& ecfg = {}) {
    const SemanticMask sem = semantic_from_labels(labels);
    const ScalarField field =
        kind == PipelineKind::se ? structure_encoding(labels, ecfg) : hv_encoding(labels);

    const double base = detail::pipeline_dice(sem, field, labels, kind, cfg);
    const double transformed = detail::pipeline_dice(
        apply_transform(sem, t), apply_transform(field, t), apply_transform(labels, t), kind, cfg);
    return transformed - base;
}

struct RelationReport {
    double corr_h = 0.0;         ///< Pearson corr of outward SE h-gradient vs HV channel 0
    double corr_v = 0.0;         ///< Pearson corr of outward SE v-gradient vs HV channel 1
    double dir_agreement = 0.0;  ///< fraction of interior pixels whose quantized
                                 ///< SE-gradient angle matches the Dir class
    std::int64_t sample_count = 0;
};

namespace detail {

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

/**
 * @brief Gradient-level relation between the structure encoding and the
 *        centroid-based baselines.
 *
 * Central differences of the SE field are taken over inside pixels only and
 * oriented outward (toward descending SE), the direction the centrifugal
 * baselines encode. Requires at least one instance whose interior contains a
 * 3x3 block.
 */
inline RelationReport relation_check(const LabelMap& labels, const EncodingConfig& cfg = {}) {
    const SemanticMask sem = semantic_from_labels(labels);
    BinaryMask inside(labels.height(), labels.width(), 0);
    for (std::size_t i = 0; i < sem.size(); ++i) {
        inside.cells()[i] = sem.cells()[i] == kInside ? 1 : 0;
    }
    bool big_enough = false;
    if (labels.height() >= 3 && labels.width() >= 3) {
        for (std::uint8_t v : erode(inside, 1).cells()) {
            if (v) {
                big_enough = true;
                break;
            }
        }
    }
    if (!big_enough) {
        throw TooSmallInstance("relation_check: no instance has a 3x3 interior block");
    }

    const ScalarField se = structure_encoding(labels, cfg);
    const ScalarField hv = hv_encoding(labels);
    const DirMap dir = dir_encoding(labels, cfg);

    std::vector<double> grad_h, grad_v, hv_h, hv_v;
    std::int64_t agree = 0, total = 0;
    const int k = cfg.dir_class_count;
    const double two_pi = 2.0 * M_PI;
    for (int r = 0; r < labels.height(); ++r) {
        for (int c = 0; c < labels.width(); ++c) {
            if (!inside.at(r, c)) continue;
            // Inside pixels have all 8 neighbours on the same instance, so
            // the central differences only read well-defined SE values.
            const double gh = -0.5 * (se.at(r, c + 1) - se.at(r, c - 1));
            const double gv = -0.5 * (se.at(r + 1, c) - se.at(r - 1, c));
            grad_h.push_back(gh);
            grad_v.push_back(gv);
            hv_h.push_back(hv.at(r, c, 0));
            hv_v.push_back(hv.at(r, c, 1));

            int cls = 1;
            if (gh != 0.0 || gv != 0.0) {
                double theta = std::atan2(gv, gh);
                if (theta < 0.0) theta += two_pi;
                int bin = static_cast<int>(std::floor(theta / (two_pi / k)));
                if (bin >= k) bin = k - 1;
                cls = bin + 1;
            }
            if (cls == dir.at(r, c)) ++agree;
            ++total;
        }
    }

    RelationReport report;
    report.corr_h = detail::pearson(grad_h, hv_h);
    report.corr_v = detail::pearson(grad_v, hv_v);
    report.dir_agreement = total == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(total);
    report.sample_count = total;
    return report;
}

}  // namespace seine
