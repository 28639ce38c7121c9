// Built-in verification suites: encoding oracle, equivariance, round trip,
// post-processing defaults, loss gradients, attention invariants, metrics
// oracle and the encoding-relation check. The CLI selfcheck command and the
// acceptance harness both run these.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "seine/attention.hpp"
#include "seine/encodings.hpp"
#include "seine/invariance.hpp"
#include "seine/losses.hpp"
#include "seine/metrics.hpp"
#include "seine/postproc.hpp"
#include "seine/reference.hpp"
#include "seine/rng.hpp"
#include "seine/synth.hpp"
#include "seine/transforms.hpp"

namespace seine::selfcheck {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    /// Test hook: perturb one production distance value so the encoding
    /// oracle suite must fail (negative control for the exit code).
    bool inject_fault = false;
};

namespace detail {

inline FixtureSpec varied_spec(std::uint64_t seed) {
    FixtureSpec spec;
    spec.seed = seed;
    spec.shape = static_cast<ShapeFamily>(seed % 3);
    spec.height = 48 + static_cast<int>(seed % 17);        // 48..64
    spec.width = 48 + static_cast<int>((seed / 5) % 17);   // 48..64
    spec.instance_count = 3 + static_cast<int>(seed % 3);  // 3..5
    spec.radius_min = 3.0;
    spec.radius_max = 6.0;
    spec.min_gap = 2;
    return spec;
}

inline LabelMap centered_disk(int size, double radius) {
    LabelMap labels(size, size, 0);
    const int center = size / 2;
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const double dr = r - center, dc = c - center;
            if (dr * dr + dc * dc <= radius * radius) labels.at(r, c) = 1;
        }
    }
    return labels;
}

/// Deterministic degraded prediction for metric checks: instances are kept,
/// shifted, dropped or split, and a spurious blob is sometimes added.
inline LabelMap perturb_labels(const LabelMap& gt, std::uint64_t seed) {
    DetRng rng(seed);
    const int h = gt.height(), w = gt.width();
    LabelMap pred(h, w, 0);
    std::int32_t next_id = 0;
    for (const InstanceStats& s : collect_instance_stats(gt)) {
        next_id = std::max(next_id, s.id);
    }
    for (const InstanceStats& s : collect_instance_stats(gt)) {
        const int mode = rng.uniform_int(0, 3);
        if (mode == 2) continue;  // dropped instance
        int dr = 0, dc = 0;
        if (mode == 1) {
            dr = rng.uniform_int(-2, 2);
            dc = rng.uniform_int(-2, 2);
        }
        const int split_row = (s.min_row + s.max_row) / 2;
        const std::int32_t split_id = ++next_id;
        for (int r = s.min_row; r <= s.max_row; ++r) {
            for (int c = s.min_col; c <= s.max_col; ++c) {
                if (gt.at(r, c) != s.id) continue;
                const int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                pred.at(rr, cc) = (mode == 3 && r > split_row) ? split_id : s.id;
            }
        }
    }
    if (rng.uniform01() < 0.3) {
        const std::int32_t blob_id = ++next_id;
        const int r0 = rng.uniform_int(0, h - 3), c0 = rng.uniform_int(0, w - 3);
        for (int r = r0; r < r0 + 3; ++r) {
            for (int c = c0; c < c0 + 3; ++c) pred.at(r, c) = blob_id;
        }
    }
    return pred;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    return worst;
}

template <typename Fn>
SuiteResult timed(const std::string& name, Fn&& body) {
    SuiteResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::ostringstream detail;
        result.passed = body(detail);
        result.detail = detail.str();
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace detail

/// Suite 1: production SE/position distances vs the brute-force scan,
/// 200 random fixtures, tolerance 1e-9 per pixel.
inline SuiteResult run_encoding_oracle(const Options& opts = {}) {
    return detail::timed("encoding_oracle", [&](std::ostringstream& out) {
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            const LabelMap labels = synthesize(detail::varied_spec(seed));
            ScalarField se = structure_encoding(labels);
            if (opts.inject_fault && seed == 1) {
                se.values[0] += 1e-6;  // negative-control corruption
            }
            worst = std::max(worst, detail::max_abs_diff(se, reference::structure_encoding(labels)));
            worst = std::max(worst,
                             detail::max_abs_diff(position_encoding(labels),
                                                  reference::position_encoding(labels)));
            if (worst > 1e-9) {
                out << "fixture seed " << seed << ": max deviation " << worst;
                return false;
            }
        }
        out << "200 fixtures, max deviation " << worst;
        return true;
    });
}

/// Suite 2: SE and position exactly equivariant under all six transforms;
/// HV error exceeds 0.1 for some transform on every non-symmetric fixture.
inline SuiteResult run_equivariance() {
    return detail::timed("equivariance", [](std::ostringstream& out) {
        for (std::uint64_t seed = 300; seed < 312; ++seed) {
            FixtureSpec spec = detail::varied_spec(seed);
            spec.shape = (seed % 2) ? ShapeFamily::ellipse : ShapeFamily::disk;
            const LabelMap labels = synthesize(spec);
            double hv_worst = 0.0;
            for (RigidTransform t : kAllTransforms) {
                const auto se = equivariance_error(EncoderKind::se, labels, t);
                const auto pos = equivariance_error(EncoderKind::pos, labels, t);
                if (se.max_abs_error != 0.0 || pos.max_abs_error != 0.0) {
                    out << "seed " << seed << " " << to_string(t) << ": se err "
                        << se.max_abs_error << ", pos err " << pos.max_abs_error;
                    return false;
                }
                if (t != RigidTransform::identity) {
                    hv_worst = std::max(
                        hv_worst, equivariance_error(EncoderKind::hv, labels, t).max_abs_error);
                }
            }
            if (hv_worst <= 0.1) {
                out << "seed " << seed << ": HV max error " << hv_worst << " not > 0.1";
                return false;
            }
        }
        out << "12 fixtures x 6 transforms";
        return true;
    });
}

/// Suite 3: ground truth -> semantic + SE -> pipeline recovers the label map
/// exactly (AJI 1.0) on 100 fixtures with >= 2 px gaps.
inline SuiteResult run_round_trip() {
    return detail::timed("round_trip", [](std::ostringstream& out) {
        for (std::uint64_t seed = 400; seed < 500; ++seed) {
            const LabelMap labels = synthesize(detail::varied_spec(seed));
            const LabelMap recovered =
                run_pipeline(semantic_from_labels(labels), structure_encoding(labels));
            const double aji = aji_score(recovered, labels);
            if (aji != 1.0) {
                out << "fixture seed " << seed << ": AJI " << aji;
                return false;
            }
        }
        out << "100/100 fixtures at AJI 1.0";
        return true;
    });
}

/// Suite 4: with the default t_p/t_n band, thresholding the ground-truth SE
/// field recovers exactly the contour pixel set.
inline SuiteResult run_postproc_defaults() {
    return detail::timed("postproc_defaults", [](std::ostringstream& out) {
        EncodingConfig ecfg;
        ecfg.background_norm_cap = 16.0;  // image-size-independent band scale
        for (std::uint64_t seed = 500; seed < 600; ++seed) {
            const LabelMap labels = synthesize(detail::varied_spec(seed));
            const BinaryMask band = contour_from_structure(structure_encoding(labels, ecfg));
            const SemanticMask sem = semantic_from_labels(labels);
            for (std::size_t i = 0; i < band.size(); ++i) {
                const bool expected = sem.cells()[i] == kContour;
                if (static_cast<bool>(band.cells()[i]) != expected) {
                    out << "fixture seed " << seed << ": band/contour mismatch at cell " << i;
                    return false;
                }
            }
        }
        out << "100 fixtures, band == contour set";
        return true;
    });
}

namespace detail {

template <typename LossFn>
bool gradient_matches(const LossFn& loss_fn, ScalarField& pred, const ScalarField& analytic,
                      double step, double tol) {
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const double saved = pred.values[i];
        pred.values[i] = saved + step;
        const double hi = loss_fn(pred);
        pred.values[i] = saved - step;
        const double lo = loss_fn(pred);
        pred.values[i] = saved;
        const double fd = (hi - lo) / (2.0 * step);
        const double a = analytic.values[i];
        const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1.0});
        if (rel >= tol) return false;
    }
    return true;
}

inline ProbField random_prob_field(DetRng& rng, int h, int w, int classes) {
    ProbField field(h, w, classes);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double sum = 0.0;
            for (int ch = 0; ch < classes; ++ch) {
                const double e = std::exp(rng.normal());
                field.at(r, c, ch) = e;
                sum += e;
            }
            for (int ch = 0; ch < classes; ++ch) field.at(r, c, ch) /= sum;
        }
    }
    return field;
}

inline SemanticMask random_classes(DetRng& rng, int h, int w, int classes) {
    SemanticMask mask(h, w, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            mask.at(r, c) = static_cast<std::uint8_t>(rng.uniform_int(0, classes - 1));
        }
    }
    return mask;
}

}  // namespace detail

/// Suite 5: analytic CE/Dice/MSE gradients vs central finite differences,
/// 100 random seeds each, relative error < 1e-4 at step 1e-5.
inline SuiteResult run_gradient_suite() {
    return detail::timed("gradients", [](std::ostringstream& out) {
        const double step = 1e-5, tol = 1e-4;
        const int h = 4, w = 4, classes = 3;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            DetRng rng(seed * 7919);
            ProbField pred = detail::random_prob_field(rng, h, w, classes);
            const SemanticMask target = detail::random_classes(rng, h, w, classes);

            const LossConfig cfg;
            if (!detail::gradient_matches(
                    [&](const ProbField& p) { return cross_entropy(p, target, cfg).loss; }, pred,
                    cross_entropy(pred, target, cfg).grad, step, tol)) {
                out << "cross_entropy gradient mismatch at seed " << seed;
                return false;
            }
            if (!detail::gradient_matches(
                    [&](const ProbField& p) { return dice_loss(p, target, cfg).loss; }, pred,
                    dice_loss(pred, target, cfg).grad, step, tol)) {
                out << "dice_loss gradient mismatch at seed " << seed;
                return false;
            }

            ScalarField a(h, w, 2), b(h, w, 2);
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                a.values[i] = rng.normal();
                b.values[i] = rng.normal();
            }
            if (!detail::gradient_matches([&](const ScalarField& p) { return mse(p, b).loss; }, a,
                                          mse(a, b).grad, step, tol)) {
                out << "mse gradient mismatch at seed " << seed;
                return false;
            }
        }
        out << "CE/Dice/MSE x 100 seeds";
        return true;
    });
}

/// Suite 6: attention row-stochasticity, two-pass reachability, and exact
/// full-vs-criss agreement on line grids.
inline SuiteResult run_attention_invariants() {
    return detail::timed("attention", [](std::ostringstream& out) {
        DetRng rng(20240601);
        auto random_map = [&](int h, int w, int c) {
            FeatureMap m(h, w, c);
            for (double& v : m.values) v = rng.normal();
            return m;
        };

        // Row-stochasticity of both attention forms.
        {
            const FeatureMap q = random_map(5, 4, 3), k = random_map(5, 4, 3);
            const FeatureMap v = random_map(5, 4, 2);
            const SgaFullResult full = sga_full(q, k, v, v);
            for (int m = 0; m < full.attention.rows; ++m) {
                double sum = 0.0;
                for (int j = 0; j < full.attention.cols; ++j) {
                    const double wgt = full.attention.at(m, j);
                    if (wgt < 0.0) {
                        out << "full attention weight negative";
                        return false;
                    }
                    sum += wgt;
                }
                if (std::abs(sum - 1.0) > 1e-6) {
                    out << "full attention row " << m << " sums to " << sum;
                    return false;
                }
            }
            const CrissCrossAttention criss = criss_cross_attention(q, k);
            for (int m = 0; m < 20; ++m) {
                double sum = 0.0;
                for (int s = 0; s < criss.span; ++s) {
                    if (criss.weight(m, s) < 0.0) {
                        out << "criss attention weight negative";
                        return false;
                    }
                    sum += criss.weight(m, s);
                }
                if (std::abs(sum - 1.0) > 1e-6) {
                    out << "criss attention row " << m << " sums to " << sum;
                    return false;
                }
            }
        }

        // Two-pass reachability with a one-hot structure value.
        {
            const int h = 4, w = 4;
            const FeatureMap q = random_map(h, w, 3), k = random_map(h, w, 3);
            FeatureMap hot(h, w, 1, 0.0), hot2(h, w, 1, 0.0);
            hot.at(1, 2) = 1.0;
            hot2.at(1, 2) = 2.0;
            const FeatureMap one_a = sga_criss_cross(q, k, hot, hot, 1).g_next;
            const FeatureMap one_b = sga_criss_cross(q, k, hot2, hot2, 1).g_next;
            const FeatureMap two_a = sga_criss_cross(q, k, hot, hot, 2).g_next;
            const FeatureMap two_b = sga_criss_cross(q, k, hot2, hot2, 2).g_next;
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    const bool on_cross = (r == 1 || c == 2);
                    const bool changed1 = one_a.at(r, c) != one_b.at(r, c);
                    if (!on_cross && changed1) {
                        out << "one pass leaked off the cross at (" << r << "," << c << ")";
                        return false;
                    }
                    if (two_a.at(r, c) == two_b.at(r, c)) {
                        out << "two passes did not reach (" << r << "," << c << ")";
                        return false;
                    }
                }
            }
        }

        // Exact full-vs-criss agreement on 1xN and Nx1 grids.
        for (const auto [h, w] : {std::pair{1, 7}, std::pair{7, 1}}) {
            const FeatureMap q = random_map(h, w, 3), k = random_map(h, w, 3);
            const FeatureMap v = random_map(h, w, 2);
            const SgaFullResult full = sga_full(q, k, v, v);
            const FeatureMap criss = criss_cross_pass(q, k, v);
            if (!(full.g_next == criss)) {
                out << "full vs criss mismatch on " << h << "x" << w;
                return false;
            }
        }
        out << "stochastic rows, reachability, line-grid agreement";
        return true;
    });
}

/// Suite 7: production metrics vs the naive double-loop oracle on 100 random
/// pairs, plus the hand-derived Dice/AJI/PQ constructions.
inline SuiteResult run_metrics_oracle() {
    return detail::timed("metrics_oracle", [](std::ostringstream& out) {
        for (std::uint64_t seed = 700; seed < 800; ++seed) {
            const LabelMap gt = synthesize(detail::varied_spec(seed));
            const LabelMap pred = detail::perturb_labels(gt, seed * 31 + 7);
            if (intersection_table(gt, pred) != reference::intersection_table(gt, pred)) {
                out << "intersection table mismatch at seed " << seed;
                return false;
            }
            if (dice_score(pred, gt) != reference::dice_score(pred, gt) ||
                aji_score(pred, gt) != reference::aji_score(pred, gt) ||
                pq_score(pred, gt).first != reference::pq_score(pred, gt)) {
                out << "metric value mismatch at seed " << seed;
                return false;
            }
        }

        // GT 9 px, pred 6 of them: Dice = 0.8.
        {
            LabelMap gt(6, 6, 0), pred(6, 6, 0);
            for (int r = 1; r <= 3; ++r) {
                for (int c = 1; c <= 3; ++c) gt.at(r, c) = 1;
            }
            for (int r = 1; r <= 2; ++r) {
                for (int c = 1; c <= 3; ++c) pred.at(r, c) = 1;
            }
            if (dice_score(pred, gt) != 0.8) {
                out << "hand Dice construction != 0.8";
                return false;
            }
        }
        // Two 2x2 ground truths bridged by one 2x5 prediction: AJI = 0.4.
        {
            LabelMap gt(6, 8, 0), pred(6, 8, 0);
            for (int r = 1; r <= 2; ++r) {
                for (int c = 1; c <= 2; ++c) gt.at(r, c) = 1;
                for (int c = 4; c <= 5; ++c) gt.at(r, c) = 2;
                for (int c = 1; c <= 5; ++c) pred.at(r, c) = 1;
            }
            if (aji_score(pred, gt) != 0.4) {
                out << "hand AJI construction != 0.4";
                return false;
            }
        }
        // Single pair at IoU 0.8: PQ = 0.8.
        {
            LabelMap gt(3, 12, 0), pred(3, 12, 0);
            for (int c = 0; c <= 8; ++c) gt.at(1, c) = 1;
            for (int c = 1; c <= 9; ++c) pred.at(1, c) = 1;
            if (pq_score(pred, gt).first != 0.8) {
                out << "hand PQ construction != 0.8";
                return false;
            }
        }
        out << "100 random pairs + hand constructions";
        return true;
    });
}

/// Suite 8: SE-gradient correlation with HV >= 0.9 and Dir angle-class
/// agreement >= 85% on rasterized disks of radius >= 8.
inline SuiteResult run_relation_check() {
    return detail::timed("relation", [](std::ostringstream& out) {
        for (const double radius : {8.0, 10.0, 12.0}) {
            const int size = static_cast<int>(2 * radius) + 9;
            const LabelMap labels = detail::centered_disk(size, radius);
            const RelationReport rel = relation_check(labels);
            if (rel.corr_h < 0.9 || rel.corr_v < 0.9) {
                out << "radius " << radius << ": corr_h " << rel.corr_h << ", corr_v " << rel.corr_v;
                return false;
            }
            if (rel.dir_agreement < 0.85) {
                out << "radius " << radius << ": dir agreement " << rel.dir_agreement;
                return false;
            }
        }
        out << "disks of radius 8/10/12";
        return true;
    });
}

inline std::vector<SuiteResult> run_all(const Options& opts = {}) {
    return {
        run_encoding_oracle(opts), run_equivariance(),        run_round_trip(),
        run_postproc_defaults(),   run_gradient_suite(),      run_attention_invariants(),
        run_metrics_oracle(),      run_relation_check(),
    };
}

}  // namespace seine::selfcheck
