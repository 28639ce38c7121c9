// Testing-phase fusion: threshold the predicted structure field into a
// high-confidence contour band, fuse it with the 3-class semantic prediction,
// and recover a refined instance label map.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seine/components.hpp"
#include "seine/grid.hpp"

namespace seine {

struct PostprocConfig {
    double t_p = 0.05;
    double t_n = -0.05;
    int connectivity = 4;
    std::int64_t min_instance_area = 0;
};

inline void validate(const PostprocConfig& cfg) {
    if (!(cfg.t_n < cfg.t_p)) {
        throw Error("postproc: t_n must be strictly less than t_p");
    }
    if (cfg.connectivity != 4 && cfg.connectivity != 8) {
        throw Error("postproc: connectivity must be 4 or 8");
    }
}

/// High-confidence contour band: pixel is 1 iff t_n < value < t_p (strict).
inline BinaryMask contour_from_structure(const ScalarField& structure,
                                         const PostprocConfig& cfg = {}) {
    validate(cfg);
    if (structure.channels != 1) {
        throw DimensionMismatch("contour_from_structure: expected a single-channel field");
    }
    BinaryMask out(structure.height, structure.width, 0);
    for (int r = 0; r < structure.height; ++r) {
        for (int c = 0; c < structure.width; ++c) {
            const double v = structure.at(r, c);
            out.at(r, c) = (cfg.t_n < v && v < cfg.t_p) ? 1 : 0;
        }
    }
    return out;
}

/**
 * @brief Fuse a semantic mask with a contour map into instance labels.
 *
 * Nucleus evidence is every inside/contour-class pixel; the separator is the
 * union of the given contour band and the contour-class pixels. Seeds are the
 * connected components of evidence minus separator; separator pixels on
 * evidence are then regrown to the nearest seed by multi-source BFS over the
 * evidence graph (equal distance goes to the lower seed label). Components
 * below min_instance_area are dropped and labels renumbered in raster order.
 */
inline LabelMap fuse_and_label(const SemanticMask& semantic, const BinaryMask& contour,
                               const PostprocConfig& cfg = {}) {
    validate(cfg);
    require_same_shape(semantic, contour, "fuse_and_label");
    const int h = semantic.height(), w = semantic.width();

    BinaryMask evidence(h, w, 0), seed_mask(h, w, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const bool on_nucleus = semantic.at(r, c) == kInside || semantic.at(r, c) == kContour;
            const bool separator = contour.at(r, c) == 1 || semantic.at(r, c) == kContour;
            evidence.at(r, c) = on_nucleus ? 1 : 0;
            seed_mask.at(r, c) = (on_nucleus && !separator) ? 1 : 0;
        }
    }

    LabelMap labels = connected_components(seed_mask, cfg.connectivity);

    // Multi-source BFS regrowth over evidence pixels, level by level so that
    // ties between seeds resolve to the lower label independent of queue order.
    const int dr4[] = {-1, 0, 0, 1}, dc4[] = {0, -1, 1, 0};
    const int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1}, dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    const int* drs = cfg.connectivity == 4 ? dr4 : dr8;
    const int* dcs = cfg.connectivity == 4 ? dc4 : dc8;
    const int ndirs = cfg.connectivity == 4 ? 4 : 8;

    std::vector<std::pair<int, int>> level;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (labels.at(r, c) != 0) level.emplace_back(r, c);
        }
    }
    LabelMap claim(h, w, 0);
    while (!level.empty()) {
        std::vector<std::pair<int, int>> next;
        for (const auto& [r, c] : level) {
            const std::int32_t lab = labels.at(r, c);
            for (int d = 0; d < ndirs; ++d) {
                const int rr = r + drs[d], cc = c + dcs[d];
                if (!labels.in_bounds(rr, cc)) continue;
                if (!evidence.at(rr, cc) || labels.at(rr, cc) != 0) continue;
                if (claim.at(rr, cc) == 0) {
                    claim.at(rr, cc) = lab;
                    next.emplace_back(rr, cc);
                } else if (lab < claim.at(rr, cc)) {
                    claim.at(rr, cc) = lab;
                }
            }
        }
        for (const auto& [r, c] : next) {
            labels.at(r, c) = claim.at(r, c);
        }
        level = std::move(next);
    }

    // Area filter, then renumber 1..N in raster order of first pixel.
    std::map<std::int32_t, std::int64_t> area;
    for (std::int32_t v : labels.cells()) {
        if (v != 0) ++area[v];
    }
    std::map<std::int32_t, std::int32_t> renumber;
    std::int32_t next_id = 0;
    LabelMap out(h, w, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t v = labels.at(r, c);
            if (v == 0 || area[v] < cfg.min_instance_area) continue;
            auto [it, inserted] = renumber.try_emplace(v, next_id + 1);
            if (inserted) ++next_id;
            out.at(r, c) = it->second;
        }
    }
    return out;
}

/// Threshold the structure field, then fuse with the semantic prediction.
inline LabelMap run_pipeline(const SemanticMask& semantic, const ScalarField& structure,
                             const PostprocConfig& cfg = {}) {
    if (structure.height != semantic.height() || structure.width != semantic.width()) {
        throw DimensionMismatch("run_pipeline: semantic and structure shapes differ");
    }
    return fuse_and_label(semantic, contour_from_structure(structure, cfg), cfg);
}

}  // namespace seine
