// Ground-truth target fields derived from a label map: the contour-based
// structure encoding plus the HV, direction and centroid-position baselines.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "seine/components.hpp"
#include "seine/distance.hpp"
#include "seine/grid.hpp"
#include "seine/morphology.hpp"

namespace seine {

/// Tunables for the encoding generators.
struct EncodingConfig {
    /// Number of direction classes K (K >= 2).
    int dir_class_count = 8;
    /// Background normalizer for the structure encoding. Empty means divide
    /// by the global maximum background distance; a positive value divides by
    /// that cap instead (distances beyond it clamp to -1), which makes the
    /// field independent of image size.
    std::optional<double> background_norm_cap{};
};

namespace detail {

inline double exact_centroid_distance(std::int64_t num_r, std::int64_t num_c, std::int64_t n) {
    const auto mag = [](std::int64_t v) {
        return static_cast<unsigned __int128>(v < 0 ? -v : v);
    };
    const unsigned __int128 sq = mag(num_r) * mag(num_r) + mag(num_c) * mag(num_c);
    return std::sqrt(static_cast<double>(sq)) / static_cast<double>(n);
}

inline std::unordered_map<std::int32_t, std::size_t> stats_index(
    const std::vector<InstanceStats>& stats) {
    std::unordered_map<std::int32_t, std::size_t> index;
    index.reserve(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) index.emplace(stats[i].id, i);
    return index;
}

}  // namespace detail

/**
 * @brief Signed, per-instance-normalized distance to the nearest contour.
 *
 * Inside pixels carry the Euclidean distance to the nearest contour pixel of
 * their own instance, divided by that instance's maximum interior distance,
 * so interior values lie in (0, 1]. Contour pixels are exactly 0. Background
 * pixels carry minus the distance to the nearest contour pixel of any
 * instance, divided by the background normalizer, so they lie in [-1, 0).
 * A label map without instances yields the all -1 field.
 */
inline ScalarField structure_encoding(const LabelMap& labels, const EncodingConfig& cfg = {}) {
    const int h = labels.height(), w = labels.width();
    const std::vector<InstanceStats> stats = collect_instance_stats(labels);
    if (stats.empty()) {
        return ScalarField(h, w, 1, -1.0);
    }

    const SemanticMask sem = semantic_from_labels(labels);
    ScalarField out(h, w, 1, 0.0);

    // Interior: per instance, exact squared distance to its own contour,
    // computed on the instance bounding box.
    for (const InstanceStats& s : stats) {
        const int bh = s.max_row - s.min_row + 1;
        const int bw = s.max_col - s.min_col + 1;
        BinaryMask contour_sites(bh, bw, 0);
        bool has_inside = false;
        for (int r = 0; r < bh; ++r) {
            for (int c = 0; c < bw; ++c) {
                if (labels.at(s.min_row + r, s.min_col + c) != s.id) continue;
                if (sem.at(s.min_row + r, s.min_col + c) == kContour) {
                    contour_sites.at(r, c) = 1;
                } else {
                    has_inside = true;
                }
            }
        }
        if (!has_inside) continue;  // degenerate instance: contour only

        const Grid<std::int64_t> dsq = squared_distance_transform(contour_sites);
        std::int64_t max_sq = 0;
        for (int r = 0; r < bh; ++r) {
            for (int c = 0; c < bw; ++c) {
                if (labels.at(s.min_row + r, s.min_col + c) == s.id &&
                    sem.at(s.min_row + r, s.min_col + c) == kInside) {
                    max_sq = std::max(max_sq, dsq.at(r, c));
                }
            }
        }
        const double norm = std::sqrt(static_cast<double>(max_sq));
        for (int r = 0; r < bh; ++r) {
            for (int c = 0; c < bw; ++c) {
                if (labels.at(s.min_row + r, s.min_col + c) == s.id &&
                    sem.at(s.min_row + r, s.min_col + c) == kInside) {
                    out.at(s.min_row + r, s.min_col + c) =
                        std::sqrt(static_cast<double>(dsq.at(r, c))) / norm;
                }
            }
        }
    }

    // Background: distance to the nearest contour pixel of any instance.
    BinaryMask all_contours(h, w, 0);
    bool has_background = false;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (sem.at(r, c) == kContour) all_contours.at(r, c) = 1;
            if (labels.at(r, c) == 0) has_background = true;
        }
    }
    if (has_background) {
        const Grid<std::int64_t> dsq = squared_distance_transform(all_contours);
        if (cfg.background_norm_cap.has_value()) {
            const double cap = *cfg.background_norm_cap;
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    if (labels.at(r, c) != 0) continue;
                    const double d = std::sqrt(static_cast<double>(dsq.at(r, c)));
                    out.at(r, c) = -std::min(d, cap) / cap;
                }
            }
        } else {
            std::int64_t max_sq = 0;
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    if (labels.at(r, c) == 0) max_sq = std::max(max_sq, dsq.at(r, c));
                }
            }
            const double norm = std::sqrt(static_cast<double>(max_sq));
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    if (labels.at(r, c) == 0) {
                        out.at(r, c) = -std::sqrt(static_cast<double>(dsq.at(r, c))) / norm;
                    }
                }
            }
        }
    }
    return out;
}

/**
 * @brief HoverNet-style horizontal/vertical map.
 *
 * Channel 0 is the column offset from the instance centroid, channel 1 the
 * row offset, each normalized by the instance's maximum absolute offset on
 * that axis (0 when the instance has no extent there). Background is 0.
 */
inline ScalarField hv_encoding(const LabelMap& labels) {
    const int h = labels.height(), w = labels.width();
    ScalarField out(h, w, 2, 0.0);
    const std::vector<InstanceStats> stats = collect_instance_stats(labels);
    if (stats.empty()) return out;
    const auto index = detail::stats_index(stats);

    // Per-instance maximum |n*c - sum_c| and |n*r - sum_r|.
    std::vector<std::int64_t> hmax(stats.size(), 0), vmax(stats.size(), 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) continue;
            const std::size_t i = index.at(id);
            const InstanceStats& s = stats[i];
            hmax[i] = std::max<std::int64_t>(hmax[i], std::abs(s.pixel_count * c - s.sum_col));
            vmax[i] = std::max<std::int64_t>(vmax[i], std::abs(s.pixel_count * r - s.sum_row));
        }
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) continue;
            const std::size_t i = index.at(id);
            const InstanceStats& s = stats[i];
            if (hmax[i] > 0) {
                out.at(r, c, 0) = static_cast<double>(s.pixel_count * c - s.sum_col) /
                                  static_cast<double>(hmax[i]);
            }
            if (vmax[i] > 0) {
                out.at(r, c, 1) = static_cast<double>(s.pixel_count * r - s.sum_row) /
                                  static_cast<double>(vmax[i]);
            }
        }
    }
    return out;
}

/**
 * @brief CDNet-style quantized centrifugal direction classes.
 *
 * Instance pixels take class 1 + floor((theta mod 2pi) / (2pi/K)) where theta
 * is the angle of the vector from the instance centroid to the pixel; the
 * exact-centroid pixel takes class 1, background stays 0.
 */
inline DirMap dir_encoding(const LabelMap& labels, const EncodingConfig& cfg = {}) {
    assert(cfg.dir_class_count >= 2);
    const int h = labels.height(), w = labels.width();
    DirMap out(h, w, 0);
    const std::vector<InstanceStats> stats = collect_instance_stats(labels);
    if (stats.empty()) return out;
    const auto index = detail::stats_index(stats);

    const int k = cfg.dir_class_count;
    const double two_pi = 2.0 * M_PI;
    const double bin = two_pi / k;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) continue;
            const InstanceStats& s = stats[index.at(id)];
            const std::int64_t vnum = s.pixel_count * r - s.sum_row;
            const std::int64_t hnum = s.pixel_count * c - s.sum_col;
            if (vnum == 0 && hnum == 0) {
                out.at(r, c) = 1;  // zero centrifugal vector
                continue;
            }
            double theta = std::atan2(static_cast<double>(vnum), static_cast<double>(hnum));
            if (theta < 0.0) theta += two_pi;
            int cls = static_cast<int>(std::floor(theta / bin));
            if (cls >= k) cls = k - 1;  // guard against theta rounding to 2pi
            out.at(r, c) = cls + 1;
        }
    }
    return out;
}

/**
 * @brief Per-pixel Euclidean distance to the instance centroid, in pixels.
 *
 * Covers inside and contour pixels of every instance; background is 0. The
 * value is computed from exact integer coordinate sums, so it is bitwise
 * reproducible under rigid grid transforms.
 */
inline ScalarField position_encoding(const LabelMap& labels) {
    const int h = labels.height(), w = labels.width();
    ScalarField out(h, w, 1, 0.0);
    const std::vector<InstanceStats> stats = collect_instance_stats(labels);
    if (stats.empty()) return out;
    const auto index = detail::stats_index(stats);

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) continue;
            const InstanceStats& s = stats[index.at(id)];
            out.at(r, c) = detail::exact_centroid_distance(
                s.pixel_count * r - s.sum_row, s.pixel_count * c - s.sum_col, s.pixel_count);
        }
    }
    return out;
}

}  // namespace seine
