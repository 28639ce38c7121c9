// Brute-force reference implementations used by the self-check command and
// the test suites. Everything here favors directness over speed and stays
// independent of the production code paths it cross-checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "seine/encodings.hpp"
#include "seine/grid.hpp"
#include "seine/morphology.hpp"

namespace seine::reference {

struct PixelCoord {
    int row = 0;
    int col = 0;
};

inline std::int64_t squared_gap(PixelCoord a, int r, int c) {
    const std::int64_t dr = a.row - r, dc = a.col - c;
    return dr * dr + dc * dc;
}

/// O(N * |C|) nearest-contour scan version of the structure encoding.
inline ScalarField structure_encoding(const LabelMap& labels, const EncodingConfig& cfg = {}) {
    const int h = labels.height(), w = labels.width();
    const std::vector<InstanceStats> stats = collect_instance_stats(labels);
    if (stats.empty()) return ScalarField(h, w, 1, -1.0);

    // Contour point lists straight from the definition: mask minus erosion.
    std::map<std::int32_t, std::vector<PixelCoord>> contours;
    std::vector<PixelCoord> all_contours;
    for (const InstanceStats& s : stats) {
        const BinaryMask contour = extract_contour(labels, s.id);
        auto& list = contours[s.id];
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (contour.at(r, c)) {
                    list.push_back({r, c});
                    all_contours.push_back({r, c});
                }
            }
        }
    }

    ScalarField raw(h, w, 1, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) {
                std::int64_t best = std::numeric_limits<std::int64_t>::max();
                for (const PixelCoord& p : all_contours) {
                    best = std::min(best, squared_gap(p, r, c));
                }
                raw.at(r, c) = -std::sqrt(static_cast<double>(best));
            } else {
                const auto& own = contours.at(id);
                std::int64_t best = std::numeric_limits<std::int64_t>::max();
                for (const PixelCoord& p : own) {
                    best = std::min(best, squared_gap(p, r, c));
                }
                raw.at(r, c) = std::sqrt(static_cast<double>(best));  // 0 on contour pixels
            }
        }
    }

    // Normalize: interior per instance, background by cap or global max.
    std::map<std::int32_t, double> interior_max;
    double background_max = 0.0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) {
                background_max = std::max(background_max, -raw.at(r, c));
            } else {
                double& m = interior_max[id];
                m = std::max(m, raw.at(r, c));
            }
        }
    }
    ScalarField out(h, w, 1, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            const double v = raw.at(r, c);
            if (id == 0) {
                if (cfg.background_norm_cap.has_value()) {
                    const double cap = *cfg.background_norm_cap;
                    out.at(r, c) = -std::min(-v, cap) / cap;
                } else {
                    out.at(r, c) = v / background_max;
                }
            } else if (v > 0.0) {
                out.at(r, c) = v / interior_max.at(id);
            }
        }
    }
    return out;
}

/// Plain-double centroid distances, one instance at a time.
inline ScalarField position_encoding(const LabelMap& labels) {
    const int h = labels.height(), w = labels.width();
    ScalarField out(h, w, 1, 0.0);
    for (const InstanceStats& s : collect_instance_stats(labels)) {
        double sum_r = 0.0, sum_c = 0.0, count = 0.0;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (labels.at(r, c) == s.id) {
                    sum_r += r;
                    sum_c += c;
                    count += 1.0;
                }
            }
        }
        const double cen_r = sum_r / count, cen_c = sum_c / count;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (labels.at(r, c) == s.id) {
                    const double dr = r - cen_r, dc = c - cen_c;
                    out.at(r, c) = std::sqrt(dr * dr + dc * dc);
                }
            }
        }
    }
    return out;
}

/// Pairwise |G_i intersect P_j| counts by a per-pair full-image loop.
inline std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> intersection_table(
    const LabelMap& gt, const LabelMap& pred) {
    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> table;
    for (const InstanceStats& g : collect_instance_stats(gt)) {
        for (const InstanceStats& p : collect_instance_stats(pred)) {
            std::int64_t count = 0;
            for (int r = 0; r < gt.height(); ++r) {
                for (int c = 0; c < gt.width(); ++c) {
                    if (gt.at(r, c) == g.id && pred.at(r, c) == p.id) ++count;
                }
            }
            if (count > 0) table[{g.id, p.id}] = count;
        }
    }
    return table;
}

/// Foreground Dice by direct pixel counting.
inline double dice_score(const LabelMap& pred, const LabelMap& gt) {
    std::int64_t inter = 0, pred_area = 0, gt_area = 0;
    for (int r = 0; r < gt.height(); ++r) {
        for (int c = 0; c < gt.width(); ++c) {
            const bool p = pred.at(r, c) != 0, g = gt.at(r, c) != 0;
            inter += (p && g) ? 1 : 0;
            pred_area += p ? 1 : 0;
            gt_area += g ? 1 : 0;
        }
    }
    if (pred_area + gt_area == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(pred_area + gt_area);
}

/// Aggregated Jaccard index evaluated directly from the naive table.
inline double aji_score(const LabelMap& pred, const LabelMap& gt) {
    const auto gt_stats = collect_instance_stats(gt);
    const auto pred_stats = collect_instance_stats(pred);
    if (gt_stats.empty() && pred_stats.empty()) return 1.0;
    const auto table = intersection_table(gt, pred);

    std::map<std::int32_t, std::int64_t> pred_area;
    for (const auto& p : pred_stats) pred_area[p.id] = p.pixel_count;

    std::int64_t c_sum = 0, u_sum = 0;
    std::map<std::int32_t, bool> pred_used;
    for (const auto& g : gt_stats) {
        std::int32_t best_pred = 0;
        double best_jaccard = 0.0;
        for (const auto& p : pred_stats) {
            auto it = table.find({g.id, p.id});
            if (it == table.end()) continue;
            const double inter = static_cast<double>(it->second);
            const double uni = static_cast<double>(g.pixel_count + p.pixel_count) - inter;
            const double jac = inter / uni;
            if (jac > best_jaccard) {
                best_jaccard = jac;
                best_pred = p.id;
            }
        }
        if (best_pred == 0) {
            u_sum += g.pixel_count;  // no overlapping prediction
        } else {
            const std::int64_t inter = table.at({g.id, best_pred});
            c_sum += inter;
            u_sum += g.pixel_count + pred_area.at(best_pred) - inter;
            pred_used[best_pred] = true;
        }
    }
    for (const auto& p : pred_stats) {
        if (!pred_used.count(p.id)) u_sum += p.pixel_count;
    }
    if (u_sum == 0) return 1.0;
    return static_cast<double>(c_sum) / static_cast<double>(u_sum);
}

/// Panoptic quality with the IoU > 0.5 one-to-one matching rule.
inline double pq_score(const LabelMap& pred, const LabelMap& gt) {
    const auto gt_stats = collect_instance_stats(gt);
    const auto pred_stats = collect_instance_stats(pred);
    if (gt_stats.empty() && pred_stats.empty()) return 1.0;
    const auto table = intersection_table(gt, pred);

    std::map<std::int32_t, std::int64_t> pred_area;
    for (const auto& p : pred_stats) pred_area[p.id] = p.pixel_count;

    double iou_sum = 0.0;
    std::int64_t tp = 0;
    std::map<std::int32_t, bool> gt_matched, pred_matched;
    for (const auto& [pair, inter] : table) {
        const auto [gid, pid] = pair;
        std::int64_t g_area = 0;
        for (const auto& g : gt_stats) {
            if (g.id == gid) g_area = g.pixel_count;
        }
        const double iou = static_cast<double>(inter) /
                           static_cast<double>(g_area + pred_area.at(pid) - inter);
        if (iou > 0.5) {
            iou_sum += iou;
            ++tp;
            gt_matched[gid] = true;
            pred_matched[pid] = true;
        }
    }
    const std::int64_t fn = static_cast<std::int64_t>(gt_stats.size()) - tp;
    const std::int64_t fp = static_cast<std::int64_t>(pred_stats.size()) - tp;
    return iou_sum / (static_cast<double>(tp) + 0.5 * static_cast<double>(fp) +
                      0.5 * static_cast<double>(fn));
}

}  // namespace seine::reference
