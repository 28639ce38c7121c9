// The four evaluation metrics (Dice, AJI, Hausdorff, PQ) with explicit
// matching semantics over instance label maps.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "seine/components.hpp"
#include "seine/grid.hpp"
#include "seine/morphology.hpp"

namespace seine {

struct InstanceMatch {
    std::int32_t gt_id = 0;
    std::int32_t pred_id = 0;
    double iou = 0.0;
};

struct MetricsReport {
    double dice = 0.0;
    double aji = 0.0;
    double hausdorff = 0.0;
    double pq = 0.0;
    std::vector<InstanceMatch> matches;  ///< IoU > 0.5 pairs used by PQ
};

/// |G_i intersect P_j| for every overlapping (gt, pred) instance pair,
/// built in one raster pass.
inline std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> intersection_table(
    const LabelMap& gt, const LabelMap& pred) {
    require_same_shape(gt, pred, "intersection_table");
    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> table;
    for (int r = 0; r < gt.height(); ++r) {
        for (int c = 0; c < gt.width(); ++c) {
            const std::int32_t g = gt.at(r, c), p = pred.at(r, c);
            if (g != 0 && p != 0) ++table[{g, p}];
        }
    }
    return table;
}

/// Binary foreground Dice; 1.0 when both maps are empty.
inline double dice_score(const LabelMap& pred, const LabelMap& gt) {
    require_same_shape(pred, gt, "dice_score");
    std::int64_t inter = 0, total = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const bool p = pred.cells()[i] != 0, g = gt.cells()[i] != 0;
        inter += (p && g) ? 1 : 0;
        total += (p ? 1 : 0) + (g ? 1 : 0);
    }
    if (total == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

/**
 * @brief Aggregated Jaccard index.
 *
 * Ground-truth instances are visited in ascending id; each selects the
 * overlapping prediction with maximal Jaccard (ties to the lower pred id;
 * reuse permitted) and accumulates intersection and union. Ground truths
 * without any overlapping prediction add their area to the union, as do
 * predictions never selected. 1.0 when both maps are empty.
 */
inline double aji_score(const LabelMap& pred, const LabelMap& gt) {
    require_same_shape(pred, gt, "aji_score");
    const auto gt_stats = collect_instance_stats(gt);
    const auto pred_stats = collect_instance_stats(pred);
    if (gt_stats.empty() && pred_stats.empty()) return 1.0;

    const auto table = intersection_table(gt, pred);
    std::map<std::int32_t, std::int64_t> pred_area;
    for (const auto& p : pred_stats) pred_area[p.id] = p.pixel_count;

    std::int64_t c_sum = 0, u_sum = 0;
    std::map<std::int32_t, bool> used;
    for (const auto& g : gt_stats) {
        std::int32_t best_pred = 0;
        std::int64_t best_inter = 0;
        double best_jaccard = 0.0;
        // table iteration is ordered by (gt, pred), so the first maximum
        // encountered is the lowest pred id.
        for (auto it = table.lower_bound({g.id, 0});
             it != table.end() && it->first.first == g.id; ++it) {
            const std::int64_t inter = it->second;
            const double jac = static_cast<double>(inter) /
                               static_cast<double>(g.pixel_count + pred_area.at(it->first.second) - inter);
            if (jac > best_jaccard) {
                best_jaccard = jac;
                best_pred = it->first.second;
                best_inter = inter;
            }
        }
        if (best_pred == 0) {
            u_sum += g.pixel_count;
        } else {
            c_sum += best_inter;
            u_sum += g.pixel_count + pred_area.at(best_pred) - best_inter;
            used[best_pred] = true;
        }
    }
    for (const auto& p : pred_stats) {
        if (!used.count(p.id)) u_sum += p.pixel_count;
    }
    if (u_sum == 0) return 1.0;
    return static_cast<double>(c_sum) / static_cast<double>(u_sum);
}

namespace detail {

inline std::vector<std::pair<int, int>> contour_points(const LabelMap& labels, std::int32_t id) {
    const BinaryMask contour = extract_contour(labels, id);
    std::vector<std::pair<int, int>> pts;
    for (int r = 0; r < contour.height(); ++r) {
        for (int c = 0; c < contour.width(); ++c) {
            if (contour.at(r, c)) pts.emplace_back(r, c);
        }
    }
    return pts;
}

inline std::int64_t directed_max_min_sq(const std::vector<std::pair<int, int>>& a,
                                        const std::vector<std::pair<int, int>>& b) {
    std::int64_t worst = 0;
    for (const auto& [ar, ac] : a) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (const auto& [br, bc] : b) {
            const std::int64_t dr = ar - br, dc = ac - bc;
            best = std::min(best, dr * dr + dc * dc);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace detail

/**
 * @brief Image-level Hausdorff distance.
 *
 * Instances are paired greedily by descending IoU (one use each); every pair
 * contributes the symmetric Hausdorff distance between its contour point
 * sets, and every unmatched instance on either side contributes the image
 * diagonal. The result is the mean over pairs and penalties; 0 when both
 * maps are empty.
 */
inline double hausdorff_distance(const LabelMap& pred, const LabelMap& gt) {
    require_same_shape(pred, gt, "hausdorff_distance");
    const auto gt_stats = collect_instance_stats(gt);
    const auto pred_stats = collect_instance_stats(pred);
    if (gt_stats.empty() && pred_stats.empty()) return 0.0;

    std::map<std::int32_t, std::int64_t> pred_area, gt_area;
    for (const auto& p : pred_stats) pred_area[p.id] = p.pixel_count;
    for (const auto& g : gt_stats) gt_area[g.id] = g.pixel_count;

    struct Cand {
        double iou;
        std::int32_t gt_id, pred_id;
    };
    std::vector<Cand> cands;
    for (const auto& [key, inter] : intersection_table(gt, pred)) {
        const double iou = static_cast<double>(inter) /
                           static_cast<double>(gt_area.at(key.first) + pred_area.at(key.second) - inter);
        cands.push_back({iou, key.first, key.second});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.gt_id != b.gt_id) return a.gt_id < b.gt_id;
        return a.pred_id < b.pred_id;
    });

    std::map<std::int32_t, bool> gt_used, pred_used;
    double sum = 0.0;
    std::int64_t terms = 0;
    for (const Cand& cand : cands) {
        if (gt_used.count(cand.gt_id) || pred_used.count(cand.pred_id)) continue;
        gt_used[cand.gt_id] = true;
        pred_used[cand.pred_id] = true;
        const auto gpts = detail::contour_points(gt, cand.gt_id);
        const auto ppts = detail::contour_points(pred, cand.pred_id);
        const std::int64_t sq = std::max(detail::directed_max_min_sq(gpts, ppts),
                                         detail::directed_max_min_sq(ppts, gpts));
        sum += std::sqrt(static_cast<double>(sq));
        ++terms;
    }

    const double diag = std::sqrt(static_cast<double>(gt.height() - 1) * (gt.height() - 1) +
                                  static_cast<double>(gt.width() - 1) * (gt.width() - 1));
    const std::int64_t unmatched = (static_cast<std::int64_t>(gt_stats.size()) - terms) +
                                   (static_cast<std::int64_t>(pred_stats.size()) - terms);
    sum += diag * static_cast<double>(unmatched);
    terms += unmatched;
    return sum / static_cast<double>(terms);
}

/**
 * @brief Panoptic quality with the IoU > 0.5 one-to-one matching rule.
 *
 * Returns PQ and the matched (gt, pred, iou) list sorted by gt id; 1.0 with
 * no matches when both maps are empty.
 */
inline std::pair<double, std::vector<InstanceMatch>> pq_score(const LabelMap& pred,
                                                              const LabelMap& gt) {
    require_same_shape(pred, gt, "pq_score");
    const auto gt_stats = collect_instance_stats(gt);
    const auto pred_stats = collect_instance_stats(pred);
    if (gt_stats.empty() && pred_stats.empty()) return {1.0, {}};

    std::map<std::int32_t, std::int64_t> pred_area, gt_area;
    for (const auto& p : pred_stats) pred_area[p.id] = p.pixel_count;
    for (const auto& g : gt_stats) gt_area[g.id] = g.pixel_count;

    std::vector<InstanceMatch> matches;
    double iou_sum = 0.0;
    for (const auto& [key, inter] : intersection_table(gt, pred)) {
        const double iou = static_cast<double>(inter) /
                           static_cast<double>(gt_area.at(key.first) + pred_area.at(key.second) - inter);
        if (iou > 0.5) {
            matches.push_back({key.first, key.second, iou});
            iou_sum += iou;
        }
    }
    const auto tp = static_cast<double>(matches.size());
    const auto fp = static_cast<double>(pred_stats.size()) - tp;
    const auto fn = static_cast<double>(gt_stats.size()) - tp;
    return {iou_sum / (tp + 0.5 * fp + 0.5 * fn), std::move(matches)};
}

/// All four metrics plus the PQ match bookkeeping.
inline MetricsReport evaluate(const LabelMap& pred, const LabelMap& gt) {
    require_same_shape(pred, gt, "evaluate");
    MetricsReport report;
    report.dice = dice_score(pred, gt);
    report.aji = aji_score(pred, gt);
    report.hausdorff = hausdorff_distance(pred, gt);
    auto [pq, matches] = pq_score(pred, gt);
    report.pq = pq;
    report.matches = std::move(matches);
    return report;
}

}  // namespace seine
