// Connected components (two-pass union-find), instance statistics, centroids
// and block downsampling.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "seine/grid.hpp"

namespace seine {

namespace detail {

struct DisjointSet {
    std::vector<std::int32_t> parent;

    std::int32_t make() {
        parent.push_back(static_cast<std::int32_t>(parent.size()));
        return parent.back();
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void join(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Smaller root wins so provisional raster order survives unions.
        if (a < b) parent[b] = a; else parent[a] = b;
    }
};

}  // namespace detail

/**
 * @brief Label maximal connected regions of 1-pixels.
 *
 * Components receive consecutive labels 1..N in raster-scan order of their
 * first pixel. `connectivity` is 4 or 8.
 */
inline LabelMap connected_components(const BinaryMask& mask, int connectivity = 4) {
    assert(connectivity == 4 || connectivity == 8);
    const int h = mask.height(), w = mask.width();
    LabelMap provisional(h, w, 0);
    detail::DisjointSet sets;
    sets.make();  // slot 0 = background, never joined

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            std::int32_t best = 0;
            auto consider = [&](int rr, int cc) {
                if (rr < 0 || cc < 0 || cc >= w || !mask.at(rr, cc)) return;
                const std::int32_t p = provisional.at(rr, cc);
                if (best == 0) {
                    best = p;
                } else if (p != best) {
                    sets.join(best, p);
                }
            };
            consider(r, c - 1);
            consider(r - 1, c);
            if (connectivity == 8) {
                consider(r - 1, c - 1);
                if (c + 1 < w) consider(r - 1, c + 1);
            }
            provisional.at(r, c) = best != 0 ? best : sets.make();
        }
    }

    // Second pass: resolve roots and renumber in first-occurrence order.
    std::vector<std::int32_t> relabel(sets.parent.size(), 0);
    LabelMap out(h, w, 0);
    std::int32_t next = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            const std::int32_t root = sets.find(provisional.at(r, c));
            if (relabel[root] == 0) relabel[root] = ++next;
            out.at(r, c) = relabel[root];
        }
    }
    return out;
}

/// Per-instance pixel count, bounding box, and exact coordinate sums.
struct InstanceStats {
    std::int32_t id = 0;
    std::int64_t pixel_count = 0;
    int min_row = 0, max_row = 0, min_col = 0, max_col = 0;
    std::int64_t sum_row = 0, sum_col = 0;
};

/// Statistics for every nonzero label, sorted by instance id.
inline std::vector<InstanceStats> collect_instance_stats(const LabelMap& labels) {
    std::map<std::int32_t, InstanceStats> acc;
    for (int r = 0; r < labels.height(); ++r) {
        for (int c = 0; c < labels.width(); ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) continue;
            auto [it, inserted] = acc.try_emplace(id);
            InstanceStats& s = it->second;
            if (inserted) {
                s.id = id;
                s.min_row = s.max_row = r;
                s.min_col = s.max_col = c;
            } else {
                s.min_row = std::min(s.min_row, r);
                s.max_row = std::max(s.max_row, r);
                s.min_col = std::min(s.min_col, c);
                s.max_col = std::max(s.max_col, c);
            }
            s.pixel_count += 1;
            s.sum_row += r;
            s.sum_col += c;
        }
    }
    std::vector<InstanceStats> out;
    out.reserve(acc.size());
    for (auto& [id, s] : acc) out.push_back(s);
    return out;
}

/// Arithmetic-mean centroid of every instance, sorted by instance id.
inline std::vector<Centroid> instance_centroids(const LabelMap& labels) {
    std::vector<Centroid> out;
    for (const InstanceStats& s : collect_instance_stats(labels)) {
        out.push_back({static_cast<double>(s.sum_row) / static_cast<double>(s.pixel_count),
                       static_cast<double>(s.sum_col) / static_cast<double>(s.pixel_count),
                       s.id});
    }
    return out;
}

/// Block-average pooling over factor x factor blocks, per channel.
inline ScalarField downsample_field(const ScalarField& field, int factor) {
    assert(factor >= 1);
    if (field.height % factor != 0 || field.width % factor != 0) {
        throw DimensionMismatch("downsample_field: factor does not divide field dimensions");
    }
    const int oh = field.height / factor, ow = field.width / factor;
    ScalarField out(oh, ow, field.channels);
    const double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            for (int ch = 0; ch < field.channels; ++ch) {
                double sum = 0.0;
                for (int br = 0; br < factor; ++br) {
                    for (int bc = 0; bc < factor; ++bc) {
                        sum += field.at(r * factor + br, c * factor + bc, ch);
                    }
                }
                out.at(r, c, ch) = sum * inv;
            }
        }
    }
    return out;
}

/// Majority-vote downsampling for class grids; ties go to the lowest class id.
inline SemanticMask downsample_semantic(const SemanticMask& mask, int factor) {
    assert(factor >= 1);
    if (mask.height() % factor != 0 || mask.width() % factor != 0) {
        throw DimensionMismatch("downsample_semantic: factor does not divide mask dimensions");
    }
    const int oh = mask.height() / factor, ow = mask.width() / factor;
    SemanticMask out(oh, ow, 0);
    for (int r = 0; r < oh; ++r) {
        for (int c = 0; c < ow; ++c) {
            int votes[3] = {0, 0, 0};
            for (int br = 0; br < factor; ++br) {
                for (int bc = 0; bc < factor; ++bc) {
                    ++votes[mask.at(r * factor + br, c * factor + bc)];
                }
            }
            int best = 0;
            for (int cls = 1; cls < 3; ++cls) {
                if (votes[cls] > votes[best]) best = cls;
            }
            out.at(r, c) = static_cast<std::uint8_t>(best);
        }
    }
    return out;
}

}  // namespace seine
