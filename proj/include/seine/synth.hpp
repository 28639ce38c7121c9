// Deterministic synthetic fixtures: non-overlapping disks, ellipses or
// squares packed into a label map. Desk-scale stand-in for real tiles.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "seine/grid.hpp"
#include "seine/morphology.hpp"
#include "seine/rng.hpp"

namespace seine {

enum class ShapeFamily { disk, ellipse, square };

inline const char* to_string(ShapeFamily s) {
    switch (s) {
        case ShapeFamily::disk: return "disk";
        case ShapeFamily::ellipse: return "ellipse";
        case ShapeFamily::square: return "square";
    }
    return "?";
}

struct FixtureSpec {
    int height = 64;
    int width = 64;
    int instance_count = 5;
    ShapeFamily shape = ShapeFamily::disk;
    double radius_min = 3.0;
    double radius_max = 8.0;
    int min_gap = 2;         ///< background pixels required between instances
    std::uint64_t seed = 0;
};

/**
 * @brief Generate a label map per the spec; the seed fully determines output.
 *
 * Instances are placed fully inside the image, rejecting candidates that come
 * within min_gap background pixels of already-placed ones. Throws
 * InfeasiblePacking when an instance cannot be placed in 1000 attempts.
 */
inline LabelMap synthesize(const FixtureSpec& spec) {
    LabelMap labels(spec.height, spec.width, 0);
    if (spec.instance_count == 0) return labels;

    DetRng rng(spec.seed);
    BinaryMask occupied(spec.height, spec.width, 0);
    BinaryMask forbidden(spec.height, spec.width, 0);

    for (int id = 1; id <= spec.instance_count; ++id) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            double extent_r = 0.0, extent_c = 0.0;
            double a = 0.0, b = 0.0;
            int half_side = 0;
            switch (spec.shape) {
                case ShapeFamily::disk:
                    a = b = rng.uniform(spec.radius_min, spec.radius_max);
                    extent_r = extent_c = a;
                    break;
                case ShapeFamily::ellipse:
                    a = rng.uniform(spec.radius_min, spec.radius_max);  // column semi-axis
                    b = rng.uniform(spec.radius_min, spec.radius_max);  // row semi-axis
                    extent_r = b;
                    extent_c = a;
                    break;
                case ShapeFamily::square:
                    half_side = rng.uniform_int(static_cast<int>(std::lround(spec.radius_min)),
                                                static_cast<int>(std::lround(spec.radius_max)));
                    extent_r = extent_c = half_side;
                    break;
            }
            const int margin_r = static_cast<int>(std::ceil(extent_r));
            const int margin_c = static_cast<int>(std::ceil(extent_c));
            if (margin_r > spec.height - 1 - margin_r || margin_c > spec.width - 1 - margin_c) {
                continue;  // shape does not fit this image at all
            }
            const int cr = rng.uniform_int(margin_r, spec.height - 1 - margin_r);
            const int cc = rng.uniform_int(margin_c, spec.width - 1 - margin_c);

            std::vector<std::pair<int, int>> pixels;
            for (int r = cr - margin_r; r <= cr + margin_r; ++r) {
                for (int c = cc - margin_c; c <= cc + margin_c; ++c) {
                    const double dr = r - cr, dc = c - cc;
                    bool member = false;
                    switch (spec.shape) {
                        case ShapeFamily::disk:
                            member = dr * dr + dc * dc <= a * a;
                            break;
                        case ShapeFamily::ellipse:
                            member = (dc / a) * (dc / a) + (dr / b) * (dr / b) <= 1.0;
                            break;
                        case ShapeFamily::square:
                            member = true;
                            break;
                    }
                    if (member) pixels.emplace_back(r, c);
                }
            }
            bool clear = true;
            for (const auto& [r, c] : pixels) {
                if (forbidden.at(r, c)) {
                    clear = false;
                    break;
                }
            }
            if (!clear || pixels.empty()) continue;

            for (const auto& [r, c] : pixels) {
                labels.at(r, c) = id;
                occupied.at(r, c) = 1;
            }
            forbidden = spec.min_gap >= 1 ? dilate(occupied, spec.min_gap) : occupied;
            placed = true;
        }
        if (!placed) {
            throw InfeasiblePacking("synthesize: could not place instance " + std::to_string(id) +
                                    " after 1000 attempts");
        }
    }
    return labels;
}

}  // namespace seine
