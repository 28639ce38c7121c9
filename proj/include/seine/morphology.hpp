// Binary morphology with a square (Chebyshev) structuring element, plus the
// contour and 3-class semantic derivations built on it.

#pragma once

#include <algorithm>
#include <string>

#include "seine/grid.hpp"

namespace seine {

namespace detail {

// Separable pass over one axis: out = 1 iff (any_mode ? any : all) of the
// window [-radius, radius] is 1. Out-of-bounds pixels count as 0.
inline BinaryMask morph_pass(const BinaryMask& mask, int radius, bool horizontal, bool any_mode) {
    BinaryMask out(mask.height(), mask.width(), 0);
    const int h = mask.height(), w = mask.width();
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            bool hit = !any_mode;
            for (int d = -radius; d <= radius; ++d) {
                const int rr = horizontal ? r : r + d;
                const int cc = horizontal ? c + d : c;
                const std::uint8_t v = mask.at_or(rr, cc, 0);
                if (any_mode) {
                    if (v) { hit = true; break; }
                } else {
                    if (!v) { hit = false; break; }
                }
            }
            out.at(r, c) = hit ? 1 : 0;
        }
    }
    return out;
}

}  // namespace detail

/// Square dilation: output is 1 iff any input pixel within Chebyshev
/// distance `radius` is 1.
inline BinaryMask dilate(const BinaryMask& mask, int radius) {
    assert(radius >= 1);
    BinaryMask tmp = detail::morph_pass(mask, radius, /*horizontal=*/true, /*any=*/true);
    return detail::morph_pass(tmp, radius, /*horizontal=*/false, /*any=*/true);
}

/// Square erosion: output is 1 iff every pixel within Chebyshev distance
/// `radius` is 1, where pixels outside the image count as 0.
inline BinaryMask erode(const BinaryMask& mask, int radius) {
    assert(radius >= 1);
    BinaryMask tmp = detail::morph_pass(mask, radius, /*horizontal=*/true, /*any=*/false);
    return detail::morph_pass(tmp, radius, /*horizontal=*/false, /*any=*/false);
}

/// Binary mask of one instance's pixels.
inline BinaryMask instance_mask(const LabelMap& labels, std::int32_t instance_id) {
    BinaryMask mask(labels.height(), labels.width(), 0);
    bool found = false;
    for (int r = 0; r < labels.height(); ++r) {
        for (int c = 0; c < labels.width(); ++c) {
            if (labels.at(r, c) == instance_id) {
                mask.at(r, c) = 1;
                found = true;
            }
        }
    }
    if (instance_id <= 0 || !found) {
        throw UnknownInstance("instance_mask: id " + std::to_string(instance_id) +
                              " not present in label map");
    }
    return mask;
}

/**
 * @brief Inner boundary of one instance: its mask minus the radius-1 erosion.
 *
 * Every non-empty instance yields a non-empty contour; a 1-pixel instance is
 * its own contour.
 */
inline BinaryMask extract_contour(const LabelMap& labels, std::int32_t instance_id) {
    BinaryMask mask = instance_mask(labels, instance_id);
    BinaryMask interior = erode(mask, 1);
    BinaryMask contour(mask.height(), mask.width(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        contour.cells()[i] = (mask.cells()[i] && !interior.cells()[i]) ? 1 : 0;
    }
    return contour;
}

/**
 * @brief 3-class semantic mask: background / inside / contour.
 *
 * A labelled pixel is contour iff it sits on the image border or any of its
 * 8 neighbours carries a different label; this is exactly the union of
 * extract_contour over all instances.
 */
inline SemanticMask semantic_from_labels(const LabelMap& labels) {
    const int h = labels.height(), w = labels.width();
    SemanticMask out(h, w, kBackground);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::int32_t id = labels.at(r, c);
            if (id == 0) continue;
            bool boundary = false;
            for (int dr = -1; dr <= 1 && !boundary; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (labels.at_or(r + dr, c + dc, 0) != id) {
                        boundary = true;
                        break;
                    }
                }
            }
            out.at(r, c) = boundary ? kContour : kInside;
        }
    }
    return out;
}

}  // namespace seine
