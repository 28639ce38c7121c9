// Rigid grid transforms: the four rotations/flips used by the invariance lab.

#pragma once

#include <string>

#include "seine/grid.hpp"

namespace seine {

enum class RigidTransform {
    identity,
    rot90,
    rot180,
    rot270,
    flip_h,
    flip_v,
};

inline const char* to_string(RigidTransform t) {
    switch (t) {
        case RigidTransform::identity: return "identity";
        case RigidTransform::rot90: return "rot90";
        case RigidTransform::rot180: return "rot180";
        case RigidTransform::rot270: return "rot270";
        case RigidTransform::flip_h: return "flipH";
        case RigidTransform::flip_v: return "flipV";
    }
    return "?";
}

constexpr RigidTransform kAllTransforms[] = {
    RigidTransform::identity, RigidTransform::rot90,  RigidTransform::rot180,
    RigidTransform::rot270,   RigidTransform::flip_h, RigidTransform::flip_v,
};

namespace detail {

// Destination of source pixel (r, c); rot90 maps (r, c) -> (c, H-1-r).
inline void transform_coord(RigidTransform t, int h, int w, int r, int c, int& out_r, int& out_c) {
    switch (t) {
        case RigidTransform::identity: out_r = r; out_c = c; break;
        case RigidTransform::rot90: out_r = c; out_c = h - 1 - r; break;
        case RigidTransform::rot180: out_r = h - 1 - r; out_c = w - 1 - c; break;
        case RigidTransform::rot270: out_r = w - 1 - c; out_c = r; break;
        case RigidTransform::flip_h: out_r = r; out_c = w - 1 - c; break;
        case RigidTransform::flip_v: out_r = h - 1 - r; out_c = c; break;
    }
}

inline bool swaps_axes(RigidTransform t) {
    return t == RigidTransform::rot90 || t == RigidTransform::rot270;
}

}  // namespace detail

template <typename T>
Grid<T> apply_transform(const Grid<T>& grid, RigidTransform t) {
    const int h = grid.height(), w = grid.width();
    Grid<T> out(detail::swaps_axes(t) ? w : h, detail::swaps_axes(t) ? h : w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            int rr = 0, cc = 0;
            detail::transform_coord(t, h, w, r, c, rr, cc);
            out.at(rr, cc) = grid.at(r, c);
        }
    }
    return out;
}

/// Moves the pixel grid only; channel values are copied untouched, so
/// direction-dependent channels (e.g. HV) are deliberately NOT re-oriented.
inline ScalarField apply_transform(const ScalarField& field, RigidTransform t) {
    const int h = field.height, w = field.width;
    const bool swap = detail::swaps_axes(t);
    ScalarField out(swap ? w : h, swap ? h : w, field.channels);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            int rr = 0, cc = 0;
            detail::transform_coord(t, h, w, r, c, rr, cc);
            for (int ch = 0; ch < field.channels; ++ch) {
                out.at(rr, cc, ch) = field.at(r, c, ch);
            }
        }
    }
    return out;
}

inline RigidTransform inverse(RigidTransform t) {
    switch (t) {
        case RigidTransform::rot90: return RigidTransform::rot270;
        case RigidTransform::rot270: return RigidTransform::rot90;
        default: return t;  // identity, rot180 and flips are involutions
    }
}

}  // namespace seine
