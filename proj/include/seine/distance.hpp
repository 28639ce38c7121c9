// Exact Euclidean distance transform on the pixel grid.
//
// Meijster's two-phase algorithm in pure integer arithmetic: the result is
// the exact minimum squared distance to the nearest site pixel, so it can be
// compared bit-for-bit against a brute-force nearest-site scan.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "seine/grid.hpp"

namespace seine {

/**
 * @brief Minimum squared Euclidean distance from every pixel to the nearest
 *        site (mask value 1), measured between pixel-center coordinates.
 *
 * The mask must contain at least one site; columns without sites are handled
 * by a sentinel that can never win against a real site.
 */
inline Grid<std::int64_t> squared_distance_transform(const BinaryMask& sites) {
    const int h = sites.height(), w = sites.width();
    Grid<std::int64_t> dt(h, w, 0);
    if (h == 0 || w == 0) return dt;

    // Phase 1: per column, vertical distance to the nearest site row.
    const std::int64_t inf_g = static_cast<std::int64_t>(h) + w;
    std::vector<std::int64_t> g(static_cast<std::size_t>(h) * w, inf_g);
    auto gat = [&](int r, int c) -> std::int64_t& {
        return g[static_cast<std::size_t>(r) * w + c];
    };
    for (int c = 0; c < w; ++c) {
        if (sites.at(0, c)) gat(0, c) = 0;
        for (int r = 1; r < h; ++r) {
            gat(r, c) = sites.at(r, c) ? 0 : std::min(inf_g, gat(r - 1, c) + 1);
        }
        for (int r = h - 2; r >= 0; --r) {
            gat(r, c) = std::min(gat(r, c), gat(r + 1, c) + 1);
        }
    }

    // Phase 2: per row, lower envelope of the parabolas (x-i)^2 + g(i)^2.
    std::vector<int> s(w, 0), t(w, 0);
    for (int r = 0; r < h; ++r) {
        auto f = [&](std::int64_t x, int i) {
            const std::int64_t gi = gat(r, i);
            return (x - i) * (x - i) + gi * gi;
        };
        // First column index where parabola u beats parabola i (u > i).
        // Both operands are non-negative at every call site, so truncating
        // division equals floor division.
        auto sep = [&](std::int64_t i, std::int64_t u) {
            const std::int64_t gi = gat(r, static_cast<int>(i));
            const std::int64_t gu = gat(r, static_cast<int>(u));
            return (u * u - i * i + gu * gu - gi * gi) / (2 * (u - i));
        };
        int q = 0;
        s[0] = 0;
        t[0] = 0;
        for (int u = 1; u < w; ++u) {
            while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
            } else {
                const std::int64_t boundary = 1 + sep(s[q], u);
                if (boundary < w) {
                    ++q;
                    s[q] = u;
                    t[q] = static_cast<int>(boundary);
                }
            }
        }
        for (int u = w - 1; u >= 0; --u) {
            dt.at(r, u) = f(u, s[q]);
            if (u == t[q]) --q;
        }
    }
    return dt;
}

}  // namespace seine
