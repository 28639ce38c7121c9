// Core raster containers: integer grids, multi-channel scalar fields, centroids.

#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seine/error.hpp"

namespace seine {

/**
 * @brief Dense row-major 2-D grid of values.
 *
 * All pixel-addressed types in the library (label maps, masks, semantic and
 * direction maps) are instances of this template. Indexing is (row, col)
 * with row 0 at the top; row increases downward, col increases rightward.
 */
template <typename T>
class Grid {
public:
    Grid() = default;

    Grid(int height, int width, T fill = T{})
        : height_(height), width_(width),
          cells_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill) {
        assert(height >= 0 && width >= 0);
    }

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    bool in_bounds(int r, int c) const {
        return r >= 0 && r < height_ && c >= 0 && c < width_;
    }

    T& at(int r, int c) {
        assert(in_bounds(r, c));
        return cells_[static_cast<std::size_t>(r) * width_ + c];
    }
    const T& at(int r, int c) const {
        assert(in_bounds(r, c));
        return cells_[static_cast<std::size_t>(r) * width_ + c];
    }

    /// Value at (r, c), or `fallback` when the coordinate is outside the grid.
    T at_or(int r, int c, T fallback) const {
        return in_bounds(r, c) ? at(r, c) : fallback;
    }

    std::vector<T>& cells() { return cells_; }
    const std::vector<T>& cells() const { return cells_; }

    bool same_shape(const Grid& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<T> cells_;
};

/// Instance labels: 0 = background, k > 0 = instance id.
using LabelMap = Grid<std::int32_t>;

/// Grid of {0,1}.
using BinaryMask = Grid<std::uint8_t>;

/// Grid of {0=background, 1=inside, 2=contour}.
using SemanticMask = Grid<std::uint8_t>;

/// Grid of {0=background, 1..K=direction class}.
using DirMap = Grid<std::int32_t>;

enum SemanticClass : std::uint8_t {
    kBackground = 0,
    kInside = 1,
    kContour = 2,
};

/// Real-valued centroid of one instance's pixel set.
struct Centroid {
    double row = 0.0;
    double col = 0.0;
    std::int32_t instance_id = 0;
};

/**
 * @brief Multi-channel real-valued field, row-major and channel-interleaved.
 *
 * Houses structure encodings, HV maps, position maps, probability fields and
 * feature tensors. The flat layout matches the SEF1 on-disk order exactly.
 */
struct ScalarField {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<double> values;

    ScalarField() = default;

    ScalarField(int h, int w, int c = 1, double fill = 0.0)
        : height(h), width(w), channels(c),
          values(static_cast<std::size_t>(h) * w * c, fill) {
        assert(h >= 0 && w >= 0 && c >= 1);
    }

    std::size_t index(int r, int c, int ch = 0) const {
        assert(r >= 0 && r < height && c >= 0 && c < width && ch >= 0 && ch < channels);
        return (static_cast<std::size_t>(r) * width + c) * channels + ch;
    }

    double& at(int r, int c, int ch = 0) { return values[index(r, c, ch)]; }
    double at(int r, int c, int ch = 0) const { return values[index(r, c, ch)]; }

    bool same_shape(const ScalarField& other) const {
        return height == other.height && width == other.width && channels == other.channels;
    }

    bool all_finite() const {
        for (double v : values) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const ScalarField&, const ScalarField&) = default;
};

inline void require_same_shape(const ScalarField& a, const ScalarField& b, const char* where) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch(std::string(where) + ": field shapes differ");
    }
}

template <typename T, typename U>
void require_same_shape(const Grid<T>& a, const Grid<U>& b, const char* where) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw DimensionMismatch(std::string(where) + ": grid shapes differ");
    }
}

}  // namespace seine
