// Small helpers shared by the unit test suites.

#pragma once

#include <string>
#include <vector>

#include "seine/grid.hpp"

namespace seine::testutil {

// '.' = 0, '1'..'9' = instance id, '#' = 1 (for masks).
inline LabelMap parse_labels(const std::vector<std::string>& rows) {
    LabelMap out(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 0);
    for (int r = 0; r < out.height(); ++r) {
        for (int c = 0; c < out.width(); ++c) {
            const char ch = rows[r][c];
            if (ch >= '1' && ch <= '9') out.at(r, c) = ch - '0';
        }
    }
    return out;
}

inline BinaryMask parse_mask(const std::vector<std::string>& rows) {
    BinaryMask out(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 0);
    for (int r = 0; r < out.height(); ++r) {
        for (int c = 0; c < out.width(); ++c) {
            if (rows[r][c] == '#') out.at(r, c) = 1;
        }
    }
    return out;
}

inline SemanticMask parse_semantic(const std::vector<std::string>& rows) {
    SemanticMask out(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 0);
    for (int r = 0; r < out.height(); ++r) {
        for (int c = 0; c < out.width(); ++c) {
            const char ch = rows[r][c];
            if (ch == '1' || ch == '2') out.at(r, c) = static_cast<std::uint8_t>(ch - '0');
        }
    }
    return out;
}

}  // namespace seine::testutil
