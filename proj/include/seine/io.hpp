// Bit-exact file formats: 16-bit binary PGM for label/class grids, the SEF1
// float field container, and the JSON report layouts.

#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seine/grid.hpp"
#include "seine/invariance.hpp"
#include "seine/metrics.hpp"

namespace seine {

// ---------------------------------------------------------------------------
// PGM (P5, maxval 65535, big-endian samples)
// ---------------------------------------------------------------------------

inline void write_pgm(const std::string& path, const LabelMap& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_pgm: cannot open " + path);
    out << "P5\n" << grid.width() << " " << grid.height() << "\n65535\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(grid.size() * 2);
    for (std::int32_t v : grid.cells()) {
        if (v < 0 || v > 65535) {
            throw FormatError("write_pgm: value " + std::to_string(v) + " out of 16-bit range");
        }
        bytes.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
        bytes.push_back(static_cast<unsigned char>(v & 0xff));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write_pgm: write failed for " + path);
}

inline void write_pgm(const std::string& path, const Grid<std::uint8_t>& grid) {
    LabelMap widened(grid.height(), grid.width(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        widened.cells()[i] = grid.cells()[i];
    }
    write_pgm(path, widened);
}

namespace detail {

// Next whitespace-delimited token, skipping '#' comment lines.
inline std::string next_pnm_token(std::istream& in) {
    std::string token;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ch = in.get();
        } else {
            break;
        }
    }
    while (ch != EOF && !std::isspace(static_cast<unsigned char>(ch))) {
        token.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    return token;
}

inline int parse_pnm_int(std::istream& in, const char* what) {
    const std::string token = next_pnm_token(in);
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size() || value < 0) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw FormatError(std::string("read_pgm: bad ") + what + " field");
    }
}

}  // namespace detail

inline LabelMap read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_pgm: cannot open " + path);
    if (detail::next_pnm_token(in) != "P5") throw FormatError("read_pgm: missing P5 magic");
    const int width = detail::parse_pnm_int(in, "width");
    const int height = detail::parse_pnm_int(in, "height");
    const int maxval = detail::parse_pnm_int(in, "maxval");
    if (maxval != 65535) throw FormatError("read_pgm: expected maxval 65535");
    // Exactly one whitespace byte separates the header from the samples; the
    // token reader has already consumed it.
    LabelMap grid(height, width, 0);
    std::vector<unsigned char> bytes(grid.size() * 2);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw FormatError("read_pgm: truncated sample data");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.cells()[i] = static_cast<std::int32_t>(bytes[2 * i]) << 8 | bytes[2 * i + 1];
    }
    return grid;
}

/// Read a PGM and validate it as a {0,1,2} semantic mask.
inline SemanticMask read_semantic_pgm(const std::string& path) {
    const LabelMap raw = read_pgm(path);
    SemanticMask mask(raw.height(), raw.width(), 0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::int32_t v = raw.cells()[i];
        if (v < 0 || v > 2) {
            throw FormatError("read_semantic_pgm: value " + std::to_string(v) +
                              " is not a semantic class");
        }
        mask.cells()[i] = static_cast<std::uint8_t>(v);
    }
    return mask;
}

// ---------------------------------------------------------------------------
// SEF1 (ASCII header + little-endian float32 samples)
// ---------------------------------------------------------------------------

inline void write_sef1(const std::string& path, const ScalarField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_sef1: cannot open " + path);
    out << "SEF1 " << field.height << " " << field.width << " " << field.channels << "\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(field.values.size() * 4);
    for (double v : field.values) {
        const auto u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        bytes.push_back(static_cast<unsigned char>(u & 0xff));
        bytes.push_back(static_cast<unsigned char>((u >> 8) & 0xff));
        bytes.push_back(static_cast<unsigned char>((u >> 16) & 0xff));
        bytes.push_back(static_cast<unsigned char>((u >> 24) & 0xff));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write_sef1: write failed for " + path);
}

inline ScalarField read_sef1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_sef1: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw FormatError("read_sef1: missing header line");
    std::istringstream hs(header);
    std::string magic;
    int height = 0, width = 0, channels = 0;
    hs >> magic >> height >> width >> channels;
    if (magic != "SEF1" || hs.fail() || height < 0 || width < 0 || channels < 1) {
        throw FormatError("read_sef1: malformed header");
    }
    ScalarField field(height, width, channels);
    std::vector<unsigned char> bytes(field.values.size() * 4);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw FormatError("read_sef1: truncated sample data");
    }
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) |
                                static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8 |
                                static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16 |
                                static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24;
        field.values[i] = static_cast<double>(std::bit_cast<float>(u));
    }
    return field;
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["dice"] = report.dice;
    j["aji"] = report.aji;
    j["hausdorff"] = report.hausdorff;
    j["pq"] = report.pq;
    auto& matches = j["matches"] = nlohmann::ordered_json::array();
    for (const InstanceMatch& m : report.matches) {
        matches.push_back({m.gt_id, m.pred_id, m.iou});
    }
    return j;
}

inline nlohmann::ordered_json to_json(const InvarianceReport& row) {
    nlohmann::ordered_json j;
    j["encoder"] = row.encoder;
    j["transform"] = row.transform;
    j["max_abs_error"] = row.max_abs_error;
    j["mean_abs_error"] = row.mean_abs_error;
    j["pipeline_dice_bias"] = row.pipeline_dice_bias;
    return j;
}

inline nlohmann::ordered_json to_json(const RelationReport& rel) {
    nlohmann::ordered_json j;
    j["corr_h"] = rel.corr_h;
    j["corr_v"] = rel.corr_v;
    j["dir_agreement"] = rel.dir_agreement;
    j["sample_count"] = rel.sample_count;
    return j;
}

}  // namespace seine
