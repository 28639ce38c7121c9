#include <catch2/catch_amalgamated.hpp>

#include "seine/components.hpp"
#include "seine/morphology.hpp"
#include "seine/rng.hpp"
#include "test_util.hpp"

using namespace seine;
using testutil::parse_labels;
using testutil::parse_mask;

namespace {

// Window-scan morphology straight from the definition, as an oracle for the
// separable implementation.
BinaryMask naive_morph(const BinaryMask& mask, int radius, bool dilation) {
    BinaryMask out(mask.height(), mask.width(), 0);
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            bool acc = !dilation;
            for (int dr = -radius; dr <= radius; ++dr) {
                for (int dc = -radius; dc <= radius; ++dc) {
                    const bool v = mask.at_or(r + dr, c + dc, 0) != 0;
                    acc = dilation ? (acc || v) : (acc && v);
                }
            }
            out.at(r, c) = acc ? 1 : 0;
        }
    }
    return out;
}

BinaryMask random_mask(DetRng& rng, int h, int w, double density) {
    BinaryMask mask(h, w, 0);
    for (auto& v : mask.cells()) v = rng.uniform01() < density ? 1 : 0;
    return mask;
}

}  // namespace

TEST_CASE("dilate matches the square structuring element definition") {
    BinaryMask single(5, 5, 0);
    single.at(2, 2) = 1;
    CHECK(dilate(single, 1) == parse_mask({".....",
                                           ".###.",
                                           ".###.",
                                           ".###.",
                                           "....."}));

    CHECK(dilate(BinaryMask(4, 6, 0), 1) == BinaryMask(4, 6, 0));
    CHECK(dilate(BinaryMask(4, 6, 1), 2) == BinaryMask(4, 6, 1));
}

TEST_CASE("erode clips against the border as background") {
    CHECK(erode(parse_mask({".....",
                            ".###.",
                            ".###.",
                            ".###.",
                            "....."}),
                1) == parse_mask({".....",
                                  ".....",
                                  "..#..",
                                  ".....",
                                  "....."}));

    const BinaryMask interior = erode(BinaryMask(5, 7, 1), 1);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 7; ++c) {
            CHECK(interior.at(r, c) == ((r > 0 && r < 4 && c > 0 && c < 6) ? 1 : 0));
        }
    }

    BinaryMask single(5, 5, 0);
    single.at(2, 2) = 1;
    CHECK(erode(single, 1) == BinaryMask(5, 5, 0));
}

TEST_CASE("separable morphology agrees with the window-scan oracle") {
    DetRng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryMask mask = random_mask(rng, 17, 23, 0.4);
        const int radius = 1 + trial % 3;
        CHECK(dilate(mask, radius) == naive_morph(mask, radius, true));
        CHECK(erode(mask, radius) == naive_morph(mask, radius, false));
    }
}

TEST_CASE("closing restores fat rectangles") {
    for (const auto [h, w] : {std::pair{3, 3}, std::pair{4, 7}, std::pair{5, 5}}) {
        BinaryMask mask(11, 13, 0);
        for (int r = 3; r < 3 + h; ++r) {
            for (int c = 4; c < 4 + w; ++c) mask.at(r, c) = 1;
        }
        CHECK(erode(dilate(mask, 1), 1) == mask);
    }
}

TEST_CASE("extract_contour is the instance minus its erosion") {
    const LabelMap square = parse_labels({".....",
                                          ".111.",
                                          ".111.",
                                          ".111.",
                                          "....."});
    CHECK(extract_contour(square, 1) == parse_mask({".....",
                                                    ".###.",
                                                    ".#.#.",
                                                    ".###.",
                                                    "....."}));

    LabelMap dot(3, 3, 0);
    dot.at(1, 2) = 1;
    BinaryMask dot_contour(3, 3, 0);
    dot_contour.at(1, 2) = 1;
    CHECK(extract_contour(dot, 1) == dot_contour);

    const LabelMap two_by_two = parse_labels({"11..",
                                              "11.."});
    CHECK(extract_contour(two_by_two, 1) == parse_mask({"##..",
                                                        "##.."}));

    CHECK_THROWS_AS(extract_contour(square, 7), UnknownInstance);
    CHECK_THROWS_AS(extract_contour(square, 0), UnknownInstance);
}

TEST_CASE("contour pixels stay inside their instance") {
    DetRng rng(7);
    BinaryMask mask = random_mask(rng, 20, 20, 0.45);
    const LabelMap labels = connected_components(mask, 8);
    for (const InstanceStats& s : collect_instance_stats(labels)) {
        const BinaryMask contour = extract_contour(labels, s.id);
        std::int64_t count = 0;
        for (int r = 0; r < 20; ++r) {
            for (int c = 0; c < 20; ++c) {
                if (!contour.at(r, c)) continue;
                ++count;
                CHECK(labels.at(r, c) == s.id);
            }
        }
        CHECK(count > 0);  // every non-empty instance has a contour
    }
}

TEST_CASE("semantic_from_labels partitions pixels") {
    const LabelMap square = parse_labels({".....",
                                          ".111.",
                                          ".111.",
                                          ".111.",
                                          "....."});
    const SemanticMask sem = semantic_from_labels(square);
    CHECK(sem.at(2, 2) == kInside);
    for (int r = 1; r <= 3; ++r) {
        for (int c = 1; c <= 3; ++c) {
            if (r != 2 || c != 2) CHECK(sem.at(r, c) == kContour);
        }
    }
    CHECK(sem.at(0, 0) == kBackground);

    CHECK(semantic_from_labels(LabelMap(4, 4, 0)) == SemanticMask(4, 4, 0));

    LabelMap dot(3, 3, 0);
    dot.at(0, 1) = 2;
    const SemanticMask dot_sem = semantic_from_labels(dot);
    CHECK(dot_sem.at(0, 1) == kContour);
    for (std::uint8_t v : dot_sem.cells()) CHECK(v != kInside);
}

TEST_CASE("semantic contour equals the union of per-instance contours") {
    DetRng rng(11);
    const BinaryMask mask = random_mask(rng, 24, 18, 0.5);
    const LabelMap labels = connected_components(mask, 4);
    const SemanticMask sem = semantic_from_labels(labels);

    BinaryMask contour_union(24, 18, 0);
    for (const InstanceStats& s : collect_instance_stats(labels)) {
        const BinaryMask contour = extract_contour(labels, s.id);
        for (std::size_t i = 0; i < contour.size(); ++i) {
            if (contour.cells()[i]) contour_union.cells()[i] = 1;
        }
    }
    for (std::size_t i = 0; i < sem.size(); ++i) {
        CHECK((sem.cells()[i] == kContour) == (contour_union.cells()[i] == 1));
        CHECK((sem.cells()[i] != kBackground) == (labels.cells()[i] != 0));
    }
}

TEST_CASE("connected_components labels in raster order") {
    const BinaryMask blocks = parse_mask({"##..##",
                                          "##..##",
                                          "......"});
    const LabelMap labeled = connected_components(blocks, 4);
    CHECK(labeled.at(0, 0) == 1);
    CHECK(labeled.at(0, 4) == 2);
    CHECK(labeled.at(2, 0) == 0);

    const BinaryMask diagonal = parse_mask({"#.",
                                            ".#"});
    CHECK(collect_instance_stats(connected_components(diagonal, 4)).size() == 2);
    CHECK(collect_instance_stats(connected_components(diagonal, 8)).size() == 1);

    CHECK(connected_components(BinaryMask(3, 3, 0), 4) == LabelMap(3, 3, 0));
}

TEST_CASE("connected_components is deterministic") {
    DetRng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const BinaryMask mask = random_mask(rng, 32, 32, 0.5);
        for (int connectivity : {4, 8}) {
            const LabelMap a = connected_components(mask, connectivity);
            CHECK(a == connected_components(mask, connectivity));
            // labels are consecutive 1..N
            std::int32_t max_label = 0;
            for (auto v : a.cells()) max_label = std::max(max_label, v);
            CHECK(collect_instance_stats(a).size() == static_cast<std::size_t>(max_label));
        }
    }
}

TEST_CASE("instance_centroids computes coordinate means") {
    const LabelMap square = parse_labels({".....",
                                          ".111.",
                                          ".111.",
                                          ".111.",
                                          "....."});
    auto centroids = instance_centroids(square);
    REQUIRE(centroids.size() == 1);
    CHECK(centroids[0].row == 2.0);
    CHECK(centroids[0].col == 2.0);

    LabelMap dot(1, 5, 0);
    dot.at(0, 4) = 3;
    centroids = instance_centroids(dot);
    REQUIRE(centroids.size() == 1);
    CHECK(centroids[0].instance_id == 3);
    CHECK(centroids[0].row == 0.0);
    CHECK(centroids[0].col == 4.0);

    const LabelMap ell = parse_labels({"1.",
                                       "11"});
    centroids = instance_centroids(ell);
    REQUIRE(centroids.size() == 1);
    CHECK(centroids[0].row == Catch::Approx(2.0 / 3.0));
    CHECK(centroids[0].col == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("centroids stay inside the instance bounding box") {
    DetRng rng(17);
    const BinaryMask mask = random_mask(rng, 30, 30, 0.4);
    const LabelMap labels = connected_components(mask, 8);
    const auto stats = collect_instance_stats(labels);
    const auto centroids = instance_centroids(labels);
    REQUIRE(stats.size() == centroids.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        CHECK(centroids[i].instance_id == stats[i].id);
        CHECK(centroids[i].row >= stats[i].min_row);
        CHECK(centroids[i].row <= stats[i].max_row);
        CHECK(centroids[i].col >= stats[i].min_col);
        CHECK(centroids[i].col <= stats[i].max_col);
    }
}

TEST_CASE("downsample_field averages blocks") {
    CHECK(downsample_field(ScalarField(6, 4, 1, 3.5), 2) == ScalarField(3, 2, 1, 3.5));

    ScalarField tiny(2, 2, 1);
    tiny.at(0, 0) = 0.0;
    tiny.at(0, 1) = 1.0;
    tiny.at(1, 0) = 2.0;
    tiny.at(1, 1) = 3.0;
    const ScalarField pooled = downsample_field(tiny, 2);
    REQUIRE(pooled.height == 1);
    REQUIRE(pooled.width == 1);
    CHECK(pooled.at(0, 0) == 1.5);

    ScalarField checker(4, 4, 1);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) checker.at(r, c) = (r + c) % 2;
    }
    for (double v : downsample_field(checker, 2).values) CHECK(v == 0.5);

    CHECK_THROWS_AS(downsample_field(ScalarField(5, 4, 1), 2), DimensionMismatch);
}

TEST_CASE("downsampling preserves the global mean") {
    DetRng rng(23);
    ScalarField field(12, 8, 2);
    for (double& v : field.values) v = rng.uniform(-5.0, 5.0);
    for (int factor : {2, 4}) {
        const ScalarField pooled = downsample_field(field, factor);
        double mean_full = 0.0, mean_pooled = 0.0;
        for (double v : field.values) mean_full += v;
        for (double v : pooled.values) mean_pooled += v;
        mean_full /= static_cast<double>(field.values.size());
        mean_pooled /= static_cast<double>(pooled.values.size());
        CHECK(mean_pooled == Catch::Approx(mean_full).margin(1e-12));
    }
}

TEST_CASE("semantic downsampling takes the majority with low-class ties") {
    const SemanticMask mask = testutil::parse_semantic({"1122",
                                                        "1100",
                                                        "2211",
                                                        "2211"});
    const SemanticMask pooled = downsample_semantic(mask, 2);
    CHECK(pooled.at(0, 0) == 1);  // 4 votes for class 1
    CHECK(pooled.at(0, 1) == 0);  // tie between 0 and 2 -> lowest class
    CHECK(pooled.at(1, 0) == 2);
    CHECK(pooled.at(1, 1) == 1);

    CHECK_THROWS_AS(downsample_semantic(SemanticMask(3, 4, 0), 2), DimensionMismatch);
}
