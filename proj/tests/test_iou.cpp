#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ocrloop/metrics/iou.hpp"
#include "support/generators.hpp"

using namespace ocrloop;

TEST_CASE("iou: identical boxes", "[metrics][iou]") {
    const BoundingBox b{0, 0, 10, 10};
    CHECK(iou(b, b).value == 1.0);
}

TEST_CASE("iou: disjoint boxes", "[metrics][iou]") {
    CHECK(iou({0, 0, 10, 10}, {20, 20, 30, 30}).value == 0.0);
}

TEST_CASE("iou: half-overlapping boxes", "[metrics][iou]") {
    // intersection 5x10 = 50, union 100 + 100 - 50 = 150
    const auto s = iou({0, 0, 10, 10}, {5, 0, 15, 10});
    CHECK(s.value == Catch::Approx(1.0 / 3.0).margin(1e-12));
}

TEST_CASE("iou: zero-area union is defined as zero", "[metrics][iou]") {
    CHECK(iou({1, 1, 1, 1}, {1, 1, 1, 1}).value == 0.0);
}

TEST_CASE("iou: symmetry on random boxes", "[metrics][iou][property]") {
    std::mt19937 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const auto a = gen::random_box(rng);
        const auto b = gen::random_box(rng);
        const double ab = iou(a, b).value;
        CHECK(ab == iou(b, a).value);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("iou: shrinking the overlap decreases the score", "[metrics][iou]") {
    const BoundingBox base{0, 0, 10, 10};
    double prev = 1.0;
    for (double shift : {1.0, 3.0, 5.0, 7.0, 9.0}) {
        const double v = iou(base, {shift, 0, shift + 10, 10}).value;
        CHECK(v < prev);
        prev = v;
    }
}
