#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include <modfold/frame_bounds.hpp>
#include <modfold/separated_set.hpp>

using namespace modfold;

namespace {

SeparatedSet lattice(double spacing, std::size_t window) {
    auto half = static_cast<std::int64_t>(window / 2);
    return SeparatedSet::uniform(spacing, -half, half - 1);
}

}

TEST_CASE("frame bounds of the half-integer lattice") {
    FrameBounds fb = frame_bounds_estimate(lattice(0.5, 256), 1.0);
    CHECK(fb.A == Catch::Approx(1.842892592).margin(2e-4));
    CHECK(fb.B == Catch::Approx(2.0).margin(1e-6));
    CHECK(fb.A <= fb.B);
    CHECK(fb.window == 256);
}

TEST_CASE("frame bounds of a 0.7-spaced lattice") {
    FrameBounds fb = frame_bounds_estimate(lattice(0.7, 256), 1.0);
    CHECK(fb.A == Catch::Approx(1.323622626).margin(2e-4));
    CHECK(fb.B == Catch::Approx(1.0 / 0.7).margin(1e-4));
}

TEST_CASE("integer lattice at unit bandwidth is an orthonormal basis") {
    FrameBounds fb = frame_bounds_estimate(lattice(1.0, 256), 1.0);
    CHECK(fb.A == Catch::Approx(1.0).margin(1e-8));
    CHECK(fb.B == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("undersampled lattice loses its lower bound") {
    FrameBounds fb = frame_bounds_estimate(lattice(1.25, 256), 1.0);
    CHECK(fb.A < 0.05);
    CHECK(fb.B > 1.0);
    CHECK(fb.basis_size > fb.window);
}

TEST_CASE("lower bound improves as the window grows") {
    double a64 = frame_bounds_estimate(lattice(0.5, 64), 1.0).A;
    double a128 = frame_bounds_estimate(lattice(0.5, 128), 1.0).A;
    double a512 = frame_bounds_estimate(lattice(0.5, 512), 1.0).A;
    CHECK(a64 == Catch::Approx(1.784250809).margin(2e-4));
    CHECK(a128 == Catch::Approx(1.814285300).margin(2e-4));
    CHECK(a512 == Catch::Approx(1.863647352).margin(2e-4));
    CHECK(a64 < a128);
    CHECK(a128 < a512);
}

TEST_CASE("jittered oversampled set keeps a healthy lower bound") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> jit(-0.1, 0.1);
    std::vector<double> pts;
    for (int k = -64; k < 64; ++k) pts.push_back(0.5 * k + jit(rng));
    SeparatedSet X = SeparatedSet::from_points(pts);
    REQUIRE(X.separation() >= 0.29);
    FrameBounds fb = frame_bounds_estimate(X, 1.0);
    CHECK(fb.A > 1.0);
    CHECK(fb.B < 3.0);
}

TEST_CASE("removing a point cannot raise the lower bound") {
    SeparatedSet X = lattice(0.5, 64);
    FrameBounds full = frame_bounds_estimate(X, 1.0);
    FrameBounds pruned = frame_bounds_estimate(X.without({32}), 1.0);
    CHECK(pruned.A <= full.A + 1e-10);
}

TEST_CASE("frame bound argument validation") {
    REQUIRE_THROWS_AS(frame_bounds_estimate(SeparatedSet::from_points({0.0}), 1.0),
                      usage_error);
    REQUIRE_THROWS_AS(frame_bounds_estimate(lattice(0.5, 16), 0.0), usage_error);
    REQUIRE_THROWS_AS(frame_bounds_estimate(lattice(0.5, 16), -1.0), usage_error);
}
