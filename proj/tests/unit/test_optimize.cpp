#include <doctest.h>

#include <cmath>

#include "oscillint/optimize.hpp"

using namespace oscillint;

TEST_SUITE("optimize") {
  TEST_CASE("golden section finds a parabola minimum") {
    const auto m = golden_section([](double x) { return (x - 0.3) * (x - 0.3) + 2.0; }, -5.0, 5.0);
    // f is flat to rounding within sqrt(eps) of the minimum.
    CHECK(std::abs(m.x - 0.3) <= 1e-7);
    CHECK(m.f == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("golden section respects the bracket") {
    const auto m = golden_section([](double x) { return x; }, 1.0, 2.0);
    CHECK(m.x == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("Nelder-Mead on a box") {
    const auto rosen = [](double x, double y) { return 100 * (y - x * x) * (y - x * x) + (1 - x) * (1 - x); };
    const auto m = nelder_mead_box(rosen, {-1.0, 2.0}, {-2.0, -2.0}, {2.0, 3.0});
    CHECK(std::abs(m.x[0] - 1.0) <= 1e-3);
    CHECK(std::abs(m.x[1] - 1.0) <= 1e-3);
    CHECK(m.f <= 1e-6);
  }

  TEST_CASE("Nelder-Mead clamps to the box") {
    const auto m = nelder_mead_box([](double x, double y) { return x + y; }, {0.5, 0.5}, {0.0, 0.0}, {1.0, 1.0});
    CHECK(m.x[0] >= 0.0);
    CHECK(m.x[1] >= 0.0);
    CHECK(m.f <= 1e-6);
  }

  TEST_CASE("Nelder-Mead is deterministic") {
    const auto f = [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y) + 0.1 * x * x; };
    const auto a = nelder_mead_box(f, {0.0, 0.0}, {-3.0, -3.0}, {3.0, 3.0});
    const auto b = nelder_mead_box(f, {0.0, 0.0}, {-3.0, -3.0}, {3.0, 3.0});
    CHECK(a.x == b.x);
    CHECK(a.f == b.f);
  }
}
