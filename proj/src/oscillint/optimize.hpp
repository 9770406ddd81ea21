#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace oscillint {

struct Min1D {
  double x;
  double f;
  int evaluations;
};

/// Golden-section minimisation of a unimodal f on [lo, hi].
Min1D golden_section(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-10,
                     int max_iter = 200);

struct Min2D {
  std::array<double, 2> x;
  double f;
  int evaluations;
};

struct NelderMeadOptions {
  int restarts = 5;
  int max_iter = 400;
  double ftol = 1e-12;
  std::uint64_t seed = 0x5eed'0a11'c0ffee01ULL;
};

/// Nelder-Mead on a box. The first run starts at `start`; each restart starts
/// at a point drawn from a fixed-seed generator inside the box. Points outside
/// the box are clamped before evaluation.
Min2D nelder_mead_box(const std::function<double(double, double)>& f, std::array<double, 2> start,
                      std::array<double, 2> lo, std::array<double, 2> hi, const NelderMeadOptions& opt = {});

}  // namespace oscillint
