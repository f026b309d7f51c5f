#pragma once

#include <cstddef>

namespace semijulia {

// Numeric conventions shared by every module. All reals are IEEE doubles.
struct Tolerances {
  // Polynomial coefficients below this fraction of the largest one are zero.
  static constexpr double coeff_strip = 1e-14;
  // Two roots closer than this are one root.
  static constexpr double root_merge = 1e-8;
  // Accepted relative residual |p(r)| / sum_k |a_k||r|^k for a root.
  static constexpr double root_residual = 1e-10;
  // Aberth iteration.
  static constexpr int root_max_iter = 500;
  static constexpr double root_step = 1e-13;
  // Coprimality: a root of one side where the other side is this small
  // (relative) counts as a common root.
  static constexpr double common_root = 1e-10;
  // Evaluation: both numerator and denominator below this relative size.
  static constexpr double indeterminate = 1e-13;

  // Multiplier classification.
  static constexpr double superattracting = 1e-8;
  static constexpr double neutral_band = 1e-8;
  static constexpr double root_of_unity = 1e-6;
  static constexpr int root_of_unity_max_order = 24;

  // Explicit composites are refused beyond this degree.
  static constexpr int degree_cap = 1024;

  // Preimage round trip and set membership on the sphere.
  static constexpr double preimage_roundtrip = 1e-8;
  static constexpr double same_point = 1e-8;
};

}  // namespace semijulia
