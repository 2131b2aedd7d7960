#pragma once

#include <cstdint>

#include "stein/convex.hpp"

namespace stein {

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;  ///< zero for closed-form values
  bool exact = true;
};

struct MeasureOptions {
  std::size_t qmc_points = std::size_t{1} << 16;
  int replicates = 16;  ///< random Cranley-Patterson shifts
  std::uint64_t seed = 0x9a55ULL;
};

/// Phi(C) for Z ~ N(0, I_k).
///
/// Closed forms: half-spaces (1D CDF of the signed offset), centred balls
/// (chi CDF), boxes (product of 1D CDF differences), every set when k = 1.
/// Otherwise randomized Halton QMC over k - 1 axes with the remaining axis
/// integrated exactly along line sections; the standard error comes from the
/// spread over replicates.
MeasureEstimate gaussian_measure(const ConvexSet& set, const MeasureOptions& options = {});

/// P(scale Z in C^{2 eps} \ C^{-2 eps}): Gaussian mass of the 2 eps boundary
/// shell of C, for Z scaled by `scale`.
MeasureEstimate shell_measure(const ConvexSet& set, double eps, double scale, const MeasureOptions& options = {});

/// The d-dimensional Halton point with index i (bases are the first d primes).
Vector halton_point(std::uint64_t index, int dims);

}  // namespace stein
