// Copyright 2026 The gridctl Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDCTL_PWL_HPP_
#define GRIDCTL_PWL_HPP_

#include <span>
#include <vector>

namespace gridctl {

// Convex piecewise-linear function on [0, domain_max], stored as the upper
// envelope h(x) = max_i (slope_i * x + intercept_i). Pieces are kept sorted by
// strictly increasing slope and every stored piece is maximal somewhere on the
// domain, so pieces and segments correspond one to one.
class PiecewiseLinearConvex {
 public:
  struct Piece {
    double slope = 0.0;
    double intercept = 0.0;
  };

  // Interval [begin, end] of the domain on which a single piece is active.
  struct Segment {
    double begin = 0.0;
    double end = 0.0;
    double slope = 0.0;
    double width() const { return end - begin; }
  };

  // The zero function on [0, domain_max].
  PiecewiseLinearConvex() = default;

  // Builds the upper envelope of `pieces` restricted to [0, domain_max].
  // Pieces that are never maximal on the domain are dropped and equal slopes
  // are merged. Throws kInvalidArgument on an empty list, non-finite
  // coefficients or a negative domain.
  static PiecewiseLinearConvex FromPieces(std::vector<Piece> pieces,
                                          double domain_max);

  // Chord (secant) interpolation through the sample points (xs[i], ys[i]).
  // xs must start at 0 and be strictly increasing. The resulting function
  // matches the samples exactly. Throws kNonConvexCost if the chord slopes
  // decrease.
  static PiecewiseLinearConvex FromSamples(std::span<const double> xs,
                                           std::span<const double> ys);

  // Function with h(0) = value_at_zero whose slope on consecutive intervals
  // of the given widths is the given slope. Slopes must be non-decreasing.
  static PiecewiseLinearConvex FromSegments(double value_at_zero,
                                            std::span<const Segment> segments);

  // Cheapest split of a total amount over several convex functions
  // (infimal convolution). Domains add up; segments are merged by slope.
  static PiecewiseLinearConvex InfimalConvolution(
      std::span<const PiecewiseLinearConvex> functions);

  // Evaluates the max-of-affine representation. Callers that care about the
  // domain check it themselves; beyond domain_max the last piece extends.
  double operator()(double x) const;

  const std::vector<Piece>& pieces() const { return pieces_; }
  double domain_max() const { return domain_max_; }
  double value_at_zero() const { return (*this)(0.0); }

  // Active interval of every piece on [0, domain_max], in slope order.
  std::vector<Segment> Segments() const;

  // Segments covering [0, limit]: clipped when limit < domain_max, with the
  // last piece continued up to limit (possibly +infinity) otherwise.
  // Zero-width segments are dropped.
  std::vector<Segment> SegmentsUpTo(double limit) const;

  // Breakpoints 0 = x_0 < x_1 < ... < x_k = domain_max.
  std::vector<double> Breakpoints() const;

  bool IsZero() const;

 private:
  std::vector<Piece> pieces_{Piece{}};
  double domain_max_ = 0.0;
};

}  // namespace gridctl

#endif  // GRIDCTL_PWL_HPP_
