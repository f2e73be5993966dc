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

#include "gridctl/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridctl/error.hpp"

namespace gridctl {
namespace {

constexpr double kSlopeTol = 1e-12;

bool SameSlope(double a, double b) {
  return std::abs(a - b) <= kSlopeTol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// x where two lines with distinct slopes cross.
double Crossing(const PiecewiseLinearConvex::Piece& a,
                const PiecewiseLinearConvex::Piece& b) {
  return (a.intercept - b.intercept) / (b.slope - a.slope);
}

}  // namespace

PiecewiseLinearConvex PiecewiseLinearConvex::FromPieces(
    std::vector<Piece> pieces, double domain_max) {
  if (pieces.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "piecewise-linear function needs at least one piece");
  }
  if (!(domain_max >= 0.0) || std::isnan(domain_max)) {
    throw Error(ErrorCode::kInvalidArgument, "piecewise-linear domain must be non-negative");
  }
  for (const Piece& p : pieces) {
    if (!std::isfinite(p.slope) || !std::isfinite(p.intercept)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite piece coefficient");
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept > b.intercept;
  });
  std::vector<Piece> dedup;
  for (const Piece& p : pieces) {
    if (!dedup.empty() && SameSlope(dedup.back().slope, p.slope)) {
      dedup.back().intercept = std::max(dedup.back().intercept, p.intercept);
      continue;
    }
    dedup.push_back(p);
  }

  // Upper envelope, lines in increasing slope order.
  std::vector<Piece> hull;
  for (const Piece& p : dedup) {
    while (hull.size() >= 2) {
      const Piece& a = hull[hull.size() - 2];
      const Piece& b = hull.back();
      if (Crossing(a, p) <= Crossing(a, b)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }

  // Clip to [0, domain_max]. A piece is kept if its active interval overlaps
  // the domain with positive length, or if it is the piece active at 0 on a
  // degenerate domain.
  std::vector<Piece> kept;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const double begin = i == 0 ? -std::numeric_limits<double>::infinity()
                                : Crossing(hull[i - 1], hull[i]);
    const double end = i + 1 == hull.size() ? std::numeric_limits<double>::infinity()
                                            : Crossing(hull[i], hull[i + 1]);
    const double lo = std::max(begin, 0.0);
    const double hi = std::min(end, domain_max);
    if (hi > lo || (domain_max == 0.0 && begin <= 0.0 && end >= 0.0 && kept.empty())) {
      kept.push_back(hull[i]);
    }
  }
  if (kept.empty()) {
    // Only possible through rounding at a breakpoint; keep the piece at 0.
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
      if (hull[i].intercept > best_value) {
        best_value = hull[i].intercept;
        best = i;
      }
    }
    kept.push_back(hull[best]);
  }

  PiecewiseLinearConvex out;
  out.pieces_ = std::move(kept);
  out.domain_max_ = domain_max;
  return out;
}

PiecewiseLinearConvex PiecewiseLinearConvex::FromSamples(
    std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sample vectors must be non-empty and of equal size");
  }
  if (xs.front() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "samples must start at x = 0");
  }
  if (xs.size() == 1) {
    return FromPieces({Piece{0.0, ys.front()}}, 0.0);
  }
  std::vector<Piece> pieces;
  double previous_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double dx = xs[i + 1] - xs[i];
    if (!(dx > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "sample abscissae must be strictly increasing");
    }
    const double slope = (ys[i + 1] - ys[i]) / dx;
    if (previous_slope - slope > 1e-9 * (1.0 + std::abs(previous_slope))) {
      throw Error(ErrorCode::kNonConvexCost, "sampled function has decreasing chord slopes");
    }
    previous_slope = std::max(previous_slope, slope);
    pieces.push_back(Piece{slope, ys[i] - slope * xs[i]});
  }
  return FromPieces(std::move(pieces), xs.back());
}

PiecewiseLinearConvex PiecewiseLinearConvex::FromSegments(
    double value_at_zero, std::span<const Segment> segments) {
  std::vector<Piece> pieces;
  double x = 0.0;
  double y = value_at_zero;
  double previous_slope = -std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) {
    if (s.slope < previous_slope && !SameSlope(s.slope, previous_slope)) {
      throw Error(ErrorCode::kNonConvexCost, "segment slopes must be non-decreasing");
    }
    previous_slope = s.slope;
    pieces.push_back(Piece{s.slope, y - s.slope * x});
    x += s.width();
    y += s.slope * s.width();
  }
  if (pieces.empty()) pieces.push_back(Piece{0.0, value_at_zero});
  return FromPieces(std::move(pieces), x);
}

PiecewiseLinearConvex PiecewiseLinearConvex::InfimalConvolution(
    std::span<const PiecewiseLinearConvex> functions) {
  double value0 = 0.0;
  std::vector<Segment> merged;
  for (const auto& f : functions) {
    value0 += f.value_at_zero();
    for (const Segment& s : f.Segments()) {
      if (s.width() > 0.0) merged.push_back(s);
    }
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Segment& a, const Segment& b) { return a.slope < b.slope; });
  double x = 0.0;
  for (Segment& s : merged) {
    const double w = s.width();
    s.begin = x;
    s.end = x + w;
    x += w;
  }
  return FromSegments(value0, merged);
}

double PiecewiseLinearConvex::operator()(double x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Piece& p : pieces_) best = std::max(best, p.slope * x + p.intercept);
  return best;
}

std::vector<double> PiecewiseLinearConvex::Breakpoints() const {
  std::vector<double> out{0.0};
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    out.push_back(std::clamp(Crossing(pieces_[i], pieces_[i + 1]), 0.0, domain_max_));
  }
  out.push_back(domain_max_);
  return out;
}

std::vector<PiecewiseLinearConvex::Segment> PiecewiseLinearConvex::Segments() const {
  const std::vector<double> bp = Breakpoints();
  std::vector<Segment> out;
  out.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    out.push_back(Segment{bp[i], bp[i + 1], pieces_[i].slope});
  }
  return out;
}

std::vector<PiecewiseLinearConvex::Segment> PiecewiseLinearConvex::SegmentsUpTo(double limit) const {
  std::vector<Segment> out;
  for (Segment seg : Segments()) {
    if (seg.begin >= limit) break;
    seg.end = std::min(seg.end, limit);
    if (seg.width() > 0.0) out.push_back(seg);
  }
  if (limit > domain_max_) {
    const double slope = pieces_.back().slope;
    if (!out.empty() && out.back().slope == slope) {
      out.back().end = limit;
    } else {
      out.push_back(Segment{domain_max_, limit, slope});
    }
  }
  return out;
}

bool PiecewiseLinearConvex::IsZero() const {
  return pieces_.size() == 1 && pieces_[0].slope == 0.0 && pieces_[0].intercept == 0.0;
}

}  // namespace gridctl
