// Copyright 2026 The shieldsim Authors
//
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

#ifndef SHIELDSIM_GEOMETRY_HPP_
#define SHIELDSIM_GEOMETRY_HPP_

#include <cmath>
#include <limits>
#include <span>
#include <variant>

namespace shieldsim::geometry {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double Dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double Norm(Point2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double Distance(Point2 a, Point2 b) { return Norm(a - b); }

struct Ball {
  Point2 center;
  double radius = 0.0;
  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Swept disc: every point within `radius` of the segment a-b. `a == b`
/// degenerates to a ball.
struct Capsule {
  Point2 a;
  Point2 b;
  double radius = 0.0;
  friend bool operator==(const Capsule&, const Capsule&) = default;
};

struct Segment {
  Point2 start;
  Point2 end;
};

using Primitive = std::variant<Ball, Capsule>;

double DistPointSegment(Point2 p, const Segment& s);
double DistSegmentSegment(const Segment& s, const Segment& t);

/// Closed-set overlap test: touching primitives intersect.
bool Intersects(const Primitive& a, const Primitive& b);
bool Intersects(const Ball& a, const Ball& b);
bool Intersects(const Capsule& a, const Ball& b);
bool Intersects(const Capsule& a, const Capsule& b);

/// Minkowski sum with B(0, r). Throws std::invalid_argument for r < 0.
Ball Expand(const Ball& b, double r);
Capsule Expand(const Capsule& c, double r);
Primitive Expand(const Primitive& p, double r);

/// Axis segment and radius of any primitive (a ball is a zero-length capsule).
Segment Axis(const Primitive& p);
double Radius(const Primitive& p);

/// Result of the longest free prefix search along g(a) = origin + a (target - origin).
struct FreePrefix {
  enum class Status { kBounded, kUnbounded, kOriginInside };
  Status status = Status::kUnbounded;
  /// Supremum of the free parameter range; +inf when unbounded, 0 when the
  /// origin already lies in an obstacle.
  double alpha = std::numeric_limits<double>::infinity();

  bool unbounded() const { return status == Status::kUnbounded; }
  bool origin_inside() const { return status == Status::kOriginInside; }
};

/// First parameter a >= 0 at which the ray g enters `obstacle` (closed set),
/// computed in closed form.
FreePrefix FirstEntry(Point2 origin, Point2 target, const Primitive& obstacle);

/// Largest alpha such that G([0, alpha)) misses every obstacle. The minimum of
/// the per-obstacle first entries.
FreePrefix FreePrefixAlpha(Point2 origin, Point2 target, std::span<const Primitive> obstacles);

/// Ball containing every input primitive. Uses the two mutually farthest
/// defining points as the diameter guess and grows the radius until all
/// primitives are covered; not minimal. Throws std::invalid_argument on empty
/// input.
Ball BallOverapprox(std::span<const Primitive> prims);

}  // namespace shieldsim::geometry

#endif  // SHIELDSIM_GEOMETRY_HPP_
