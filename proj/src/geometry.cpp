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

#include "shieldsim/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace shieldsim::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sign of the turn a -> b -> c.
int Orientation(Point2 a, Point2 b, Point2 c) {
  const double v = Cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool OnSegment(Point2 p, const Segment& s) {
  return std::min(s.start.x, s.end.x) <= p.x && p.x <= std::max(s.start.x, s.end.x) &&
         std::min(s.start.y, s.end.y) <= p.y && p.y <= std::max(s.start.y, s.end.y);
}

bool SegmentsCross(const Segment& s, const Segment& t) {
  const int o1 = Orientation(s.start, s.end, t.start);
  const int o2 = Orientation(s.start, s.end, t.end);
  const int o3 = Orientation(t.start, t.end, s.start);
  const int o4 = Orientation(t.start, t.end, s.end);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && OnSegment(t.start, s)) return true;
  if (o2 == 0 && OnSegment(t.end, s)) return true;
  if (o3 == 0 && OnSegment(s.start, t)) return true;
  if (o4 == 0 && OnSegment(s.end, t)) return true;
  return false;
}

// Smallest non-negative root of |origin + a d - center| = radius, or +inf.
double RayCircleEntry(Point2 origin, Point2 d, Point2 center, double radius) {
  const double a = Dot(d, d);
  if (a == 0.0) return kInf;
  const Point2 f = origin - center;
  const double b = Dot(d, f);
  const double c = Dot(f, f) - radius * radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return kInf;
  const double root = std::sqrt(disc);
  const double near = (-b - root) / a;
  if (near >= 0.0) return near;
  const double far = (-b + root) / a;
  return far >= 0.0 ? far : kInf;
}

}  // namespace

double DistPointSegment(Point2 p, const Segment& s) {
  const Point2 d = s.end - s.start;
  const double len2 = Dot(d, d);
  if (len2 == 0.0) return Distance(p, s.start);
  const double t = std::clamp(Dot(p - s.start, d) / len2, 0.0, 1.0);
  return Distance(p, s.start + t * d);
}

double DistSegmentSegment(const Segment& s, const Segment& t) {
  if (SegmentsCross(s, t)) return 0.0;
  return std::min({DistPointSegment(s.start, t), DistPointSegment(s.end, t),
                   DistPointSegment(t.start, s), DistPointSegment(t.end, s)});
}

Segment Axis(const Primitive& p) {
  return std::visit(
      [](const auto& prim) -> Segment {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {prim.center, prim.center};
        } else {
          return {prim.a, prim.b};
        }
      },
      p);
}

double Radius(const Primitive& p) {
  return std::visit([](const auto& prim) { return prim.radius; }, p);
}

bool Intersects(const Ball& a, const Ball& b) {
  return Distance(a.center, b.center) <= a.radius + b.radius;
}

bool Intersects(const Capsule& a, const Ball& b) {
  return DistPointSegment(b.center, {a.a, a.b}) <= a.radius + b.radius;
}

bool Intersects(const Capsule& a, const Capsule& b) {
  return DistSegmentSegment({a.a, a.b}, {b.a, b.b}) <= a.radius + b.radius;
}

bool Intersects(const Primitive& a, const Primitive& b) {
  return DistSegmentSegment(Axis(a), Axis(b)) <= Radius(a) + Radius(b);
}

Ball Expand(const Ball& b, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("Expand: radius increment must be >= 0");
  return {b.center, b.radius + r};
}

Capsule Expand(const Capsule& c, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("Expand: radius increment must be >= 0");
  return {c.a, c.b, c.radius + r};
}

Primitive Expand(const Primitive& p, double r) {
  return std::visit([r](const auto& prim) -> Primitive { return Expand(prim, r); }, p);
}

FreePrefix FirstEntry(Point2 origin, Point2 target, const Primitive& obstacle) {
  const Segment axis = Axis(obstacle);
  const double r = Radius(obstacle);
  if (DistPointSegment(origin, axis) <= r) {
    return {FreePrefix::Status::kOriginInside, 0.0};
  }
  const Point2 d = target - origin;
  double best = std::min(RayCircleEntry(origin, d, axis.start, r),
                         RayCircleEntry(origin, d, axis.end, r));

  // Flat sides of a capsule: the two lines offset by +-r from the axis,
  // restricted to the axis extent.
  const Point2 along = axis.end - axis.start;
  const double len = Norm(along);
  if (len > 0.0) {
    const Point2 u = (1.0 / len) * along;
    const Point2 n{-u.y, u.x};
    const double dn = Dot(d, n);
    if (dn != 0.0) {
      const double offset = Dot(origin - axis.start, n);
      for (double side : {r, -r}) {
        const double a = (side - offset) / dn;
        if (a < 0.0 || a >= best) continue;
        const double s = Dot(origin + a * d - axis.start, u);
        if (s >= 0.0 && s <= len) best = a;
      }
    }
  }
  if (best == kInf) return {};
  return {FreePrefix::Status::kBounded, best};
}

FreePrefix FreePrefixAlpha(Point2 origin, Point2 target, std::span<const Primitive> obstacles) {
  FreePrefix result;
  for (const Primitive& ob : obstacles) {
    const FreePrefix entry = FirstEntry(origin, target, ob);
    if (entry.origin_inside()) return entry;
    if (entry.alpha < result.alpha) result = entry;
  }
  return result;
}

Ball BallOverapprox(std::span<const Primitive> prims) {
  if (prims.empty()) throw std::invalid_argument("BallOverapprox: empty primitive list");
  struct Site {
    Point2 p;
    double r;
  };
  std::vector<Site> sites;
  sites.reserve(2 * prims.size());
  for (const Primitive& prim : prims) {
    const Segment axis = Axis(prim);
    const double r = Radius(prim);
    sites.push_back({axis.start, r});
    if (!(axis.end == axis.start)) sites.push_back({axis.end, r});
  }
  std::size_t bi = 0;
  std::size_t bj = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i; j < sites.size(); ++j) {
      const double d = Distance(sites[i].p, sites[j].p);
      if (d > far) {
        far = d;
        bi = i;
        bj = j;
      }
    }
  }
  const Point2 center = 0.5 * (sites[bi].p + sites[bj].p);
  double radius = 0.0;
  // The farthest point of a capsule from any center is on one of its end discs.
  for (const Site& s : sites) radius = std::max(radius, Distance(center, s.p) + s.r);
  return {center, radius};
}

}  // namespace shieldsim::geometry
