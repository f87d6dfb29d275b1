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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "shieldsim/geometry.hpp"
#include "shieldsim/rng.hpp"

namespace shieldsim::geometry {
namespace {

TEST(DistPointSegment, Examples) {
  EXPECT_DOUBLE_EQ(DistPointSegment({0, 1}, {{-1, 0}, {1, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(DistPointSegment({2, 0}, {{-1, 0}, {1, 0}}), 1.0);
  EXPECT_NEAR(DistPointSegment({0.5, 0.05}, {{0, 0}, {1, 0}}), 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(DistPointSegment({3, 4}, {{0, 0}, {0, 0}}), 5.0);
}

TEST(DistSegmentSegment, CrossingAndParallel) {
  EXPECT_DOUBLE_EQ(DistSegmentSegment({{-1, 0}, {1, 0}}, {{0, -1}, {0, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(DistSegmentSegment({{0, 0}, {1, 0}}, {{0, 0.5}, {1, 0.5}}), 0.5);
  EXPECT_DOUBLE_EQ(DistSegmentSegment({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}), 1.0);
}

TEST(Intersects, Examples) {
  EXPECT_FALSE(Intersects(Ball{{0, 0}, 0.1}, Ball{{1, 0}, 0.1}));
  EXPECT_TRUE(Intersects(Capsule{{0, 0}, {1, 0}, 0.1}, Ball{{0.5, 0.05}, 0.1}));
}

TEST(Intersects, TouchingCounts) {
  EXPECT_TRUE(Intersects(Ball{{0, 0}, 0.5}, Ball{{1, 0}, 0.5}));
  EXPECT_TRUE(Intersects(Capsule{{0, 0}, {1, 0}, 0.25}, Capsule{{0, 0.5}, {1, 0.5}, 0.25}));
}

TEST(Intersects, MatchesOracleOnRandomPairs) {
  const oracle::Report r = oracle::IntersectionSuite(11, 1000);
  EXPECT_TRUE(r.ok()) << r;
}

TEST(Intersects, SymmetricAndExpandMonotone) {
  Rng rng(3);
  auto point = [&] { return Point2{rng.Uniform(-1, 1), rng.Uniform(-1, 1)}; };
  for (int i = 0; i < 2000; ++i) {
    const Primitive a = Capsule{point(), point(), rng.Uniform(0, 0.3)};
    const Primitive b = i % 2 ? Primitive{Ball{point(), rng.Uniform(0, 0.3)}}
                              : Primitive{Capsule{point(), point(), rng.Uniform(0, 0.3)}};
    const bool ab = Intersects(a, b);
    EXPECT_EQ(ab, Intersects(b, a));
    if (ab) {
      EXPECT_TRUE(Intersects(Expand(a, rng.Uniform(0, 0.5)), b));
    }
  }
}

TEST(Expand, Examples) {
  EXPECT_EQ(Expand(Ball{{1, 0}, 0.1}, 0.0), (Ball{{1, 0}, 0.1}));
  const Ball grown = Expand(Ball{{1, 0}, 0.1}, 0.15);
  EXPECT_EQ(grown.center, (Point2{1, 0}));
  EXPECT_DOUBLE_EQ(grown.radius, 0.25);
  const Capsule c = Expand(Capsule{{0, 0}, {1, 1}, 0.05}, 0.02);
  EXPECT_EQ(c.a, (Point2{0, 0}));
  EXPECT_EQ(c.b, (Point2{1, 1}));
  EXPECT_DOUBLE_EQ(c.radius, 0.07);
  EXPECT_THROW(Expand(Ball{{0, 0}, 0.1}, -0.01), std::invalid_argument);
}

TEST(FreePrefixAlpha, Examples) {
  EXPECT_TRUE(FreePrefixAlpha({0, 0}, {1, 0}, {}).unbounded());

  const std::vector<Primitive> ahead{Ball{{0.5, 0}, 0.2}};
  const FreePrefix hit = FreePrefixAlpha({0, 0}, {1, 0}, ahead);
  ASSERT_EQ(hit.status, FreePrefix::Status::kBounded);
  EXPECT_NEAR(hit.alpha, 0.3, 1e-15);

  const std::vector<Primitive> aside{Ball{{0, 1}, 0.5}};
  EXPECT_TRUE(FreePrefixAlpha({0, 0}, {1, 0}, aside).unbounded());

  const std::vector<Primitive> around{Ball{{0.05, 0}, 0.2}};
  const FreePrefix inside = FreePrefixAlpha({0, 0}, {1, 0}, around);
  EXPECT_TRUE(inside.origin_inside());
  EXPECT_EQ(inside.alpha, 0.0);
}

TEST(FreePrefixAlpha, BehindTheOriginIsIgnored) {
  const std::vector<Primitive> behind{Ball{{-1, 0}, 0.2}};
  EXPECT_TRUE(FreePrefixAlpha({0, 0}, {1, 0}, behind).unbounded());
}

TEST(FreePrefixAlpha, MinimumOverObstaclesAndCapsules) {
  const std::vector<Primitive> obs{Ball{{2, 0}, 0.5}, Capsule{{1, -1}, {1, 1}, 0.25}};
  const FreePrefix fp = FreePrefixAlpha({0, 0}, {1, 0}, obs);
  ASSERT_EQ(fp.status, FreePrefix::Status::kBounded);
  EXPECT_NEAR(fp.alpha, 0.75, 1e-15);
}

TEST(FreePrefixAlpha, MatchesRootOracle) {
  const oracle::Report r = oracle::FreePrefixSuite(12, 1000);
  EXPECT_TRUE(r.ok()) << r;
}

TEST(FreePrefixAlpha, PrefixPointsLieOutsideObstacles) {
  Rng rng(5);
  int bounded = 0;
  for (int i = 0; i < 200; ++i) {
    const Point2 origin{rng.Uniform(-1, 1), rng.Uniform(-1, 1)};
    const Point2 target{rng.Uniform(-1, 1), rng.Uniform(-1, 1)};
    std::vector<Primitive> obs;
    for (int k = 0; k < 3; ++k) {
      obs.push_back(Capsule{{rng.Uniform(-1, 1), rng.Uniform(-1, 1)},
                            {rng.Uniform(-1, 1), rng.Uniform(-1, 1)}, rng.Uniform(0, 0.3)});
    }
    const FreePrefix fp = FreePrefixAlpha(origin, target, obs);
    if (fp.status != FreePrefix::Status::kBounded) continue;
    ++bounded;
    const double top = fp.alpha - 1e-9;
    for (int j = 0; j < 10000 && top > 0.0; j += 50) {
      const Point2 p = origin + (top * j / 10000.0) * (target - origin);
      for (const auto& ob : obs) {
        const auto& c = std::get<Capsule>(ob);
        ASSERT_GT(DistPointSegment(p, {c.a, c.b}), c.radius);
      }
    }
  }
  EXPECT_GT(bounded, 20);
}

TEST(BallOverapprox, Examples) {
  const std::vector<Primitive> one{Ball{{0, 0}, 0.1}};
  EXPECT_EQ(BallOverapprox(one), (Ball{{0, 0}, 0.1}));
  const std::vector<Primitive> two{Ball{{-1, 0}, 0.1}, Ball{{1, 0}, 0.1}};
  const Ball b = BallOverapprox(two);
  EXPECT_NEAR(b.center.x, 0.0, 1e-15);
  EXPECT_NEAR(b.center.y, 0.0, 1e-15);
  EXPECT_NEAR(b.radius, 1.1, 1e-15);
  EXPECT_THROW(BallOverapprox({}), std::invalid_argument);
}

TEST(BallOverapprox, ContainsSampledBoundaries) {
  const oracle::Report r = oracle::OverapproxSuite(13, 1000);
  EXPECT_TRUE(r.ok()) << r;
}

TEST(Oracle, GoldenAndGridDistancesAgree) {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const Primitive a = Capsule{{rng.Uniform(-1, 1), rng.Uniform(-1, 1)},
                                {rng.Uniform(-1, 1), rng.Uniform(-1, 1)}, 0.0};
    const Primitive b = Capsule{{rng.Uniform(-1, 1), rng.Uniform(-1, 1)},
                                {rng.Uniform(-1, 1), rng.Uniform(-1, 1)}, 0.0};
    const double golden = oracle::AxisDistance(a, b);
    const double grid = oracle::AxisDistanceGrid(a, b, 2000);
    EXPECT_LE(golden, grid + 1e-12);
    EXPECT_NEAR(golden, grid, 2e-3);
    const auto& ca = std::get<Capsule>(a);
    const auto& cb = std::get<Capsule>(b);
    EXPECT_NEAR(golden, DistSegmentSegment({ca.a, ca.b}, {cb.a, cb.b}), 1e-9);
  }
}

}  // namespace
}  // namespace shieldsim::geometry
