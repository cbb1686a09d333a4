#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "ultra/synthetic.hpp"
#include "ultra/ultrametricity.hpp"

using namespace ultra;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PointCloud cloud_of(std::vector<std::vector<double>> rows) {
  PointCloud c;
  c.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < rows[i].size(); ++a)
      c.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = rows[i][a];
    c.labels.push_back(default_label(i));
  }
  return c;
}

// Angle at vertex a from the scalar product of the edge vectors.
double vertex_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::VectorXd u = b - a, v = c - a;
  return std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

TriangleAngles angles(double a, double b, double c) { return TriangleAngles{{a, b, c}}; }

}  // namespace

TEST(InternalAngles, Equilateral) {
  const auto t = internal_angles(pt({0, 0}), pt({1, 0}), pt({0.5, std::sqrt(3.0) / 2}));
  for (double a : t.degrees) EXPECT_NEAR(a, 60.0, 1e-9);
}

TEST(InternalAngles, RightTriangle345) {
  const auto t = internal_angles(pt({0, 0}), pt({3, 0}), pt({3, 4}));
  EXPECT_NEAR(t.degrees[0], 36.8699, 1e-4);
  EXPECT_NEAR(t.degrees[1], 53.1301, 1e-4);
  EXPECT_NEAR(t.degrees[2], 90.0, 1e-4);
}

TEST(InternalAngles, TallIsosceles) {
  const auto t = internal_angles(pt({0, 0}), pt({1, 0}), pt({0.5, 5}));
  EXPECT_NEAR(t.degrees[0], 11.4212, 1e-4);
  EXPECT_NEAR(t.degrees[1], 84.2894, 1e-4);
  EXPECT_NEAR(t.degrees[2], 84.2894, 1e-4);
}

TEST(InternalAngles, MatchesScalarProductRouteAndSumsTo180) {
  std::mt19937 gen(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + trial % 7;
    Eigen::VectorXd a(d), b(d), c(d);
    for (int k = 0; k < d; ++k) a(k) = g(gen), b(k) = g(gen), c(k) = g(gen);
    const auto t = internal_angles(a, b, c);
    std::array<double, 3> ref{vertex_angle(a, b, c), vertex_angle(b, c, a), vertex_angle(c, a, b)};
    std::sort(ref.begin(), ref.end());
    EXPECT_NEAR(t.degrees[0] + t.degrees[1] + t.degrees[2], 180.0, 1e-9);
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(t.degrees[k], 0.0);
      EXPECT_LE(t.degrees[k], 180.0);
      if (d > 1) {
        EXPECT_NEAR(t.degrees[k], ref[k], 1e-6);
      }
    }
  }
}

TEST(InternalAngles, CollinearPoints) {
  const auto t = internal_angles(pt({0.0}), pt({1.0}), pt({3.0}));
  EXPECT_NEAR(t.degrees[0], 0.0, 1e-6);
  EXPECT_NEAR(t.degrees[1], 0.0, 1e-6);
  EXPECT_NEAR(t.degrees[2], 180.0, 1e-6);
}

TEST(InternalAngles, DegenerateTriangleSignalsDistinctly) {
  EXPECT_THROW(internal_angles(pt({0, 0}), pt({0, 0}), pt({1, 1})), DegenerateTriangle);
  EXPECT_THROW(internal_angles(pt({0, 0}), pt({1e-12, 0}), pt({1, 1})), DegenerateTriangle);
  EXPECT_THROW(internal_angles(pt({0, 0}), pt({0.1, 0}), pt({1, 1}), 0.5), DegenerateTriangle);
  EXPECT_THROW(internal_angles(pt({0, 0}), pt({1}), pt({1, 1})), Error);
}

TEST(IsUltrametricTriangle, Examples) {
  const AlphaParams p;
  EXPECT_TRUE(is_ultrametric_triangle(angles(60, 60, 60), p));
  EXPECT_FALSE(is_ultrametric_triangle(angles(36.87, 53.13, 90), p));
  EXPECT_TRUE(is_ultrametric_triangle(angles(11.42, 84.29, 84.29), p));
}

TEST(IsUltrametricTriangle, InclusiveSmallAngleStrictEquality) {
  const AlphaParams p;
  EXPECT_TRUE(is_ultrametric_triangle(angles(60, 60, 60), p));
  EXPECT_FALSE(is_ultrametric_triangle(angles(10, 84, 86), p));  // difference exactly 2
  EXPECT_TRUE(is_ultrametric_triangle(angles(10, 84.5, 85.5), p));
  AlphaParams strict = p;
  strict.max_small_deg = 30;
  EXPECT_FALSE(is_ultrametric_triangle(angles(40, 70, 70), strict));
}

TEST(AlphaParams, Validation) {
  AlphaParams p;
  EXPECT_NO_THROW(p.validate());
  p.max_small_deg = 61;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.eq_tol_deg = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.repeats = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.triangles_per_repeat = 0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(AlphaSample, CollinearDistinctPointsGiveZero) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({static_cast<double>(i * i)});
  Rng rng(1);
  EXPECT_EQ(alpha_sample(cloud_of(rows), 500, rng, AlphaParams{}), 0.0);
}

TEST(AlphaSample, SingleRightTriangleGivesZero) {
  Rng rng(2);
  EXPECT_EQ(alpha_sample(cloud_of({{0, 0}, {3, 0}, {3, 4}}), 100, rng, AlphaParams{}), 0.0);
}

TEST(AlphaSample, PerfectUltrametricGivesOne) {
  Rng rng(3);
  const auto cloud = synthetic::embed(synthetic::cophenetic(synthetic::random_dendrogram(24, rng)));
  EXPECT_EQ(alpha_sample(cloud, 2000, rng, AlphaParams{}), 1.0);
}

TEST(AlphaSample, CoincidentPointsExhaustBudget) {
  Rng rng(4);
  try {
    alpha_sample(cloud_of({{1, 1}, {1, 1}, {1, 1}, {1, 1}}), 10, rng, AlphaParams{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "no_nondegenerate_triangles");
  }
}

TEST(AlphaSample, DegenerateTrianglesAreResampledAndCounted) {
  // Points 0 and 1 coincide; every triangle using both is redrawn.
  Rng rng(5);
  std::uint64_t degenerate = 0;
  const auto cloud = cloud_of({{0, 0}, {0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}, {5, 5}});
  const double a = alpha_sample(cloud, 1000, rng, AlphaParams{}, &degenerate);
  EXPECT_GT(degenerate, 0u);
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 1.0);
}

TEST(AlphaSample, TooFewPoints) {
  Rng rng(6);
  EXPECT_THROW(alpha_sample(cloud_of({{0, 0}, {1, 1}}), 10, rng, AlphaParams{}), Error);
}

TEST(EstimateAlpha, ShapeAndSummaryStatistics) {
  Rng gen(7);
  const auto cloud = synthetic::uniform_cloud(60, 10, gen);
  AlphaParams p;
  p.seed = 99;
  const auto est = estimate_alpha(cloud, p);
  ASSERT_EQ(est.per_repeat.size(), 20u);
  double mean = 0;
  for (double v : est.per_repeat) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    const double scaled = v * 2000.0;
    EXPECT_DOUBLE_EQ(scaled, std::round(scaled));
    mean += v;
  }
  mean /= 20.0;
  double ss = 0;
  for (double v : est.per_repeat) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(est.mean, mean, 1e-15);
  EXPECT_NEAR(est.sdev, std::sqrt(ss / 19.0), 1e-15);
  EXPECT_EQ(est.params.seed, 99u);
}

TEST(EstimateAlpha, DeterministicPerSeed) {
  Rng gen(8);
  const auto cloud = synthetic::uniform_cloud(50, 5, gen);
  AlphaParams p;
  p.seed = 123;
  const auto a = estimate_alpha(cloud, p);
  const auto b = estimate_alpha(cloud, p);
  EXPECT_EQ(a.per_repeat, b.per_repeat);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.sdev, b.sdev);
  p.seed = 124;
  EXPECT_NE(estimate_alpha(cloud, p).per_repeat, a.per_repeat);
}

TEST(EstimateAlpha, RepeatUsesItsOwnSubstream) {
  Rng gen(9);
  const auto cloud = synthetic::uniform_cloud(40, 8, gen);
  AlphaParams p;
  p.seed = 5;
  p.repeats = 4;
  const auto est = estimate_alpha(cloud, p);
  for (std::size_t t = 0; t < 4; ++t) {
    Rng rng(substream_seed(p.seed, t));
    EXPECT_EQ(alpha_sample(cloud, p.triangles_per_repeat, rng, p), est.per_repeat[t]);
  }
}

TEST(EstimateAlpha, SingleRepeatHasZeroSdev) {
  Rng gen(10);
  AlphaParams p;
  p.repeats = 1;
  EXPECT_EQ(estimate_alpha(synthetic::uniform_cloud(20, 3, gen), p).sdev, 0.0);
}

TEST(AlphaExhaustive, HandDerivableCases) {
  const AlphaParams p;
  EXPECT_EQ(alpha_exhaustive(cloud_of({{0}, {1}, {2.5}}), p), 0.0);
  EXPECT_EQ(alpha_exhaustive(cloud_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), p), 0.0);
  EXPECT_EQ(alpha_exhaustive(cloud_of({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}), p), 1.0);
}

TEST(AlphaExhaustive, DegenerateTrianglesCountAsFalse) {
  // 4 points, one duplicated: of the 4 triangles, 2 use the duplicate pair.
  const auto cloud = cloud_of({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}, {0, 0}});
  EXPECT_DOUBLE_EQ(alpha_exhaustive(cloud, AlphaParams{}), 0.5);
}

TEST(AlphaExhaustive, RefusesLargeClouds) {
  Rng gen(11);
  EXPECT_THROW(alpha_exhaustive(synthetic::uniform_cloud(201, 2, gen), AlphaParams{}), Error);
  EXPECT_NO_THROW(alpha_exhaustive(synthetic::uniform_cloud(200, 2, gen), AlphaParams{}));
}

TEST(AlphaExhaustive, SimilarityInvariance) {
  Rng gen(12);
  const AlphaParams p;
  for (int trial = 0; trial < 5; ++trial) {
    const auto cloud = synthetic::uniform_cloud(40, 3, gen);
    const double base = alpha_exhaustive(cloud, p);

    PointCloud moved = cloud;
    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.3 + trial, Eigen::Vector3d(1, 2, 3).normalized())).toRotationMatrix();
    moved.points = (cloud.points * rot.transpose() * 7.5).rowwise() + Eigen::RowVector3d(4, -2, 9);
    EXPECT_EQ(alpha_exhaustive(moved, p), base);

    PointCloud permuted = cloud;
    permuted.points.col(0) = cloud.points.col(2);
    permuted.points.col(2) = cloud.points.col(0);
    EXPECT_EQ(alpha_exhaustive(permuted, p), base);
  }
}

TEST(AlphaExhaustive, MonotoneInEqualityTolerance) {
  Rng gen(13);
  const auto cloud = synthetic::uniform_cloud(50, 6, gen);
  double previous = 0.0;
  for (double tol : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    AlphaParams p;
    p.eq_tol_deg = tol;
    const double a = alpha_exhaustive(cloud, p);
    EXPECT_GE(a, previous);
    previous = a;
  }
}

TEST(AlphaExhaustive, SamplerAgreesWithinStatisticalBound) {
  Rng gen(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = synthetic::uniform_cloud(20 + 8 * trial, 2 + 3 * trial, gen);
    AlphaParams p;
    p.seed = 1000 + trial;
    const auto est = estimate_alpha(cloud, p);
    const double exact = alpha_exhaustive(cloud, p);
    EXPECT_LE(std::abs(est.mean - exact), 4 * est.sdev / std::sqrt(20.0) + 1.0 / 2000) << trial;
  }
}
