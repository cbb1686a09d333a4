#include <gtest/gtest.h>

#include <set>

#include "ultra/synthetic.hpp"
#include "ultra/ultrametricity.hpp"

using namespace ultra;
using namespace ultra::synthetic;

TEST(RandomDendrogram, TwoLeaves) {
  Rng rng(1);
  const auto t = random_dendrogram(2, rng);
  ASSERT_EQ(t.merges.size(), 1u);
  EXPECT_GT(t.merges[0].height, 0.0);
  EXPECT_LE(t.merges[0].height, 1.0);
  EXPECT_NO_THROW(t.validate());
}

TEST(RandomDendrogram, ShapeAndIncreasingHeights) {
  Rng rng(2);
  const auto t = random_dendrogram(5, rng);
  ASSERT_EQ(t.merges.size(), 4u);
  for (std::size_t k = 1; k < t.merges.size(); ++k) EXPECT_LT(t.merges[k - 1].height, t.merges[k].height);
  EXPECT_NO_THROW(t.validate());
}

TEST(RandomDendrogram, DeterministicPerSeed) {
  Rng a(3), b(3);
  const auto ta = random_dendrogram(32, a);
  const auto tb = random_dendrogram(32, b);
  ASSERT_EQ(ta.merges.size(), tb.merges.size());
  for (std::size_t k = 0; k < ta.merges.size(); ++k) {
    EXPECT_EQ(ta.merges[k].left, tb.merges[k].left);
    EXPECT_EQ(ta.merges[k].right, tb.merges[k].right);
    EXPECT_EQ(ta.merges[k].height, tb.merges[k].height);
  }
}

TEST(RandomDendrogram, RejectsSingleLeaf) {
  Rng rng(4);
  EXPECT_THROW(random_dendrogram(1, rng), Error);
}

TEST(Dendrogram, ValidationCatchesBadTrees) {
  Dendrogram t{3, {{0, 1, 2.0}, {2, 3, 1.0}}};  // parent below child
  EXPECT_THROW(t.validate(), Error);
  t = {3, {{0, 1, 1.0}, {0, 2, 2.0}}};  // leaf 0 used twice
  EXPECT_THROW(t.validate(), Error);
  t = {3, {{0, 1, 1.0}}};  // too few merges
  EXPECT_THROW(t.validate(), Error);
}

TEST(Cophenetic, TwoLeaves) {
  const auto u = cophenetic(Dendrogram{2, {{0, 1, 3.0}}});
  EXPECT_EQ(u.d(0, 1), 3.0);
  EXPECT_EQ(u.d(1, 0), 3.0);
  EXPECT_EQ(u.d(0, 0), 0.0);
}

TEST(Cophenetic, NestedMerge) {
  // ((a, b) @ 1, c) @ 2
  const auto u = cophenetic(Dendrogram{3, {{0, 1, 1.0}, {3, 2, 2.0}}});
  EXPECT_EQ(u.d(0, 1), 1.0);
  EXPECT_EQ(u.d(0, 2), 2.0);
  EXPECT_EQ(u.d(1, 2), 2.0);
}

TEST(Cophenetic, ExactUltrametricInequality) {
  Rng rng(5);
  for (std::size_t n : {2u, 3u, 8u, 17u, 40u, 64u}) {
    const auto u = cophenetic(random_dendrogram(n, rng));
    EXPECT_EQ(u.max_violation(), 0.0) << n;
    EXPECT_TRUE(u.d.isApprox(u.d.transpose()));
  }
}

TEST(Embed, TwoPoints) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 3, 3, 0;
  const auto cloud = embed(d);
  EXPECT_EQ(cloud.dim(), 1);
  EXPECT_NEAR(cloud.distance(0, 1), 3.0, 1e-12);
}

TEST(Embed, ReproducesUltrametricDistances) {
  Rng rng(6);
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const auto u = cophenetic(random_dendrogram(n, rng));
    const auto cloud = embed(u);
    EXPECT_LE(cloud.dim(), static_cast<Eigen::Index>(n - 1));
    double worst = 0;
    for (Eigen::Index i = 0; i < cloud.size(); ++i)
      for (Eigen::Index j = i + 1; j < cloud.size(); ++j)
        worst = std::max(worst, std::abs(cloud.distance(i, j) - u.d(i, j)) / u.d(i, j));
    EXPECT_LT(worst, 1e-8) << n;
  }
}

TEST(Embed, GramOfUltrametricIsPositiveSemidefinite) {
  Rng rng(7);
  const auto u = cophenetic(random_dendrogram(30, rng));
  const Eigen::Index n = u.d.rows();
  const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd gram = -0.5 * j * u.d.array().square().matrix() * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  EXPECT_GE(eig.eigenvalues()(0), -1e-8 * eig.eigenvalues()(n - 1));
}

TEST(Embed, RejectsNonEuclideanDistances) {
  // Violates the triangle inequality: no Euclidean realisation exists.
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  try {
    embed(d);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "not_embeddable");
  }
}

TEST(Embed, PerfectUltrametricHasAlphaOne) {
  Rng rng(8);
  const auto cloud = embed(cophenetic(random_dendrogram(32, rng)));
  EXPECT_EQ(alpha_exhaustive(cloud, AlphaParams{}), 1.0);
}

TEST(UniformCloud, ShapeRangeAndDeterminism) {
  Rng a(9), b(9);
  const auto c1 = uniform_cloud(100, 4, a);
  const auto c2 = uniform_cloud(100, 4, b);
  EXPECT_EQ(c1.size(), 100);
  EXPECT_EQ(c1.dim(), 4);
  EXPECT_TRUE(c1.points == c2.points);
  EXPECT_GE(c1.points.minCoeff(), 0.0);
  EXPECT_LT(c1.points.maxCoeff(), 1.0);
  Rng bad(1);
  EXPECT_THROW(uniform_cloud(2, 3, bad), Error);
  EXPECT_THROW(uniform_cloud(5, 0, bad), Error);
}

TEST(UniformCloud, OneDimensionalCloudHasAlphaZero) {
  Rng rng(10);
  EXPECT_EQ(alpha_exhaustive(uniform_cloud(100, 1, rng), AlphaParams{}), 0.0);
}

TEST(UniformCloud, HighDimensionRaisesAlpha) {
  // Calibration observation: concentration of distances in high dimension
  // makes triangles closer to equilateral.
  Rng rng(11);
  AlphaParams p;
  const double low = estimate_alpha(uniform_cloud(100, 2, rng), p).mean;
  const double high = estimate_alpha(uniform_cloud(100, 200, rng), p).mean;
  EXPECT_GT(high, low);
}

TEST(SyntheticCorpus, DeterministicAndWellFormed) {
  const auto a = synthetic_corpus(5, 100, 42);
  const auto b = synthetic_corpus(5, 100, 42);
  ASSERT_EQ(a.size(), 5u);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].text, b[i].text);
    EXPECT_EQ(corpus::tokenize(a[i].text).size(), 100u);
    ids.insert(a[i].id);
  }
  EXPECT_EQ(ids.size(), 5u);
  EXPECT_EQ(a[0].id, "doc01");
  EXPECT_NE(synthetic_corpus(5, 100, 43)[0].text, a[0].text);
}
