#pragma once

// Alpha coefficient of ultrametricity: the share of point triplets whose
// triangle is equilateral or isosceles with a small base, judged from the
// internal angles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ultra/error.hpp"
#include "ultra/point_cloud.hpp"
#include "ultra/rng.hpp"

namespace ultra {

struct TriangleAngles {
  std::array<double, 3> degrees{};  // ascending
};

struct AlphaParams {
  double max_small_deg = 60.0;
  double eq_tol_deg = 2.0;
  std::size_t triangles_per_repeat = 2000;
  std::size_t repeats = 20;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(max_small_deg > 0.0 && max_small_deg <= 60.0))
      throw Error("bad_params", "max_small_deg must lie in (0, 60]");
    if (!(eq_tol_deg > 0.0)) throw Error("bad_params", "eq_tol_deg must be positive");
    if (triangles_per_repeat < 1) throw Error("bad_params", "triangles_per_repeat must be >= 1");
    if (repeats < 1) throw Error("bad_params", "repeats must be >= 1");
  }
};

struct AlphaEstimate {
  double mean = 0.0;
  double sdev = 0.0;
  std::vector<double> per_repeat;
  std::uint64_t degenerate_resampled = 0;
  AlphaParams params;
};

/// Sides shorter than this fraction of the cloud diameter make a triangle
/// degenerate.
inline constexpr double kDegenerateRelEps = 1e-10;

/// Angles from side lengths by the law of cosines; nullopt when a side is at
/// or below `min_side`.
inline std::optional<TriangleAngles> angles_from_sides(double ab, double bc, double ca,
                                                       double min_side) {
  std::array<double, 3> s{ab, bc, ca};
  std::sort(s.begin(), s.end());
  if (!(s[0] > min_side) || s[0] <= 0.0) return std::nullopt;
  auto angle_opposite = [](double opp, double x, double y) {
    const double c = std::clamp((x * x + y * y - opp * opp) / (2.0 * x * y), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
  };
  // The two angles facing the shorter sides are acute; the largest angle is
  // taken as the remainder so the three sum to 180.
  const double a0 = angle_opposite(s[0], s[1], s[2]);
  const double a1 = angle_opposite(s[1], s[0], s[2]);
  TriangleAngles t;
  t.degrees = {a0, a1, 180.0 - a0 - a1};
  std::sort(t.degrees.begin(), t.degrees.end());
  return t;
}

/// Internal angles of triangle abc. Throws DegenerateTriangle if a side is at
/// most `min_side`; with the default, relative to the triangle's longest side.
inline TriangleAngles internal_angles(const Eigen::Ref<const Eigen::VectorXd>& a,
                                      const Eigen::Ref<const Eigen::VectorXd>& b,
                                      const Eigen::Ref<const Eigen::VectorXd>& c,
                                      std::optional<double> min_side = std::nullopt) {
  if (a.size() != b.size() || a.size() != c.size() || a.size() < 1)
    throw Error("bad_points", "triangle vertices must share a dimension >= 1");
  const double ab = (a - b).norm();
  const double bc = (b - c).norm();
  const double ca = (c - a).norm();
  const double eps = min_side.value_or(kDegenerateRelEps * std::max({ab, bc, ca}));
  auto t = angles_from_sides(ab, bc, ca, eps);
  if (!t) throw DegenerateTriangle("degenerate triangle: a side is below the degeneracy threshold");
  return *t;
}

inline bool is_ultrametric_triangle(const TriangleAngles& t, const AlphaParams& p) {
  return t.degrees[0] <= p.max_small_deg && (t.degrees[2] - t.degrees[1]) < p.eq_tol_deg;
}

namespace detail {

inline void require_triangles(const PointCloud& cloud) {
  cloud.validate();
  if (cloud.size() < 3) throw Error("too_few_points", "alpha needs a cloud of at least 3 points");
}

// One repeat of the sampler; returns the number of qualifying triangles.
inline std::size_t sample_hits(const PointCloud& cloud, std::size_t n_triangles, Rng& rng,
                               const AlphaParams& p, double min_side, std::uint64_t& degenerate) {
  const auto n = static_cast<std::uint64_t>(cloud.size());
  const std::uint64_t budget = 100 * static_cast<std::uint64_t>(n_triangles);
  std::uint64_t attempts = 0;
  std::size_t hits = 0;
  for (std::size_t drawn = 0; drawn < n_triangles;) {
    if (attempts++ >= budget)
      throw Error("no_nondegenerate_triangles",
                  "no non-degenerate triangles: resample budget exhausted after " +
                      std::to_string(budget) + " attempts");
    const auto i = static_cast<Eigen::Index>(rng.index(n));
    auto j = static_cast<Eigen::Index>(rng.index(n));
    while (j == i) j = static_cast<Eigen::Index>(rng.index(n));
    auto k = static_cast<Eigen::Index>(rng.index(n));
    while (k == i || k == j) k = static_cast<Eigen::Index>(rng.index(n));
    auto t = angles_from_sides(cloud.distance(i, j), cloud.distance(j, k), cloud.distance(k, i), min_side);
    if (!t) {
      ++degenerate;
      continue;
    }
    if (is_ultrametric_triangle(*t, p)) ++hits;
    ++drawn;
  }
  return hits;
}

}  // namespace detail

/// Proportion of `n_triangles` uniformly drawn triplets of distinct points that
/// qualify. Degenerate triangles are drawn again and counted in `degenerate`.
inline double alpha_sample(const PointCloud& cloud, std::size_t n_triangles, Rng& rng,
                           const AlphaParams& p, std::uint64_t* degenerate = nullptr) {
  detail::require_triangles(cloud);
  p.validate();
  if (n_triangles < 1) throw Error("bad_params", "n_triangles must be >= 1");
  std::uint64_t resampled = 0;
  const auto hits =
      detail::sample_hits(cloud, n_triangles, rng, p, kDegenerateRelEps * cloud.diameter(), resampled);
  if (degenerate) *degenerate += resampled;
  return static_cast<double>(hits) / static_cast<double>(n_triangles);
}

/// Mean and sample standard deviation of `p.repeats` sampled proportions,
/// repeat t drawing from the stream seeded with substream_seed(p.seed, t).
inline AlphaEstimate estimate_alpha(const PointCloud& cloud, const AlphaParams& p) {
  detail::require_triangles(cloud);
  p.validate();
  const double min_side = kDegenerateRelEps * cloud.diameter();
  AlphaEstimate est;
  est.params = p;
  est.per_repeat.reserve(p.repeats);
  for (std::size_t t = 0; t < p.repeats; ++t) {
    Rng rng(substream_seed(p.seed, t));
    const auto hits = detail::sample_hits(cloud, p.triangles_per_repeat, rng, p, min_side,
                                          est.degenerate_resampled);
    est.per_repeat.push_back(static_cast<double>(hits) / static_cast<double>(p.triangles_per_repeat));
  }
  double sum = 0.0;
  for (double v : est.per_repeat) sum += v;
  est.mean = sum / static_cast<double>(p.repeats);
  if (p.repeats > 1) {
    double ss = 0.0;
    for (double v : est.per_repeat) ss += (v - est.mean) * (v - est.mean);
    est.sdev = std::sqrt(ss / static_cast<double>(p.repeats - 1));
  }
  return est;
}

inline constexpr Eigen::Index kMaxExhaustivePoints = 200;

/// Exact proportion over all C(n,3) triangles; degenerate ones count as not
/// qualifying.
inline double alpha_exhaustive(const PointCloud& cloud, const AlphaParams& p) {
  detail::require_triangles(cloud);
  p.validate();
  const Eigen::Index n = cloud.size();
  if (n > kMaxExhaustivePoints)
    throw Error("too_many_points", "alpha_exhaustive is limited to " +
                                       std::to_string(kMaxExhaustivePoints) +
                                       " points; use sampling (estimate_alpha) instead");
  Eigen::MatrixXd dist(n, n);
  double diameter = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = cloud.distance(i, j);
      diameter = std::max(diameter, dist(i, j));
    }
  }
  const double min_side = kDegenerateRelEps * diameter;
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        ++total;
        auto t = angles_from_sides(dist(i, j), dist(j, k), dist(k, i), min_side);
        if (t && is_ultrametric_triangle(*t, p)) ++hits;
      }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace ultra
