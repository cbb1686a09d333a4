#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ultra/csv.hpp"
#include "ultra/error.hpp"

namespace ultra {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n labelled points in d-dimensional Euclidean space, one point per row.
struct PointCloud {
  RowMatrix points;
  std::vector<std::string> labels;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  double distance(Eigen::Index i, Eigen::Index j) const {
    return (points.row(i) - points.row(j)).norm();
  }

  double diameter() const {
    double best = 0.0;
    for (Eigen::Index i = 0; i < size(); ++i)
      for (Eigen::Index j = i + 1; j < size(); ++j)
        best = std::max(best, (points.row(i) - points.row(j)).squaredNorm());
    return std::sqrt(best);
  }

  void validate() const {
    if (dim() < 1) throw Error("bad_cloud", "point cloud needs dimension >= 1");
    if (static_cast<Eigen::Index>(labels.size()) != size())
      throw Error("bad_cloud", "point cloud label count does not match point count");
    if (!points.allFinite()) throw Error("bad_cloud", "point cloud has non-finite coordinates");
  }
};

inline std::string default_label(std::size_t i) { return "p" + std::to_string(i + 1); }

/// CSV layout: "label,<prefix>1..<prefix>d" header, then one point per row.
inline void write_cloud_csv(std::ostream& os, const PointCloud& cloud, const std::string& prefix = "x") {
  csv::Row header{"label"};
  for (Eigen::Index a = 0; a < cloud.dim(); ++a) header.push_back(prefix + std::to_string(a + 1));
  csv::write_row(os, header);
  char buf[32];
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    csv::Row row{cloud.labels[static_cast<std::size_t>(i)]};
    for (Eigen::Index a = 0; a < cloud.dim(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", cloud.points(i, a));
      row.emplace_back(buf);
    }
    csv::write_row(os, row);
  }
}

inline PointCloud read_cloud_csv(std::istream& is) {
  auto rows = csv::read_all(is);
  if (rows.size() < 2 || rows.front().size() < 2)
    throw Error("bad_cloud", "cloud CSV needs a header and at least one point");
  const auto width = rows.front().size();
  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(width - 1));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw Error("bad_cloud", "cloud CSV row " + std::to_string(r + 1) + " has the wrong field count");
    cloud.labels.push_back(rows[r][0]);
    for (std::size_t a = 1; a < width; ++a) {
      std::size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(rows[r][a], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != rows[r][a].size())
        throw Error("bad_cloud", "cloud CSV value '" + rows[r][a] + "' is not a number");
      cloud.points(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(a - 1)) = v;
    }
  }
  cloud.validate();
  return cloud;
}

}  // namespace ultra
