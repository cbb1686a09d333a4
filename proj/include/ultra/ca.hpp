#pragma once

// Correspondence analysis of a contingency table: relative frequencies,
// profiles, chi-squared distances, total inertia and the factor space
// embedding obtained from the SVD of the standardized residuals.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "ultra/corpus.hpp"
#include "ultra/csv.hpp"
#include "ultra/error.hpp"
#include "ultra/point_cloud.hpp"

namespace ultra::ca {

struct ProbabilityTable {
  Eigen::MatrixXd f;              // f_ij = k_ij / k
  Eigen::VectorXd row_masses;     // f_i
  Eigen::VectorXd col_masses;     // f_j
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  Eigen::Index rows() const { return f.rows(); }
  Eigen::Index cols() const { return f.cols(); }
};

/// Principal coordinates of rows (texts) and columns (words) on the retained
/// axes, in decreasing eigenvalue order. Standard coordinates are the
/// principal ones divided by sqrt(eigenvalue).
struct FactorDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd row_coords;  // n x rank
  Eigen::MatrixXd col_coords;  // m x rank
  Eigen::Index rank = 0;
  // Non-trivial axes removed as numerically zero (linear dependence), and
  // the inertia they carried.
  Eigen::Index dropped = 0;
  double dropped_inertia = 0.0;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  Eigen::MatrixXd standard_row_coords() const {
    return row_coords * eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
  }
  Eigen::MatrixXd standard_col_coords() const {
    return col_coords * eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
  }
};

inline ProbabilityTable to_probabilities(const corpus::ContingencyTable& table) {
  if (table.grand_total == 0) throw Error("zero_total", "contingency table has zero grand total");
  const auto n = static_cast<Eigen::Index>(table.rows());
  const auto m = static_cast<Eigen::Index>(table.cols());
  const double k = static_cast<double>(table.grand_total);
  ProbabilityTable p;
  p.f.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      p.f(i, j) = static_cast<double>(table.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) / k;
  p.row_masses.resize(n);
  p.col_masses.resize(m);
  for (Eigen::Index i = 0; i < n; ++i)
    p.row_masses(i) = static_cast<double>(table.row_totals[static_cast<std::size_t>(i)]) / k;
  for (Eigen::Index j = 0; j < m; ++j)
    p.col_masses(j) = static_cast<double>(table.col_totals[static_cast<std::size_t>(j)]) / k;
  if ((p.row_masses.array() <= 0).any() || (p.col_masses.array() <= 0).any())
    throw Error("zero_mass", "contingency table has an empty row or column");
  p.row_labels = table.row_labels;
  p.col_labels = table.col_labels;
  return p;
}

/// Conditional distribution over columns for row i: f_ij / f_i.
inline Eigen::VectorXd row_profile(const ProbabilityTable& p, Eigen::Index i) {
  return p.f.row(i).transpose() / p.row_masses(i);
}

/// Squared chi-squared distance between the profiles of rows i and k.
inline double chi2_distance(const ProbabilityTable& p, Eigen::Index i, Eigen::Index k) {
  if (i < 0 || k < 0 || i >= p.rows() || k >= p.rows())
    throw Error("bad_index", "row index out of range");
  const Eigen::VectorXd diff = row_profile(p, i) - row_profile(p, k);
  return (diff.array().square() / p.col_masses.array()).sum();
}

inline double total_inertia(const ProbabilityTable& p) {
  const Eigen::MatrixXd expected = p.row_masses * p.col_masses.transpose();
  return ((p.f - expected).array().square() / expected.array()).sum();
}

inline Eigen::MatrixXd standardized_residuals(const ProbabilityTable& p) {
  const Eigen::VectorXd sr = p.row_masses.cwiseSqrt();
  const Eigen::VectorXd sc = p.col_masses.cwiseSqrt();
  Eigen::MatrixXd s = p.f - p.row_masses * p.col_masses.transpose();
  return sr.cwiseInverse().asDiagonal() * s * sc.cwiseInverse().asDiagonal();
}

/// Axes whose eigenvalue falls below `zero_tol` times the largest are
/// treated as linear dependence and dropped.
inline FactorDecomposition decompose(const ProbabilityTable& p, double zero_tol = 1e-12) {
  const Eigen::Index n = p.rows();
  const Eigen::Index m = p.cols();
  if (n < 2 || m < 2) throw Error("bad_table", "correspondence analysis needs at least 2 rows and 2 columns");

  const Eigen::MatrixXd s = standardized_residuals(p);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  const Eigen::VectorXd lambda = sigma.array().square();

  if (lambda.size() == 0 || !(lambda(0) > 1e-24))
    throw Error("zero_inertia", "zero inertia: all row profiles are identical");

  // Centering by f_i f_j removes one dimension, so at most min(n, m) - 1
  // axes carry inertia.
  const Eigen::Index max_axes = std::min(n, m) - 1;
  Eigen::Index rank = 0;
  while (rank < max_axes && lambda(rank) >= zero_tol * lambda(0)) ++rank;

  FactorDecomposition d;
  d.rank = rank;
  d.dropped = max_axes - rank;
  d.dropped_inertia = lambda.tail(lambda.size() - rank).sum();
  d.eigenvalues = lambda.head(rank);
  d.row_coords = p.row_masses.cwiseSqrt().cwiseInverse().asDiagonal() * svd.matrixU().leftCols(rank) *
                 sigma.head(rank).asDiagonal();
  d.col_coords = p.col_masses.cwiseSqrt().cwiseInverse().asDiagonal() * svd.matrixV().leftCols(rank) *
                 sigma.head(rank).asDiagonal();

  // Orient each axis so its largest-magnitude row coordinate is positive.
  for (Eigen::Index a = 0; a < rank; ++a) {
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(d.row_coords(i, a)) > std::abs(d.row_coords(arg, a))) arg = i;
    if (d.row_coords(arg, a) < 0) {
      d.row_coords.col(a) *= -1.0;
      d.col_coords.col(a) *= -1.0;
    }
  }
  d.row_labels = p.row_labels;
  d.col_labels = p.col_labels;
  return d;
}

/// Texts as points in factor space (principal coordinates).
inline PointCloud row_cloud(const FactorDecomposition& d) {
  PointCloud cloud;
  cloud.points = d.row_coords;
  cloud.labels = d.row_labels;
  return cloud;
}

/// Largest absolute violation of the transition formulas linking row and
/// column standard coordinates through the profiles.
inline double transition_residual(const FactorDecomposition& d, const ProbabilityTable& p) {
  if (d.rank == 0) return 0.0;
  const Eigen::MatrixXd psi = d.standard_row_coords();
  const Eigen::MatrixXd phi = d.standard_col_coords();
  const Eigen::VectorXd root = d.eigenvalues.cwiseSqrt();
  const Eigen::MatrixXd row_side = psi * root.asDiagonal();
  const Eigen::MatrixXd row_pred = p.row_masses.cwiseInverse().asDiagonal() * p.f * phi;
  const Eigen::MatrixXd col_side = phi * root.asDiagonal();
  const Eigen::MatrixXd col_pred = p.col_masses.cwiseInverse().asDiagonal() * p.f.transpose() * psi;
  return std::max((row_side - row_pred).cwiseAbs().maxCoeff(), (col_side - col_pred).cwiseAbs().maxCoeff());
}

// CSV exports -----------------------------------------------------------------

inline void write_coords_csv(std::ostream& os, const Eigen::MatrixXd& coords,
                             const std::vector<std::string>& labels) {
  csv::Row header{"label"};
  for (Eigen::Index a = 0; a < coords.cols(); ++a) header.push_back("F" + std::to_string(a + 1));
  csv::write_row(os, header);
  char buf[32];
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    csv::Row row{labels[static_cast<std::size_t>(i)]};
    for (Eigen::Index a = 0; a < coords.cols(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", coords(i, a));
      row.emplace_back(buf);
    }
    csv::write_row(os, row);
  }
}

inline void write_eigenvalues_csv(std::ostream& os, const FactorDecomposition& d) {
  csv::write_row(os, {"axis", "lambda"});
  char buf[32];
  for (Eigen::Index a = 0; a < d.rank; ++a) {
    std::snprintf(buf, sizeof buf, "%.17g", d.eigenvalues(a));
    csv::write_row(os, {std::to_string(a + 1), buf});
  }
}

}  // namespace ultra::ca
