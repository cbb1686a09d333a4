#pragma once

// Ground-truth generators: random dendrograms and their cophenetic
// ultrametrics, Euclidean embedding of a distance matrix by classical scaling,
// uniform random clouds, and a small synthetic text corpus.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "ultra/corpus.hpp"
#include "ultra/error.hpp"
#include "ultra/point_cloud.hpp"
#include "ultra/rng.hpp"

namespace ultra::synthetic {

struct Merge {
  std::size_t left;
  std::size_t right;
  double height;
};

/// Binary merge tree over leaves 0..n_leaves-1. Merge k creates node
/// n_leaves + k; children refer to leaves or earlier merges.
struct Dendrogram {
  std::size_t n_leaves = 0;
  std::vector<Merge> merges;

  double node_height(std::size_t node) const {
    return node < n_leaves ? 0.0 : merges[node - n_leaves].height;
  }

  void validate() const {
    if (n_leaves < 2) throw Error("bad_dendrogram", "dendrogram needs at least 2 leaves");
    if (merges.size() != n_leaves - 1)
      throw Error("bad_dendrogram", "dendrogram needs exactly n_leaves - 1 merges");
    std::vector<bool> used(n_leaves + merges.size(), false);
    for (std::size_t k = 0; k < merges.size(); ++k) {
      const auto& m = merges[k];
      for (auto child : {m.left, m.right}) {
        if (child >= n_leaves + k || used[child])
          throw Error("bad_dendrogram", "merge " + std::to_string(k) + " has an invalid child");
        used[child] = true;
        if (!(m.height > node_height(child)))
          throw Error("bad_dendrogram", "merge heights must increase towards the root");
      }
      if (m.left == m.right) throw Error("bad_dendrogram", "merge joins a node with itself");
    }
  }
};

struct UltrametricMatrix {
  Eigen::MatrixXd d;

  /// Largest violation of d(x,z) <= max(d(x,y), d(y,z)) over all triplets;
  /// zero for an exact ultrametric.
  double max_violation() const {
    const Eigen::Index n = d.rows();
    double worst = 0.0;
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        for (Eigen::Index z = 0; z < n; ++z)
          worst = std::max(worst, d(x, z) - std::max(d(x, y), d(y, z)));
    return worst;
  }
};

/// Uniformly random merge order with strictly increasing heights drawn as
/// sorted distinct uniforms on (0, 1].
inline Dendrogram random_dendrogram(std::size_t n, Rng& rng) {
  if (n < 2) throw Error("bad_dendrogram", "random_dendrogram needs n >= 2");
  std::vector<double> heights(n - 1);
  for (;;) {
    for (auto& h : heights) h = 1.0 - rng.uniform();
    std::sort(heights.begin(), heights.end());
    if (std::adjacent_find(heights.begin(), heights.end()) == heights.end()) break;
  }
  Dendrogram t;
  t.n_leaves = n;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto i = static_cast<std::size_t>(rng.index(active.size()));
    auto j = static_cast<std::size_t>(rng.index(active.size() - 1));
    if (j >= i) ++j;
    t.merges.push_back({active[i], active[j], heights[k]});
    const auto hi = std::max(i, j), lo = std::min(i, j);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(hi));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(lo));
    active.push_back(n + k);
  }
  return t;
}

/// d(x, y) = height of the lowest merge joining leaves x and y.
inline UltrametricMatrix cophenetic(const Dendrogram& t) {
  t.validate();
  const std::size_t n = t.n_leaves;
  std::vector<std::vector<std::size_t>> members(n + t.merges.size());
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  UltrametricMatrix u;
  u.d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < t.merges.size(); ++k) {
    const auto& m = t.merges[k];
    for (auto a : members[m.left])
      for (auto b : members[m.right])
        u.d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            u.d(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = m.height;
    auto& merged = members[n + k];
    merged = members[m.left];
    merged.insert(merged.end(), members[m.right].begin(), members[m.right].end());
  }
  return u;
}

/// Classical scaling: double-centre the squared distances into a Gram matrix
/// and keep the axes with clearly positive eigenvalues.
inline PointCloud embed(const Eigen::MatrixXd& distances) {
  const Eigen::Index n = distances.rows();
  if (n < 2 || distances.cols() != n) throw Error("bad_distances", "distance matrix must be square, n >= 2");
  const Eigen::MatrixXd sq = distances.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double largest = values(n - 1);
  if (!(largest > 0.0)) throw Error("bad_distances", "all distances are zero");
  if (values(0) < -1e-8 * largest)
    throw Error("not_embeddable", "not Euclidean-embeddable: Gram matrix eigenvalue " +
                                      std::to_string(values(0)) + " vs largest " + std::to_string(largest));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index a = n - 1; a >= 0; --a)
    if (values(a) > 1e-10 * largest) keep.push_back(a);
  PointCloud cloud;
  cloud.points.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    cloud.points.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]) * std::sqrt(values(keep[c]));
  for (Eigen::Index i = 0; i < n; ++i) cloud.labels.push_back(default_label(static_cast<std::size_t>(i)));
  return cloud;
}

inline PointCloud embed(const UltrametricMatrix& u) { return embed(u.d); }

/// n points i.i.d. uniform on [0, 1]^d.
inline PointCloud uniform_cloud(std::size_t n, std::size_t d, Rng& rng) {
  if (n < 3 || d < 1) throw Error("bad_cloud", "uniform_cloud needs n >= 3 and d >= 1");
  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i)
    for (Eigen::Index a = 0; a < cloud.points.cols(); ++a) cloud.points(i, a) = rng.uniform();
  for (std::size_t i = 0; i < n; ++i) cloud.labels.push_back(default_label(i));
  return cloud;
}

// Synthetic text corpus -------------------------------------------------------

namespace detail {

inline std::size_t zipf_draw(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                  cumulative.begin());
}

}  // namespace detail

/// Deterministic pseudo-English documents: a shared Zipf-distributed
/// vocabulary of invented words mixed with one of `topics` topic-specific
/// word distributions per document, with capitalisation and punctuation.
inline std::vector<corpus::RawDocument> synthetic_corpus(std::size_t docs, std::size_t words_per_doc,
                                                         std::uint64_t seed, std::size_t topics = 4) {
  if (docs < 1 || words_per_doc < 1 || topics < 1)
    throw Error("bad_corpus", "synthetic corpus needs docs, words and topics >= 1");
  static const char* const onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st"};
  static const char* const vowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  Rng rng(seed);

  std::vector<std::string> words;
  while (words.size() < 800) {
    std::string w;
    const auto syllables = 1 + rng.index(3);
    for (std::uint64_t s = 0; s < syllables; ++s) {
      w += onsets[rng.index(std::size(onsets))];
      w += vowels[rng.index(std::size(vowels))];
    }
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
  }
  std::vector<double> zipf(words.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < words.size(); ++r) zipf[r] = acc += 1.0 / static_cast<double>(r + 1);

  // Each topic ranks the vocabulary by its own random permutation.
  std::vector<std::vector<std::size_t>> topic_order(topics);
  for (auto& order : topic_order) {
    order.resize(words.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  }

  std::vector<corpus::RawDocument> out;
  for (std::size_t d = 0; d < docs; ++d) {
    const auto& order = topic_order[d % topics];
    std::ostringstream text;
    bool sentence_start = true;
    for (std::size_t w = 0; w < words_per_doc; ++w) {
      const auto r = detail::zipf_draw(zipf, rng);
      std::string word = rng.uniform() < 0.5 ? words[r] : words[order[r]];
      if (sentence_start) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      if (w) text << ' ';
      text << word;
      sentence_start = false;
      const double u = rng.uniform();
      if (w + 1 == words_per_doc || u < 0.08) {
        text << '.';
        sentence_start = true;
        if (rng.uniform() < 0.2) text << '\n';
      } else if (u < 0.14) {
        text << ',';
      }
    }
    text << '\n';
    std::ostringstream id;
    id << "doc" << std::setw(2) << std::setfill('0') << d + 1;
    out.push_back({id.str(), text.str()});
  }
  return out;
}

}  // namespace ultra::synthetic
