#pragma once

// End-to-end run: corpus -> contingency table per word cut -> correspondence
// analysis -> alpha estimate, and rendering of the result rows.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ultra/ca.hpp"
#include "ultra/corpus.hpp"
#include "ultra/csv.hpp"
#include "ultra/error.hpp"
#include "ultra/ultrametricity.hpp"

namespace ultra::report {

struct RunConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path manifest;
  std::string label;  // corpus name in report rows; defaults to the corpus directory name
  std::vector<corpus::WordCut> word_cuts{corpus::WordCut::top_m(1000), corpus::WordCut::top_m(2000),
                                         corpus::WordCut::all()};
  AlphaParams alpha_params;
  std::filesystem::path output;
  bool emit_factors = false;
  std::filesystem::path factors_dir;  // where factor CSVs go when emit_factors is set

  std::string corpus_label() const {
    if (!label.empty()) return label;
    auto dir = corpus_dir.lexically_normal();
    if (dir.filename().empty()) dir = dir.parent_path();
    return dir.filename().string();
  }

  void validate() const {
    if (word_cuts.empty()) throw Error("bad_config", "at least one word cut is required");
    for (std::size_t i = 0; i < word_cuts.size(); ++i) {
      const auto& c = word_cuts[i];
      if (c.is_all() && i + 1 != word_cuts.size())
        throw Error("bad_config", "word cut 'all' must come last");
      if (i > 0 && !c.is_all() && *c.top <= *word_cuts[i - 1].top)
        throw Error("bad_config", "word cuts must be distinct and ascending");
      if (i > 0 && word_cuts[i - 1].is_all()) throw Error("bad_config", "word cut 'all' must come last");
    }
    alpha_params.validate();
  }
};

struct ReportRow {
  std::string corpus;
  std::size_t texts = 0;
  std::size_t orig_dim = 0;
  std::size_t factor_dim = 0;
  double alpha_mean = 0.0;
  double alpha_sdev = 0.0;
  std::uint64_t degenerate_resampled = 0;
  std::uint64_t seed = 0;
};

struct PipelineResult {
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;  // side channel: dropped rows/columns, per cut
};

/// Runs one word cut on already segmented texts.
inline ReportRow analyze_cut(const std::vector<corpus::Segment>& segments, const corpus::Vocabulary& vocab,
                             corpus::WordCut cut, const AlphaParams& params, const std::string& label,
                             std::vector<std::string>* warnings = nullptr,
                             ca::FactorDecomposition* factors_out = nullptr) {
  const auto table = corpus::build_contingency(segments, vocab, cut);
  if (warnings)
    for (const auto& w : table.warnings) warnings->push_back("cut " + cut.str() + ": " + w);
  const auto probs = ca::to_probabilities(table);
  auto factors = ca::decompose(probs);
  const auto estimate = estimate_alpha(ca::row_cloud(factors), params);

  ReportRow row;
  row.corpus = label;
  row.texts = table.rows();
  row.orig_dim = table.cols();
  row.factor_dim = static_cast<std::size_t>(factors.rank);
  row.alpha_mean = estimate.mean;
  row.alpha_sdev = estimate.sdev;
  row.degenerate_resampled = estimate.degenerate_resampled;
  row.seed = params.seed;
  if (factors_out) *factors_out = std::move(factors);
  return row;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw Error("unwritable_file", "cannot write '" + path.string() + "'");
}

}  // namespace detail

inline PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  std::ifstream manifest_in(config.manifest);
  if (!manifest_in) throw Error("unreadable_file", "cannot read manifest '" + config.manifest.string() + "'");
  const auto manifest = corpus::read_manifest(manifest_in, config.manifest.filename().string());
  const auto segments = corpus::load_corpus(config.corpus_dir, manifest);
  const auto vocab = corpus::build_vocabulary(segments);
  const auto label = config.corpus_label();

  PipelineResult result;
  for (const auto& cut : config.word_cuts) {
    ca::FactorDecomposition factors;
    try {
      result.rows.push_back(analyze_cut(segments, vocab, cut, config.alpha_params, label, &result.warnings,
                                        config.emit_factors ? &factors : nullptr));
    } catch (const Error& e) {
      throw Error(e.kind(), "word cut " + cut.str() + ": " + e.what());
    }
    if (config.emit_factors) {
      const auto dir = config.factors_dir.empty() ? std::filesystem::path(".") : config.factors_dir;
      std::filesystem::create_directories(dir);
      const auto stem = label + "_" + cut.str();
      std::ostringstream rows, cols, eig;
      ca::write_coords_csv(rows, factors.row_coords, factors.row_labels);
      ca::write_coords_csv(cols, factors.col_coords, factors.col_labels);
      ca::write_eigenvalues_csv(eig, factors);
      detail::write_file(dir / (stem + "_rows.csv"), rows.str());
      detail::write_file(dir / (stem + "_cols.csv"), cols.str());
      detail::write_file(dir / (stem + "_eigenvalues.csv"), eig.str());
    }
  }
  return result;
}

// Rendering -------------------------------------------------------------------

enum class Format { csv, text, raw_csv };

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"corpus",     "texts",      "orig_dim", "factor_dim",
                                             "alpha_mean", "alpha_sdev", "degenerate_resampled",
                                             "seed"};
  return cols;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline csv::Row fields(const ReportRow& r, bool raw) {
  auto num = [raw](double v) { return raw ? full(v) : fixed(v, 4); };
  return {r.corpus,
          std::to_string(r.texts),
          std::to_string(r.orig_dim),
          std::to_string(r.factor_dim),
          num(r.alpha_mean),
          num(r.alpha_sdev),
          std::to_string(r.degenerate_resampled),
          std::to_string(r.seed)};
}

}  // namespace detail

/// CSV with alpha to 4 decimals, the same at full precision (raw_csv), or a
/// right-aligned text table.
inline std::string emit_report(const std::vector<ReportRow>& rows, Format format) {
  if (rows.empty()) throw Error("empty_report", "no report rows to emit");
  std::ostringstream os;
  if (format != Format::text) {
    csv::write_row(os, report_columns());
    for (const auto& r : rows) csv::write_row(os, detail::fields(r, format == Format::raw_csv));
    return os.str();
  }
  std::vector<csv::Row> table{report_columns()};
  for (const auto& r : rows) table.push_back(detail::fields(r, false));
  std::vector<std::size_t> width(report_columns().size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      os << std::string(width[c] - row[c].size(), ' ') << row[c];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ultra::report
