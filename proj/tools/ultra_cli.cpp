// ultra: command line front end.
//
//   ultra analyze --corpus-dir DIR [--manifest FILE] [--cuts 1000,2000,all] ...
//   ultra alpha   --cloud FILE [--exhaustive] ...
//   ultra ca      --table FILE --out-dir DIR
//   ultra synth   dendrogram|uniform|corpus ...
//
// Failures print one JSON line {"error": <kind>, "message": <text>} on stderr
// and exit with status 1.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ultra/ultra.hpp"

namespace fs = std::filesystem;

namespace {

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw ultra::Error("unwritable_file", "cannot write '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ultra::Error("unreadable_file", "cannot read '" + path + "'");
  return in;
}

std::vector<ultra::corpus::WordCut> parse_cuts(const std::string& text) {
  std::vector<ultra::corpus::WordCut> cuts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) cuts.push_back(ultra::corpus::WordCut::parse(item));
  return cuts;
}

void add_alpha_flags(CLI::App* cmd, ultra::AlphaParams& p) {
  cmd->add_option("--triangles", p.triangles_per_repeat, "Triangles sampled per repeat")->capture_default_str();
  cmd->add_option("--repeats", p.repeats, "Number of repeats")->capture_default_str();
  cmd->add_option("--seed", p.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--angle-tol", p.eq_tol_deg, "Max difference (degrees) between the two largest angles")
      ->capture_default_str();
  cmd->add_option("--max-small-angle", p.max_small_deg, "Max smallest angle (degrees)")->capture_default_str();
}

ultra::report::Format parse_format(const std::string& f) {
  if (f == "csv") return ultra::report::Format::csv;
  if (f == "text") return ultra::report::Format::text;
  throw ultra::Error("bad_config", "unknown format '" + f + "' (expected csv or text)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultrametricity of text corpora via correspondence analysis"};
  app.require_subcommand(1);

  // analyze ------------------------------------------------------------------
  ultra::report::RunConfig config;
  std::string manifest, cuts = "1000,2000,all", out, raw_out, format = "csv", factors_dir;
  auto* analyze = app.add_subcommand("analyze", "Full pipeline over word cuts; emits the report table");
  analyze->add_option("--corpus-dir", config.corpus_dir, "Directory holding the text files")->required();
  analyze->add_option("--manifest", manifest, "Manifest file (default: <corpus-dir>/manifest.tsv)");
  analyze->add_option("--label", config.label, "Corpus name in the report (default: directory name)");
  analyze->add_option("--cuts", cuts, "Comma separated word cuts, 'all' last")->capture_default_str();
  add_alpha_flags(analyze, config.alpha_params);
  analyze->add_option("--out", out, "Report file (default: stdout)");
  analyze->add_option("--format", format, "csv or text")->capture_default_str();
  analyze->add_option("--raw", raw_out, "Also write a full precision CSV here");
  analyze->add_flag("--emit-factors", config.emit_factors, "Write factor coordinates and eigenvalues");
  analyze->add_option("--factors-dir", factors_dir, "Directory for --emit-factors output (default: .)");

  // alpha --------------------------------------------------------------------
  ultra::AlphaParams alpha_params;
  std::string cloud_path, alpha_out;
  bool exhaustive = false;
  auto* alpha = app.add_subcommand("alpha", "Alpha coefficient of a point cloud CSV");
  alpha->add_option("--cloud", cloud_path, "Cloud CSV: label then coordinates")->required();
  add_alpha_flags(alpha, alpha_params);
  alpha->add_flag("--exhaustive", exhaustive, "Classify every triangle (n <= 200)");
  alpha->add_option("--out", alpha_out, "Output file (default: stdout)");

  // ca -----------------------------------------------------------------------
  std::string table_path, ca_dir = ".", ca_prefix = "ca";
  auto* ca_cmd = app.add_subcommand("ca", "Correspondence analysis of a contingency table CSV");
  ca_cmd->add_option("--table", table_path, "Table CSV: header of words, first column text ids")->required();
  ca_cmd->add_option("--out-dir", ca_dir, "Directory for factor CSVs")->capture_default_str();
  ca_cmd->add_option("--prefix", ca_prefix, "File name prefix")->capture_default_str();

  // synth --------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate oracle data");
  synth->require_subcommand(1);
  std::size_t leaves = 32, points = 100, dim = 2, docs = 20, words = 500;
  std::uint64_t synth_seed = 1;
  std::string synth_out, corpus_out;
  auto* dendro = synth->add_subcommand("dendrogram", "Embedded cophenetic ultrametric of a random dendrogram");
  dendro->add_option("--leaves", leaves)->capture_default_str();
  dendro->add_option("--seed", synth_seed)->capture_default_str();
  dendro->add_option("--out", synth_out, "Cloud CSV (default: stdout)");
  auto* uniform = synth->add_subcommand("uniform", "Uniform random cloud on the unit cube");
  uniform->add_option("--points", points)->capture_default_str();
  uniform->add_option("--dim", dim)->capture_default_str();
  uniform->add_option("--seed", synth_seed)->capture_default_str();
  uniform->add_option("--out", synth_out, "Cloud CSV (default: stdout)");
  auto* corpus_cmd = synth->add_subcommand("corpus", "Synthetic text corpus with manifest");
  corpus_cmd->add_option("--docs", docs)->capture_default_str();
  corpus_cmd->add_option("--words", words, "Words per document")->capture_default_str();
  corpus_cmd->add_option("--seed", synth_seed)->capture_default_str();
  corpus_cmd->add_option("--out-dir", corpus_out, "Directory to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      config.manifest = manifest.empty() ? config.corpus_dir / "manifest.tsv" : fs::path(manifest);
      config.word_cuts = parse_cuts(cuts);
      config.factors_dir = factors_dir;
      const auto fmt = parse_format(format);
      const auto result = ultra::report::run_pipeline(config);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      write_output(out, ultra::report::emit_report(result.rows, fmt));
      if (!raw_out.empty())
        write_output(raw_out, ultra::report::emit_report(result.rows, ultra::report::Format::raw_csv));
    } else if (*alpha) {
      auto in = open_input(cloud_path);
      const auto cloud = ultra::read_cloud_csv(in);
      if (exhaustive) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", ultra::alpha_exhaustive(cloud, alpha_params));
        write_output(alpha_out, std::string("points,dim,alpha_exact\n") + std::to_string(cloud.size()) + "," +
                                    std::to_string(cloud.dim()) + "," + buf + "\n");
      } else {
        const auto est = ultra::estimate_alpha(cloud, alpha_params);
        ultra::report::ReportRow row;
        row.corpus = fs::path(cloud_path).stem().string();
        row.texts = static_cast<std::size_t>(cloud.size());
        row.orig_dim = row.factor_dim = static_cast<std::size_t>(cloud.dim());
        row.alpha_mean = est.mean;
        row.alpha_sdev = est.sdev;
        row.degenerate_resampled = est.degenerate_resampled;
        row.seed = alpha_params.seed;
        write_output(alpha_out, ultra::report::emit_report({row}, ultra::report::Format::csv));
      }
    } else if (*ca_cmd) {
      auto in = open_input(table_path);
      const auto table = ultra::corpus::read_table_csv(in);
      const auto probs = ultra::ca::to_probabilities(table);
      const auto factors = ultra::ca::decompose(probs);
      fs::create_directories(ca_dir);
      std::ostringstream rows, cols, eig;
      ultra::ca::write_coords_csv(rows, factors.row_coords, factors.row_labels);
      ultra::ca::write_coords_csv(cols, factors.col_coords, factors.col_labels);
      ultra::ca::write_eigenvalues_csv(eig, factors);
      write_output((fs::path(ca_dir) / (ca_prefix + "_rows.csv")).string(), rows.str());
      write_output((fs::path(ca_dir) / (ca_prefix + "_cols.csv")).string(), cols.str());
      write_output((fs::path(ca_dir) / (ca_prefix + "_eigenvalues.csv")).string(), eig.str());
      std::cout << "rows=" << table.rows() << " cols=" << table.cols() << " rank=" << factors.rank
                << " dropped=" << factors.dropped << " inertia=" << ultra::ca::total_inertia(probs) << '\n';
    } else if (*dendro || *uniform) {
      ultra::Rng rng(synth_seed);
      ultra::PointCloud cloud;
      if (*dendro)
        cloud = ultra::synthetic::embed(ultra::synthetic::cophenetic(ultra::synthetic::random_dendrogram(leaves, rng)));
      else
        cloud = ultra::synthetic::uniform_cloud(points, dim, rng);
      std::ostringstream os;
      ultra::write_cloud_csv(os, cloud);
      write_output(synth_out, os.str());
    } else if (*corpus_cmd) {
      const auto documents = ultra::synthetic::synthetic_corpus(docs, words, synth_seed);
      fs::create_directories(corpus_out);
      std::ostringstream manifest_text;
      manifest_text << "# id\tpath\n";
      for (const auto& d : documents) {
        write_output((fs::path(corpus_out) / (d.id + ".txt")).string(), d.text);
        manifest_text << d.id << '\t' << d.id << ".txt\n";
      }
      write_output((fs::path(corpus_out) / "manifest.tsv").string(), manifest_text.str());
    }
  } catch (const ultra::Error& e) {
    std::cerr << nlohmann::json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
