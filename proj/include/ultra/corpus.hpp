#pragma once

// Text ingestion: tokenization, segmentation of long documents, word ranking
// and text x word contingency tables.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "ultra/csv.hpp"
#include "ultra/error.hpp"

namespace ultra::corpus {

struct RawDocument {
  std::string id;
  std::string text;
};

struct Segment {
  std::string doc_id;
  std::size_t index = 0;
  std::vector<std::string> tokens;
  // Row label used in tables: the document id for an unsplit document,
  // otherwise "<doc_id>.<index+1, zero padded>".
  std::string label;
};

struct VocabEntry {
  std::string word;
  std::uint64_t count = 0;
  std::size_t rank = 0;  // 1-based
};

struct Vocabulary {
  std::vector<VocabEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& e : entries) t += e.count;
    return t;
  }
};

/// Restriction of the vocabulary to its `top` most frequent words; empty means
/// all words.
struct WordCut {
  std::optional<std::size_t> top;

  static WordCut all() { return {}; }
  static WordCut top_m(std::size_t m) { return {m}; }

  bool is_all() const { return !top.has_value(); }
  std::string str() const { return top ? std::to_string(*top) : std::string("all"); }

  static WordCut parse(std::string_view s) {
    std::string lower(s);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "all") return all();
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(lower, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != lower.size() || lower.empty() || lower[0] == '-' || v == 0)
      throw Error("bad_word_cut", "word cut must be a positive integer or 'all', got '" +
                                      std::string(s) + "'");
    return top_m(static_cast<std::size_t>(v));
  }

  friend bool operator==(const WordCut&, const WordCut&) = default;
};

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::uint64_t> counts;  // row-major, rows() x cols()
  std::vector<std::uint64_t> row_totals;
  std::vector<std::uint64_t> col_totals;
  std::uint64_t grand_total = 0;
  // Rows and columns removed because they carried no mass.
  std::vector<std::string> warnings;

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return col_labels.size(); }
  std::uint64_t at(std::size_t i, std::size_t j) const { return counts[i * cols() + j]; }

  /// Builds a table from dense counts, computing the margins. Does not drop
  /// empty rows or columns; callers needing that use build_contingency.
  static ContingencyTable from_counts(std::vector<std::vector<std::uint64_t>> dense,
                                      std::vector<std::string> row_labels = {},
                                      std::vector<std::string> col_labels = {}) {
    ContingencyTable t;
    const std::size_t n = dense.size();
    const std::size_t m = n ? dense.front().size() : 0;
    for (const auto& r : dense)
      if (r.size() != m) throw Error("bad_table", "ragged count matrix");
    if (row_labels.empty())
      for (std::size_t i = 0; i < n; ++i) row_labels.push_back("r" + std::to_string(i + 1));
    if (col_labels.empty())
      for (std::size_t j = 0; j < m; ++j) col_labels.push_back("c" + std::to_string(j + 1));
    if (row_labels.size() != n || col_labels.size() != m)
      throw Error("bad_table", "label count does not match count matrix shape");
    t.row_labels = std::move(row_labels);
    t.col_labels = std::move(col_labels);
    t.counts.reserve(n * m);
    for (const auto& r : dense) t.counts.insert(t.counts.end(), r.begin(), r.end());
    t.recompute_totals();
    return t;
  }

  void recompute_totals() {
    row_totals.assign(rows(), 0);
    col_totals.assign(cols(), 0);
    grand_total = 0;
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) {
        const auto k = at(i, j);
        row_totals[i] += k;
        col_totals[j] += k;
        grand_total += k;
      }
  }

  ContingencyTable transposed() const {
    ContingencyTable t;
    t.row_labels = col_labels;
    t.col_labels = row_labels;
    t.counts.resize(counts.size());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) t.counts[j * rows() + i] = at(i, j);
    t.recompute_totals();
    return t;
  }
};

// ---------------------------------------------------------------------------
// Tokenization

inline bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isalnum(u);
}

/// Byte offset and length of every maximal run of ASCII letters/digits.
inline std::vector<std::pair<std::size_t, std::size_t>> token_spans(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_char(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_char(text[i])) ++i;
    if (i > start) spans.emplace_back(start, i - start);
  }
  return spans;
}

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Lowercased runs of alphanumerics; any other character is a delimiter.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> words;
  for (auto [start, len] : token_spans(text)) words.push_back(lowercase(text.substr(start, len)));
  return words;
}

// ---------------------------------------------------------------------------
// Segmentation

namespace detail {

inline std::string segment_label(const std::string& doc_id, std::size_t index) {
  std::ostringstream os;
  os << doc_id << '.' << std::setw(3) << std::setfill('0') << index + 1;
  return os.str();
}

inline void label_segments(std::vector<Segment>& segs, const std::string& doc_id) {
  for (auto& s : segs) s.label = segment_label(doc_id, s.index);
}

}  // namespace detail

/// The whole document as one segment labelled with the document id.
inline Segment whole_document(const RawDocument& doc) {
  return Segment{doc.id, 0, tokenize(doc.text), doc.id};
}

/// Greedy split at word boundaries: each segment covers a source span (from
/// the first character of its first word to the last character of its last
/// word) of at most `max_chars` bytes.
inline std::vector<Segment> segment_by_chars(const RawDocument& doc, std::size_t max_chars) {
  if (max_chars == 0) throw Error("bad_segmentation", "max_chars must be positive");
  const auto spans = token_spans(doc.text);
  std::vector<Segment> out;
  std::size_t seg_start = 0;
  for (auto [start, len] : spans) {
    if (len > max_chars)
      throw Error("word_too_long", "word '" + doc.text.substr(start, len) + "' in document '" +
                                       doc.id + "' is longer than " + std::to_string(max_chars) +
                                       " characters");
    if (out.empty() || start + len - seg_start > max_chars) {
      out.push_back(Segment{doc.id, out.size(), {}, {}});
      seg_start = start;
    }
    out.back().tokens.push_back(lowercase(std::string_view(doc.text).substr(start, len)));
  }
  detail::label_segments(out, doc.id);
  return out;
}

/// Greedy chunks of `max_words` tokens; a trailing chunk shorter than
/// `min_words` is merged into the one before it.
inline std::vector<Segment> segment_by_words(const RawDocument& doc, std::size_t min_words,
                                             std::size_t max_words) {
  if (min_words == 0 || max_words == 0 || min_words > max_words)
    throw Error("bad_segmentation", "need 0 < min_words <= max_words");
  auto tokens = tokenize(doc.text);
  std::vector<Segment> out;
  for (std::size_t pos = 0; pos < tokens.size(); pos += max_words) {
    const auto end = std::min(tokens.size(), pos + max_words);
    std::vector<std::string> chunk(std::make_move_iterator(tokens.begin() + pos),
                                   std::make_move_iterator(tokens.begin() + end));
    if (!out.empty() && chunk.size() < min_words) {
      auto& prev = out.back().tokens;
      prev.insert(prev.end(), std::make_move_iterator(chunk.begin()),
                  std::make_move_iterator(chunk.end()));
    } else {
      out.push_back(Segment{doc.id, out.size(), std::move(chunk), {}});
    }
  }
  detail::label_segments(out, doc.id);
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary and contingency tables

inline Vocabulary build_vocabulary(const std::vector<Segment>& segments) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& s : segments)
    for (const auto& w : s.tokens) ++counts[w];
  if (counts.empty()) throw Error("empty_corpus", "corpus contains no words");

  Vocabulary v;
  v.entries.reserve(counts.size());
  for (auto& [w, c] : counts) v.entries.push_back({w, c, 0});
  std::sort(v.entries.begin(), v.entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
  for (std::size_t r = 0; r < v.entries.size(); ++r) v.entries[r].rank = r + 1;
  return v;
}

/// Texts x top-ranked words. Rows follow segment order, columns follow rank.
/// Rows with no occurrence of any selected word are dropped, then columns left
/// empty by that, each with a warning.
inline ContingencyTable build_contingency(const std::vector<Segment>& segments,
                                          const Vocabulary& vocab, WordCut cut) {
  std::size_t m = vocab.size();
  if (cut.top) {
    if (*cut.top > vocab.size())
      throw Error("bad_word_cut", "word cut " + cut.str() + " exceeds vocabulary size " +
                                      std::to_string(vocab.size()));
    m = *cut.top;
  }
  std::unordered_map<std::string_view, std::size_t> column;
  column.reserve(m);
  for (std::size_t j = 0; j < m; ++j) column.emplace(vocab.entries[j].word, j);

  const std::size_t n = segments.size();
  std::vector<std::uint64_t> dense(n * m, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& w : segments[i].tokens)
      if (auto it = column.find(w); it != column.end()) ++dense[i * m + it->second];

  std::vector<std::string> warnings;
  std::vector<std::size_t> keep_rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < m; ++j) total += dense[i * m + j];
    if (total > 0)
      keep_rows.push_back(i);
    else
      warnings.push_back("dropped text '" + segments[i].label + "': no occurrence of the top " +
                         std::to_string(m) + " words");
  }
  std::vector<std::size_t> keep_cols;
  for (std::size_t j = 0; j < m; ++j) {
    std::uint64_t total = 0;
    for (auto i : keep_rows) total += dense[i * m + j];
    if (total > 0)
      keep_cols.push_back(j);
    else
      warnings.push_back("dropped word '" + vocab.entries[j].word + "': absent from retained texts");
  }
  if (keep_rows.size() < 3)
    throw Error("too_few_texts", "only " + std::to_string(keep_rows.size()) +
                                     " texts have mass under word cut " + cut.str() +
                                     "; at least 3 are needed");

  ContingencyTable t;
  for (auto i : keep_rows) t.row_labels.push_back(segments[i].label);
  for (auto j : keep_cols) t.col_labels.push_back(vocab.entries[j].word);
  t.counts.reserve(keep_rows.size() * keep_cols.size());
  for (auto i : keep_rows)
    for (auto j : keep_cols) t.counts.push_back(dense[i * m + j]);
  t.recompute_totals();
  t.warnings = std::move(warnings);
  return t;
}

// ---------------------------------------------------------------------------
// Contingency table CSV: header "text,<word>...", then "<id>,<count>...".

inline void write_table_csv(std::ostream& os, const ContingencyTable& t) {
  csv::Row header{"text"};
  header.insert(header.end(), t.col_labels.begin(), t.col_labels.end());
  csv::write_row(os, header);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    csv::Row row{t.row_labels[i]};
    for (std::size_t j = 0; j < t.cols(); ++j) row.push_back(std::to_string(t.at(i, j)));
    csv::write_row(os, row);
  }
}

inline ContingencyTable read_table_csv(std::istream& is) {
  auto rows = csv::read_all(is);
  if (rows.size() < 2 || rows.front().size() < 2)
    throw Error("bad_table", "table CSV needs a header and at least one data row");
  const auto& header = rows.front();
  std::vector<std::string> cols(header.begin() + 1, header.end());
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> dense;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw Error("bad_table", "row " + std::to_string(r + 1) + " has " +
                                   std::to_string(row.size()) + " fields, expected " +
                                   std::to_string(header.size()));
    labels.push_back(row[0]);
    auto& out = dense.emplace_back();
    for (std::size_t j = 1; j < row.size(); ++j) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(row[j], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != row[j].size() || row[j][0] == '-')
        throw Error("bad_table", "cell '" + row[j] + "' on row " + std::to_string(r + 1) +
                                     " is not a non-negative integer");
      out.push_back(v);
    }
  }
  return ContingencyTable::from_counts(std::move(dense), std::move(labels), std::move(cols));
}

// ---------------------------------------------------------------------------
// Corpus manifest: one tab-separated record per line,
//   <id> TAB <relative path> [TAB chars:<N> | words:<MIN>-<MAX>]
// Blank lines and lines starting with '#' are ignored.

struct CharSplit {
  std::size_t max_chars;
};
struct WordSplit {
  std::size_t min_words;
  std::size_t max_words;
};
using SegmentDirective = std::variant<std::monostate, CharSplit, WordSplit>;

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
  SegmentDirective directive;
};

namespace detail {

inline std::size_t parse_positive(const std::string& s, const std::string& context) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s[0] == '-' || v == 0)
    throw Error("bad_manifest", context + ": expected a positive integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline SegmentDirective parse_directive(const std::string& s, const std::string& context) {
  if (s.empty()) return std::monostate{};
  if (s.rfind("chars:", 0) == 0) return CharSplit{detail::parse_positive(s.substr(6), context)};
  if (s.rfind("words:", 0) == 0) {
    const auto body = s.substr(6);
    const auto dash = body.find('-');
    if (dash == std::string::npos)
      throw Error("bad_manifest", context + ": words directive needs MIN-MAX, got '" + s + "'");
    WordSplit w{detail::parse_positive(body.substr(0, dash), context),
                detail::parse_positive(body.substr(dash + 1), context)};
    if (w.min_words > w.max_words)
      throw Error("bad_manifest", context + ": MIN exceeds MAX in '" + s + "'");
    return w;
  }
  throw Error("bad_manifest", context + ": unknown segmentation directive '" + s + "'");
}

inline std::vector<ManifestEntry> read_manifest(std::istream& is, const std::string& name = "manifest") {
  std::vector<ManifestEntry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
      fields.push_back(line.substr(start, tab - start));
    fields.push_back(line.substr(start));
    const std::string context = name + ":" + std::to_string(lineno);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty())
      throw Error("bad_manifest", context + ": expected '<id>\\t<path>[\\t<directive>]'");
    if (!seen.insert(fields[0]).second)
      throw Error("bad_manifest", context + ": duplicate document id '" + fields[0] + "'");
    entries.push_back({fields[0], fields[1],
                       parse_directive(fields.size() == 3 ? fields[2] : std::string(), context)});
  }
  if (entries.empty()) throw Error("bad_manifest", name + ": no documents listed");
  return entries;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("unreadable_file", "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Segments of one document under its directive.
inline std::vector<Segment> segment_document(const RawDocument& doc,
                                             const SegmentDirective& directive) {
  if (doc.text.empty()) throw Error("empty_document", "document '" + doc.id + "' is empty");
  std::vector<Segment> segs;
  if (const auto* c = std::get_if<CharSplit>(&directive))
    segs = segment_by_chars(doc, c->max_chars);
  else if (const auto* w = std::get_if<WordSplit>(&directive))
    segs = segment_by_words(doc, w->min_words, w->max_words);
  else
    segs.push_back(whole_document(doc));
  if (segs.empty() || segs.front().tokens.empty())
    throw Error("empty_document", "document '" + doc.id + "' contains no words");
  return segs;
}

/// Reads and segments every manifest document, in manifest order.
inline std::vector<Segment> load_corpus(const std::filesystem::path& corpus_dir,
                                        const std::vector<ManifestEntry>& manifest) {
  std::vector<Segment> all;
  for (const auto& e : manifest) {
    RawDocument doc{e.id, read_file(corpus_dir / e.path)};
    auto segs = segment_document(doc, e.directive);
    all.insert(all.end(), std::make_move_iterator(segs.begin()),
               std::make_move_iterator(segs.end()));
  }
  return all;
}

}  // namespace ultra::corpus
