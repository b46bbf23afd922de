#include "narrative/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "narrative/error.hpp"

namespace narrative {

const char* to_string(SegmentKind kind) noexcept {
  switch (kind) {
    case SegmentKind::scene: return "scene";
    case SegmentKind::paragraph: return "paragraph";
    case SegmentKind::beat: return "beat";
  }
  return "unknown";
}

const char* to_string(LocationType type) noexcept {
  switch (type) {
    case LocationType::interior: return "interior";
    case LocationType::exterior: return "exterior";
    case LocationType::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(TimeOfDay time) noexcept {
  switch (time) {
    case TimeOfDay::day: return "day";
    case TimeOfDay::night: return "night";
    case TimeOfDay::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(SourceKind kind) noexcept {
  return kind == SourceKind::screenplay ? "screenplay" : "prose";
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2) tokens.push_back(current);
    current.clear();
  };
  for (unsigned char ch : text) {
    const auto lower = static_cast<unsigned char>(std::tolower(ch));
    const bool keep = (lower >= 'a' && lower <= 'z') || (lower >= '0' && lower <= '9');
    if (keep && ch < 0x80) {
      current.push_back(static_cast<char>(lower));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view raw) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    auto line = raw.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

// Optional scene number, optional "[", INT or EXT with optional ".", then the rest.
const std::regex& heading_pattern() {
  static const std::regex re(R"(^\s*(?:\d+[A-Z]?\s+)?\[?\s*(INT|EXT)(?:\.|\s)\s*(.*?)\s*\]?\s*$)");
  return re;
}

// NAME: dialog   /   NAME (V.O.): dialog
const std::regex& inline_cue_pattern() {
  static const std::regex re(R"(^\s*([A-Z][A-Z0-9 .'\-]*[A-Z0-9.])\s*(?:\([^)]*\))?\s*:\s*(.*)$)");
  return re;
}

// A line holding only an upper-case name, dialog follows on the next lines.
const std::regex& standalone_cue_pattern() {
  static const std::regex re(R"(^\s*([A-Z][A-Z0-9 .'\-]*[A-Z0-9.])\s*(?:\([^)]*\))?\s*$)");
  return re;
}

bool is_transition(const std::string& name) {
  static const std::vector<std::string> words = {"CUT", "FADE", "DISSOLVE", "SMASH", "MATCH",
                                                 "THE END", "CONTINUED", "INTERCUT"};
  if (name.size() >= 2 && name.compare(name.size() - 2, 2, "TO") == 0) return true;
  return std::any_of(words.begin(), words.end(),
                     [&](const std::string& w) { return name.rfind(w, 0) == 0; });
}

bool looks_like_name(const std::string& name) {
  const auto letters = std::count_if(name.begin(), name.end(),
                                     [](unsigned char c) { return std::isalpha(c); });
  const auto words = std::count(name.begin(), name.end(), ' ') + 1;
  return letters >= 2 && words <= 4 && name.size() <= 40 && !is_transition(name);
}

bool is_beat_delimiter(std::string_view line) { return trim(line) == "---BEAT---"; }

struct Heading {
  std::string raw;
  LocationType location = LocationType::unknown;
  std::string location_name;
  TimeOfDay time = TimeOfDay::unknown;
};

std::optional<Heading> parse_heading(std::string_view line) {
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, heading_pattern())) return std::nullopt;
  Heading h;
  h.raw = trim(line);
  h.location = m[1].str() == "INT" ? LocationType::interior : LocationType::exterior;
  std::string rest = m[2].str();

  // trailing DAY / NIGHT token
  auto end = rest.find_last_not_of(" \t");
  if (end != std::string::npos) {
    auto begin = end;
    while (begin > 0 && std::isalpha(static_cast<unsigned char>(rest[begin - 1]))) --begin;
    std::string word = rest.substr(begin, end - begin + 1);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (word == "DAY" || word == "NIGHT") {
      h.time = word == "DAY" ? TimeOfDay::day : TimeOfDay::night;
      rest.erase(begin);
      while (!rest.empty() && std::string_view(" \t-,.").find(rest.back()) != std::string_view::npos)
        rest.pop_back();
    }
  }
  h.location_name = trim(rest);
  return h;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out.push_back('\n');
    out += l;
  }
  return out;
}

struct SceneDraft {
  Heading heading;
  std::vector<std::string_view> lines;
};

Segment build_scene(const SceneDraft& draft) {
  Segment seg;
  seg.kind = SegmentKind::scene;
  seg.heading = draft.heading.raw;
  seg.location_type = draft.heading.location;
  seg.location_name = draft.heading.location_name;
  seg.time_of_day = draft.heading.time;

  std::vector<std::vector<std::string>> beats(1);
  const auto& lines = draft.lines;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (is_beat_delimiter(line)) {
      beats.emplace_back();
      continue;
    }
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_match(line.begin(), line.end(), m, inline_cue_pattern())) {
      const std::string name = trim(m[1].str());
      if (looks_like_name(name)) {
        seg.characters.insert(name);
        const std::string dialog = trim(m[2].str());
        if (!dialog.empty()) beats.back().push_back(dialog);
        continue;
      }
    }
    if (std::regex_match(line.begin(), line.end(), m, standalone_cue_pattern())) {
      const std::string name = trim(m[1].str());
      const bool dialog_follows = i + 1 < lines.size() && !is_blank(lines[i + 1]) &&
                                  !is_beat_delimiter(lines[i + 1]);
      if (dialog_follows && looks_like_name(name)) {
        seg.characters.insert(name);
        continue;
      }
    }
    if (!is_blank(line)) beats.back().push_back(trim(line));
  }

  std::vector<std::string> all;
  for (const auto& beat : beats) all.insert(all.end(), beat.begin(), beat.end());
  seg.body = join_lines(all);
  if (beats.size() > 1) {
    for (const auto& beat : beats)
      if (!beat.empty()) seg.beats.push_back(join_lines(beat));
  }
  return seg;
}

}  // namespace

std::size_t count_scene_headings(std::string_view raw) {
  std::size_t n = 0;
  for (auto line : split_lines(raw))
    if (parse_heading(line)) ++n;
  return n;
}

SourceKind detect_source_kind(std::string_view raw) {
  return count_scene_headings(raw) >= 2 ? SourceKind::screenplay : SourceKind::prose;
}

SegmentedDocument parse_screenplay(std::string_view raw) {
  if (is_blank(raw)) throw Error(ErrorCode::EmptyDocument, "input has no content");
  SegmentedDocument doc;
  doc.source_kind = SourceKind::screenplay;

  std::vector<SceneDraft> drafts;
  for (auto line : split_lines(raw)) {
    if (auto h = parse_heading(line)) {
      drafts.push_back({std::move(*h), {}});
    } else if (!drafts.empty()) {
      drafts.back().lines.push_back(line);
    } else if (doc.title.empty() && !is_blank(line)) {
      doc.title = trim(line);
    }
  }
  if (drafts.empty()) throw Error(ErrorCode::NoScenesFound, "no INT./EXT. scene heading matched");

  for (const auto& draft : drafts) {
    Segment seg = build_scene(draft);
    // A heading with nothing under it carries no text to analyze.
    if (is_blank(seg.body)) continue;
    seg.ordinal = static_cast<int>(doc.segments.size()) + 1;
    doc.segments.push_back(std::move(seg));
  }
  if (doc.segments.empty()) throw Error(ErrorCode::EmptyDocument, "all scenes are empty");
  return doc;
}

SegmentedDocument parse_prose(std::string_view raw) {
  SegmentedDocument doc;
  doc.source_kind = SourceKind::prose;
  std::vector<std::string> current;
  auto flush = [&] {
    if (current.empty()) return;
    Segment seg;
    seg.kind = SegmentKind::paragraph;
    seg.ordinal = static_cast<int>(doc.segments.size()) + 1;
    seg.body = join_lines(current);
    doc.segments.push_back(std::move(seg));
    current.clear();
  };
  for (auto line : split_lines(raw)) {
    if (is_blank(line)) {
      flush();
    } else {
      current.push_back(trim(line));
    }
  }
  flush();
  if (doc.segments.empty()) throw Error(ErrorCode::EmptyDocument, "no non-whitespace content");
  return doc;
}

SegmentedDocument beats_of(const SegmentedDocument& doc, int scene_ordinal) {
  auto it = std::find_if(doc.segments.begin(), doc.segments.end(),
                         [&](const Segment& s) { return s.ordinal == scene_ordinal; });
  if (it == doc.segments.end())
    throw Error(ErrorCode::InvalidArgument, "no segment with ordinal " + std::to_string(scene_ordinal));
  if (it->beats.empty())
    throw Error(ErrorCode::InvalidArgument,
                "segment " + std::to_string(scene_ordinal) + " has no ---BEAT--- delimiters");
  SegmentedDocument out;
  out.title = doc.title + " / scene " + std::to_string(scene_ordinal) + " beats";
  out.source_kind = doc.source_kind;
  for (const auto& body : it->beats) {
    Segment beat;
    beat.kind = SegmentKind::beat;
    beat.ordinal = static_cast<int>(out.segments.size()) + 1;
    beat.body = body;
    beat.characters = it->characters;
    out.segments.push_back(std::move(beat));
  }
  return out;
}

void validate(const SegmentedDocument& doc) {
  if (doc.segments.empty()) throw Error(ErrorCode::InvalidArgument, "document has no segments");
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& s = doc.segments[i];
    if (s.ordinal != static_cast<int>(i) + 1)
      throw Error(ErrorCode::InvalidArgument, "segment ordinals are not consecutive");
    if (s.kind != doc.segments.front().kind)
      throw Error(ErrorCode::InvalidArgument, "segments of mixed kind");
    if (is_blank(s.body))
      throw Error(ErrorCode::InvalidArgument, "segment " + std::to_string(s.ordinal) + " is empty");
  }
}

namespace {

using Triplet = Eigen::Triplet<std::int64_t>;

TermSegmentMatrix assemble(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& triplets,
                           std::vector<int> ordinals) {
  TermSegmentMatrix m;
  m.counts.resize(rows, cols);
  m.counts.setFromTriplets(triplets.begin(), triplets.end());
  m.counts.makeCompressed();
  m.row_totals = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(rows);
  m.col_totals = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(cols);
  for (Eigen::Index i = 0; i < m.counts.outerSize(); ++i) {
    for (TermSegmentMatrix::Counts::InnerIterator it(m.counts, i); it; ++it) {
      m.row_totals[it.row()] += it.value();
      m.col_totals[it.col()] += it.value();
    }
  }
  m.grand_total = m.row_totals.sum();
  m.row_ordinals = std::move(ordinals);
  return m;
}

void require_nondegenerate(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 2 || cols < 2) {
    std::ostringstream msg;
    msg << rows << " rows x " << cols << " columns survive; need at least 2 x 2";
    throw Error(ErrorCode::DegenerateMatrix, msg.str());
  }
}

}  // namespace

MatrixBuild build_matrix(const SegmentedDocument& doc) {
  if (doc.segments.size() < 2)
    throw Error(ErrorCode::DegenerateMatrix, "need at least 2 segments");

  MatrixBuild out;
  std::vector<std::map<std::string, std::int64_t>> rows;
  std::vector<int> ordinals;
  std::set<std::string> terms;
  for (const auto& seg : doc.segments) {
    std::map<std::string, std::int64_t> row;
    for (auto& tok : tokenize(seg.body)) ++row[tok];
    if (row.empty()) {
      out.warnings.push_back("segment " + std::to_string(seg.ordinal) + " has no tokens; dropped");
      continue;
    }
    for (const auto& [term, n] : row) terms.insert(term);
    rows.push_back(std::move(row));
    ordinals.push_back(seg.ordinal);
  }
  require_nondegenerate(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(terms.size()));

  out.vocabulary.terms.assign(terms.begin(), terms.end());
  for (std::size_t j = 0; j < out.vocabulary.terms.size(); ++j)
    out.vocabulary.index.emplace(out.vocabulary.terms[j], static_cast<int>(j));

  std::vector<Triplet> triplets;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [term, n] : rows[i])
      triplets.emplace_back(static_cast<int>(i), out.vocabulary.index.at(term), n);

  out.matrix = assemble(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(terms.size()), triplets, std::move(ordinals));
  return out;
}

MatrixBuild restrict_rows(const TermSegmentMatrix& matrix, const Vocabulary& vocabulary,
                          std::span<const int> ordinals) {
  std::vector<int> wanted(ordinals.begin(), ordinals.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<Eigen::Index> row_index;
  for (int ord : wanted) {
    auto it = std::find(matrix.row_ordinals.begin(), matrix.row_ordinals.end(), ord);
    if (it == matrix.row_ordinals.end())
      throw Error(ErrorCode::InvalidArgument, "no row for segment " + std::to_string(ord));
    row_index.push_back(it - matrix.row_ordinals.begin());
  }

  std::vector<int> new_col(static_cast<std::size_t>(matrix.n_terms()), -1);
  for (auto i : row_index)
    for (TermSegmentMatrix::Counts::InnerIterator it(matrix.counts, i); it; ++it)
      new_col[static_cast<std::size_t>(it.col())] = 0;

  MatrixBuild out;
  for (std::size_t j = 0; j < new_col.size(); ++j) {
    if (new_col[j] < 0) continue;
    new_col[j] = static_cast<int>(out.vocabulary.terms.size());
    out.vocabulary.terms.push_back(vocabulary.terms[j]);
    out.vocabulary.index.emplace(vocabulary.terms[j], new_col[j]);
  }
  require_nondegenerate(static_cast<Eigen::Index>(row_index.size()),
                        static_cast<Eigen::Index>(out.vocabulary.size()));

  std::vector<Triplet> triplets;
  for (std::size_t r = 0; r < row_index.size(); ++r)
    for (TermSegmentMatrix::Counts::InnerIterator it(matrix.counts, row_index[r]); it; ++it)
      triplets.emplace_back(static_cast<int>(r), new_col[static_cast<std::size_t>(it.col())], it.value());

  out.matrix = assemble(static_cast<Eigen::Index>(row_index.size()),
                        static_cast<Eigen::Index>(out.vocabulary.size()), triplets, std::move(wanted));
  return out;
}

MatrixBuild matrix_from_counts(const Eigen::MatrixXd& counts) {
  MatrixBuild out;
  std::vector<Eigen::Index> keep_rows;
  std::vector<int> ordinals;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      const double v = counts(i, j);
      if (v < 0 || v != std::floor(v))
        throw Error(ErrorCode::InvalidArgument, "counts must be nonnegative integers");
    }
    if (counts.row(i).sum() > 0) {
      keep_rows.push_back(i);
      ordinals.push_back(static_cast<int>(i) + 1);
    } else {
      out.warnings.push_back("row " + std::to_string(i + 1) + " is empty; dropped");
    }
  }
  std::vector<int> new_col(static_cast<std::size_t>(counts.cols()), -1);
  for (Eigen::Index j = 0; j < counts.cols(); ++j) {
    if (counts.col(j).sum() <= 0) continue;
    new_col[static_cast<std::size_t>(j)] = static_cast<int>(out.vocabulary.size());
    std::string term = "t" + std::to_string(j + 1);
    out.vocabulary.index.emplace(term, new_col[static_cast<std::size_t>(j)]);
    out.vocabulary.terms.push_back(std::move(term));
  }
  require_nondegenerate(static_cast<Eigen::Index>(keep_rows.size()),
                        static_cast<Eigen::Index>(out.vocabulary.size()));

  std::vector<Triplet> triplets;
  for (std::size_t r = 0; r < keep_rows.size(); ++r)
    for (Eigen::Index j = 0; j < counts.cols(); ++j)
      if (counts(keep_rows[r], j) > 0)
        triplets.emplace_back(static_cast<int>(r), new_col[static_cast<std::size_t>(j)],
                              static_cast<std::int64_t>(counts(keep_rows[r], j)));
  out.matrix = assemble(static_cast<Eigen::Index>(keep_rows.size()),
                        static_cast<Eigen::Index>(out.vocabulary.size()), triplets, std::move(ordinals));
  return out;
}

void validate(const TermSegmentMatrix& m) {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> rows = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(m.n_segments());
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> cols = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(m.n_terms());
  for (Eigen::Index i = 0; i < m.counts.outerSize(); ++i) {
    for (TermSegmentMatrix::Counts::InnerIterator it(m.counts, i); it; ++it) {
      if (it.value() < 1) throw Error(ErrorCode::Internal, "stored count below 1");
      rows[it.row()] += it.value();
      cols[it.col()] += it.value();
    }
  }
  if (rows != m.row_totals || cols != m.col_totals || rows.sum() != m.grand_total ||
      cols.sum() != m.grand_total)
    throw Error(ErrorCode::Internal, "marginal totals disagree with stored counts");
  if ((rows.array() == 0).any() || (cols.array() == 0).any())
    throw Error(ErrorCode::Internal, "all-zero row or column");
  if (static_cast<Eigen::Index>(m.row_ordinals.size()) != m.n_segments())
    throw Error(ErrorCode::Internal, "row ordinal map has the wrong length");
}

}  // namespace narrative
