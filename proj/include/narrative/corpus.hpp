#pragma once

// Segmented texts and the term-by-segment frequency table built from them.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace narrative {

enum class SegmentKind { scene, paragraph, beat };
enum class LocationType { interior, exterior, unknown };
enum class TimeOfDay { day, night, unknown };
enum class SourceKind { screenplay, prose };

const char* to_string(SegmentKind kind) noexcept;
const char* to_string(LocationType type) noexcept;
const char* to_string(TimeOfDay time) noexcept;
const char* to_string(SourceKind kind) noexcept;

struct Segment {
  int ordinal = 0;  // 1-based position in the document
  SegmentKind kind = SegmentKind::paragraph;
  std::optional<std::string> heading;
  std::optional<LocationType> location_type;
  std::optional<std::string> location_name;
  std::optional<TimeOfDay> time_of_day;
  std::set<std::string> characters;
  std::string body;  // dialog and action only; no heading, no speaker cues
  /// Bodies of the sub-scene beats when the scene contains "---BEAT---" lines.
  std::vector<std::string> beats;
};

struct SegmentedDocument {
  std::string title;
  std::vector<Segment> segments;
  SourceKind source_kind = SourceKind::prose;
};

/// Lowercase, blank every byte outside [a-z0-9], split on blanks, drop
/// tokens shorter than two characters. No stop list, no stemming.
std::vector<std::string> tokenize(std::string_view text);

/// Number of lines that parse as scene headings.
std::size_t count_scene_headings(std::string_view raw);

/// Throws Error{NoScenesFound} if no scene heading is present.
SegmentedDocument parse_screenplay(std::string_view raw);

/// Paragraphs are maximal runs of non-blank lines. Throws Error{EmptyDocument}.
SegmentedDocument parse_prose(std::string_view raw);

/// Screenplay iff at least two scene headings are present.
SourceKind detect_source_kind(std::string_view raw);

/// Beats of one scene as their own document (kind = beat). Throws
/// Error{InvalidArgument} if the ordinal is unknown or the scene has no beats.
SegmentedDocument beats_of(const SegmentedDocument& doc, int scene_ordinal);

/// Throws Error{InvalidArgument} when an invariant of the document fails.
void validate(const SegmentedDocument& doc);

struct Vocabulary {
  std::vector<std::string> terms;
  std::unordered_map<std::string, int> index;

  std::size_t size() const { return terms.size(); }
};

/// Sparse nonnegative counts, segments x terms. Rows carry the ordinal of the
/// segment they came from so that dropped rows never renumber the rest.
struct TermSegmentMatrix {
  using Counts = Eigen::SparseMatrix<std::int64_t, Eigen::RowMajor>;

  Counts counts;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> row_totals;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> col_totals;
  std::int64_t grand_total = 0;
  std::vector<int> row_ordinals;

  Eigen::Index n_segments() const { return counts.rows(); }
  Eigen::Index n_terms() const { return counts.cols(); }

  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(counts.cast<Scalar>());
  }
};

struct MatrixBuild {
  TermSegmentMatrix matrix;
  Vocabulary vocabulary;
  std::vector<std::string> warnings;
};

/// Throws Error{DegenerateMatrix} when fewer than two rows or columns survive.
MatrixBuild build_matrix(const SegmentedDocument& doc);

/// Rows for the given segment ordinals, with columns that end up empty removed.
MatrixBuild restrict_rows(const TermSegmentMatrix& matrix, const Vocabulary& vocabulary,
                          std::span<const int> ordinals);

/// Builds the table from dense counts (tests, synthetic corpora). Terms are
/// named t1..tm.
MatrixBuild matrix_from_counts(const Eigen::MatrixXd& counts);

/// Throws Error{Internal} when totals or positivity invariants fail.
void validate(const TermSegmentMatrix& matrix);

}  // namespace narrative
