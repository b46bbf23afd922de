#pragma once

// Serialization of pipeline artifacts: JSON records, the sparse triplet
// matrix format, vocabulary lists and run manifests.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "narrative/baseline.hpp"
#include "narrative/ca.hpp"
#include "narrative/chrono.hpp"
#include "narrative/corpus.hpp"
#include "narrative/summarize.hpp"

namespace narrative {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.3.0";

using Json = nlohmann::ordered_json;

Json to_json(const Segment& segment);
Json to_json(const SegmentedDocument& doc);
Json to_json(const MatrixBuild& build);
Json to_json(const FactorModeld& model);
Json to_json(const Dendrogram& dendrogram);
Json to_json(const Segmentation& segmentation, const Dendrogram& dendrogram);
Json to_json(const PermutationReport& report);
Json to_json(const SalienceReport& report);
Json to_json(const Backbone& backbone);

/// Inverse of to_json(SegmentedDocument); throws Error{InvalidArgument}.
SegmentedDocument document_from_json(const Json& j);
/// Inverse of to_json(MatrixBuild).
MatrixBuild matrix_from_json(const Json& j);

/// "ROWS n COLS m NNZ k" then one "row col count" line per stored entry, 1-based.
void write_triplets(std::ostream& out, const TermSegmentMatrix& matrix);
/// Row ordinals are taken as 1..n. Throws Error{InvalidArgument} on malformed input.
TermSegmentMatrix read_triplets(std::istream& in);

void write_vocabulary(std::ostream& out, const Vocabulary& vocabulary);
Vocabulary read_vocabulary(std::istream& in);

/// attribute,observed,fraction_smaller,p_value,R,seed
std::string csv_header();
std::string csv_summary(const PermutationReport& report);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(std::string_view bytes);

}  // namespace narrative
