#include "narrative/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "narrative/error.hpp"

namespace narrative {

namespace {

Json row_vector(const Eigen::MatrixXd& m, Eigen::Index i) {
  Json arr = Json::array();
  for (Eigen::Index a = 0; a < m.cols(); ++a) arr.push_back(m(i, a));
  return arr;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json block_json(const Block& b, const std::vector<int>& ids) {
  return Json{{"first", ids[static_cast<std::size_t>(b.first)]}, {"last", ids[static_cast<std::size_t>(b.last)]},
              {"first_position", b.first + 1}, {"last_position", b.last + 1}};
}

template <typename Enum>
std::optional<Enum> enum_from(const Json& j, const char* key, std::initializer_list<Enum> values) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto name = j.at(key).get<std::string>();
  for (auto v : values)
    if (name == to_string(v)) return v;
  throw Error(ErrorCode::InvalidArgument, std::string("bad value for ") + key + ": " + name);
}

}  // namespace

Json to_json(const Segment& s) {
  Json j;
  j["ordinal"] = s.ordinal;
  j["kind"] = to_string(s.kind);
  j["heading"] = s.heading ? Json(*s.heading) : Json();
  j["location_type"] = s.location_type ? Json(to_string(*s.location_type)) : Json();
  j["location_name"] = s.location_name ? Json(*s.location_name) : Json();
  j["time_of_day"] = s.time_of_day ? Json(to_string(*s.time_of_day)) : Json();
  j["characters"] = Json(std::vector<std::string>(s.characters.begin(), s.characters.end()));
  j["body"] = s.body;
  if (!s.beats.empty()) j["beats"] = s.beats;
  return j;
}

Json to_json(const SegmentedDocument& doc) {
  Json j;
  j["title"] = doc.title;
  j["source_kind"] = to_string(doc.source_kind);
  j["segments"] = Json::array();
  for (const auto& s : doc.segments) j["segments"].push_back(to_json(s));
  return j;
}

SegmentedDocument document_from_json(const Json& j) {
  try {
    SegmentedDocument doc;
    doc.title = j.value("title", "");
    doc.source_kind = *enum_from(j, "source_kind", {SourceKind::screenplay, SourceKind::prose});
    for (const auto& js : j.at("segments")) {
      Segment s;
      s.ordinal = js.at("ordinal").get<int>();
      s.kind = *enum_from(js, "kind", {SegmentKind::scene, SegmentKind::paragraph, SegmentKind::beat});
      if (js.contains("heading") && !js["heading"].is_null()) s.heading = js["heading"].get<std::string>();
      s.location_type = enum_from(js, "location_type",
                                  {LocationType::interior, LocationType::exterior, LocationType::unknown});
      if (js.contains("location_name") && !js["location_name"].is_null())
        s.location_name = js["location_name"].get<std::string>();
      s.time_of_day = enum_from(js, "time_of_day", {TimeOfDay::day, TimeOfDay::night, TimeOfDay::unknown});
      for (const auto& c : js.value("characters", Json::array())) s.characters.insert(c.get<std::string>());
      s.body = js.at("body").get<std::string>();
      if (js.contains("beats")) s.beats = js["beats"].get<std::vector<std::string>>();
      doc.segments.push_back(std::move(s));
    }
    validate(doc);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed document JSON: ") + e.what());
  }
}

Json to_json(const MatrixBuild& build) {
  const auto& m = build.matrix;
  Json j;
  j["rows"] = m.n_segments();
  j["cols"] = m.n_terms();
  j["nnz"] = m.counts.nonZeros();
  j["grand_total"] = m.grand_total;
  j["row_ordinals"] = m.row_ordinals;
  j["vocabulary"] = build.vocabulary.terms;
  Json triplets = Json::array();
  for (Eigen::Index i = 0; i < m.counts.outerSize(); ++i)
    for (TermSegmentMatrix::Counts::InnerIterator it(m.counts, i); it; ++it)
      triplets.push_back({it.row() + 1, it.col() + 1, it.value()});
  j["triplets"] = std::move(triplets);
  j["warnings"] = build.warnings;
  return j;
}

MatrixBuild matrix_from_json(const Json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    std::vector<Eigen::Triplet<std::int64_t>> triplets;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& t : j.at("triplets")) {
      const auto r = t.at(0).get<Eigen::Index>() - 1;
      const auto c = t.at(1).get<Eigen::Index>() - 1;
      if (r < 0 || r >= rows || c < 0 || c >= cols) throw Error(ErrorCode::InvalidArgument, "triplet out of range");
      dense(r, c) += t.at(2).get<double>();
    }
    MatrixBuild out = matrix_from_counts(dense);
    if (static_cast<Eigen::Index>(out.vocabulary.size()) != cols || out.matrix.n_segments() != rows)
      throw Error(ErrorCode::InvalidArgument, "matrix JSON has empty rows or columns");
    out.matrix.row_ordinals = j.at("row_ordinals").get<std::vector<int>>();
    out.vocabulary.terms = j.at("vocabulary").get<std::vector<std::string>>();
    out.vocabulary.index.clear();
    for (std::size_t k = 0; k < out.vocabulary.terms.size(); ++k)
      out.vocabulary.index.emplace(out.vocabulary.terms[k], static_cast<int>(k));
    validate(out.matrix);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed matrix JSON: ") + e.what());
  }
}

Json to_json(const FactorModeld& model) {
  Json j;
  j["k"] = model.k;
  j["rank_deficient"] = model.rank_deficient;
  j["inertia_total"] = model.inertia_total;
  j["sigma"] = vector_json(model.sigma);
  j["percent_inertia"] = vector_json(model.percent_inertia);
  j["rows"] = Json::array();
  for (Eigen::Index i = 0; i < model.n_rows(); ++i) {
    const int id = model.row_ids.empty() ? static_cast<int>(i) + 1 : model.row_ids[static_cast<std::size_t>(i)];
    j["rows"].push_back({{"id", id},
                         {"label", std::to_string(id)},
                         {"mass", model.row_mass[i]},
                         {"coords", row_vector(model.row_coords, i)},
                         {"contrib", row_vector(model.row_contrib, i)},
                         {"cos2", row_vector(model.row_cos2, i)}});
  }
  j["columns"] = Json::array();
  for (Eigen::Index c = 0; c < model.n_cols(); ++c) {
    const auto label = model.col_labels.empty() ? "t" + std::to_string(c + 1)
                                                : model.col_labels[static_cast<std::size_t>(c)];
    j["columns"].push_back({{"id", c + 1},
                            {"label", label},
                            {"mass", model.col_mass[c]},
                            {"coords", row_vector(model.col_coords, c)},
                            {"contrib", row_vector(model.col_contrib, c)},
                            {"cos2", row_vector(model.col_cos2, c)}});
  }
  return j;
}

Json to_json(const Dendrogram& d) {
  Json j;
  j["n_leaves"] = d.n_leaves;
  j["leaf_ids"] = d.leaf_ids;
  j["merges"] = Json::array();
  for (const auto& m : d.merges)
    j["merges"].push_back(
        {{"left", block_json(m.left, d.leaf_ids)}, {"right", block_json(m.right, d.leaf_ids)}, {"height", m.height}});
  return j;
}

Json to_json(const Segmentation& s, const Dendrogram& d) {
  Json j;
  j["n_blocks"] = s.blocks.size();
  Json boundaries = Json::array();
  for (int b : s.boundaries) boundaries.push_back(d.leaf_ids[static_cast<std::size_t>(b - 1)]);
  j["boundaries"] = std::move(boundaries);
  j["blocks"] = Json::array();
  for (const auto& b : s.blocks) j["blocks"].push_back(block_json(b, d.leaf_ids));
  return j;
}

Json to_json(const PermutationReport& r) {
  Json j;
  j["attribute"] = r.attribute_name;
  j["observed"] = r.observed;
  j["fraction_smaller"] = r.fraction_smaller;
  j["p_value"] = r.p_value;
  j["tail"] = "lower";
  j["R"] = r.R;
  j["exhaustive"] = r.exhaustive;
  j["seed"] = r.seed;
  j["rng"] = r.rng;
  j["replicates"] = r.replicates;
  return j;
}

Json to_json(const SalienceReport& r) {
  Json j;
  j["K"] = r.K;
  j["ranked"] = r.ranked();
  j["segments"] = Json::array();
  for (const auto& e : r.entries)
    j["segments"].push_back(
        {{"ordinal", e.ordinal}, {"contrib_sum", e.contrib_sum}, {"cos2_sum", e.cos2_sum}, {"rank", e.rank}});
  return j;
}

Json to_json(const Backbone& b) {
  Json j;
  j["selected"] = b.selected;
  j["restricted_terms"] = b.restricted.vocabulary.size();
  j["restricted_matrix"] = to_json(b.restricted);
  j["restricted_model"] = to_json(b.restricted_model);
  return j;
}

void write_triplets(std::ostream& out, const TermSegmentMatrix& m) {
  out << "ROWS " << m.n_segments() << " COLS " << m.n_terms() << " NNZ " << m.counts.nonZeros() << '\n';
  for (Eigen::Index i = 0; i < m.counts.outerSize(); ++i)
    for (TermSegmentMatrix::Counts::InnerIterator it(m.counts, i); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

TermSegmentMatrix read_triplets(std::istream& in) {
  std::string rows_kw, cols_kw, nnz_kw;
  Eigen::Index rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows_kw >> rows >> cols_kw >> cols >> nnz_kw >> nnz) || rows_kw != "ROWS" || cols_kw != "COLS" ||
      nnz_kw != "NNZ" || rows < 0 || cols < 0 || nnz < 0)
    throw Error(ErrorCode::InvalidArgument, "bad triplet header");
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index k = 0; k < nnz; ++k) {
    Eigen::Index r = 0, c = 0;
    std::int64_t v = 0;
    if (!(in >> r >> c >> v) || r < 1 || r > rows || c < 1 || c > cols || v < 1)
      throw Error(ErrorCode::InvalidArgument, "bad triplet line " + std::to_string(k + 1));
    dense(r - 1, c - 1) += static_cast<double>(v);
  }
  auto build = matrix_from_counts(dense);
  if (build.matrix.n_segments() != rows || build.matrix.n_terms() != cols)
    throw Error(ErrorCode::InvalidArgument, "triplet file has empty rows or columns");
  return std::move(build.matrix);
}

void write_vocabulary(std::ostream& out, const Vocabulary& v) {
  for (const auto& t : v.terms) out << t << '\n';
}

Vocabulary read_vocabulary(std::istream& in) {
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!v.index.emplace(line, static_cast<int>(v.terms.size())).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate term " + line);
    v.terms.push_back(line);
  }
  return v;
}

std::string csv_header() { return "attribute,observed,fraction_smaller,p_value,R,seed"; }

std::string csv_summary(const PermutationReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%zu,%llu", r.attribute_name.c_str(), r.observed,
                r.fraction_smaller, r.p_value, r.R, static_cast<unsigned long long>(r.seed));
  return buf;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace narrative
