#include "narrative/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "narrative/error.hpp"

namespace narrative {

const char* to_string(Attribute attribute) noexcept {
  switch (attribute) {
    case Attribute::A2_movement_variability: return "A2";
    case Attribute::A3_orientation_similarity: return "A3";
    case Attribute::A4_orientation_variability: return "A4";
    case Attribute::A6_tempo_balance: return "A6";
  }
  return "?";
}

std::optional<Attribute> parse_attribute(std::string_view name) {
  if (name == "A2" || name == "A2_movement_variability") return Attribute::A2_movement_variability;
  if (name == "A3" || name == "A3_orientation_similarity") return Attribute::A3_orientation_similarity;
  if (name == "A4" || name == "A4_orientation_variability") return Attribute::A4_orientation_variability;
  if (name == "A6" || name == "A6_tempo_balance") return Attribute::A6_tempo_balance;
  return std::nullopt;
}

namespace {

// Sample standard deviation; a single value has none, reported as 0.
double sample_sd(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace

AttributeSeries attribute_series(const Eigen::MatrixXd& coords, const Eigen::VectorXd& tempo) {
  const Eigen::Index n = coords.rows();
  if (n < 3) throw Error(ErrorCode::TooShort, "attribute series need at least 3 segments");
  if (tempo.size() != n) throw Error(ErrorCode::InvalidArgument, "tempo length differs from segment count");

  AttributeSeries s;
  const Eigen::MatrixXd steps = coords.bottomRows(n - 1) - coords.topRows(n - 1);
  s.movement = steps.rowwise().norm();
  s.orientation.resize(n - 2);
  for (Eigen::Index t = 0; t + 2 < n; ++t) {
    const double denom = s.movement[t] * s.movement[t + 1];
    const double cosine = denom > 0.0 ? steps.row(t).dot(steps.row(t + 1)) / denom : 0.0;
    s.orientation[t] = std::clamp(cosine, -1.0, 1.0);
  }
  s.tempo = tempo;
  s.tempo_delta = tempo.tail(n - 1) - tempo.head(n - 1);
  return s;
}

AttributeSeries attribute_series(const FactorModeld& model, const SegmentedDocument& doc) {
  const Eigen::Index n = model.n_rows();
  Eigen::VectorXd tempo(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int ordinal = model.row_ids.empty() ? static_cast<int>(i) + 1 : model.row_ids[static_cast<std::size_t>(i)];
    auto it = std::find_if(doc.segments.begin(), doc.segments.end(),
                           [&](const Segment& s) { return s.ordinal == ordinal; });
    if (it == doc.segments.end())
      throw Error(ErrorCode::InvalidArgument, "model row " + std::to_string(ordinal) + " has no segment");
    tempo[i] = static_cast<double>(tokenize(it->body).size());
  }
  return attribute_series(model.row_coords, tempo);
}

double scalar_attribute(const AttributeSeries& s, Attribute which) {
  switch (which) {
    case Attribute::A2_movement_variability: return sample_sd(s.movement);
    case Attribute::A3_orientation_similarity: return (1.0 - s.orientation.array()).mean();
    case Attribute::A4_orientation_variability: return sample_sd(s.orientation);
    case Attribute::A6_tempo_balance: return std::abs(s.tempo_delta.mean());
  }
  throw Error(ErrorCode::InvalidArgument, "unknown attribute");
}

AttributeRegistry::AttributeRegistry() {
  for (auto a : {Attribute::A2_movement_variability, Attribute::A3_orientation_similarity,
                 Attribute::A4_orientation_variability, Attribute::A6_tempo_balance})
    functions_.emplace(to_string(a), [a](const AttributeSeries& s) { return scalar_attribute(s, a); });
}

void AttributeRegistry::add(std::string name, Function fn) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "empty attribute function");
  functions_.insert_or_assign(std::move(name), std::move(fn));
}

const AttributeRegistry::Function& AttributeRegistry::at(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw Error(ErrorCode::InvalidArgument, "unknown attribute " + name);
  return it->second;
}

std::vector<std::string> AttributeRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, fn] : functions_) out.push_back(name);
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

void shuffle(std::vector<int>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

namespace {

double evaluate(const Eigen::MatrixXd& coords, const Eigen::VectorXd& tempo, const std::vector<int>& order,
                const AttributeRegistry::Function& attribute) {
  const auto n = static_cast<Eigen::Index>(order.size());
  Eigen::MatrixXd c(n, coords.cols());
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c.row(i) = coords.row(order[static_cast<std::size_t>(i)]);
    t[i] = tempo[order[static_cast<std::size_t>(i)]];
  }
  return attribute(attribute_series(c, t));
}

}  // namespace

PermutationReport permutation_test(const Eigen::MatrixXd& coords, const Eigen::VectorXd& tempo,
                                   const std::string& attribute_name,
                                   const AttributeRegistry::Function& attribute,
                                   const PermutationOptions& options) {
  const auto n = static_cast<int>(coords.rows());
  if (n < 3) throw Error(ErrorCode::TooShort, "permutation test needs at least 3 segments");
  if (!options.exhaustive && options.R < 1) throw Error(ErrorCode::InvalidArgument, "R must be at least 1");
  if (options.exhaustive && n > 10)
    throw Error(ErrorCode::InvalidArgument, "exhaustive enumeration is limited to n <= 10");

  PermutationReport report;
  report.attribute_name = attribute_name;
  report.seed = options.seed;
  report.exhaustive = options.exhaustive;
  report.rng = kRngAlgorithm;

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  report.observed = evaluate(coords, tempo, order, attribute);

  if (options.exhaustive) {
    do {
      report.replicates.push_back(evaluate(coords, tempo, order, attribute));
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    std::mt19937_64 rng(options.seed);
    report.replicates.reserve(options.R);
    for (std::size_t r = 0; r < options.R; ++r) {
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, rng);
      report.replicates.push_back(evaluate(coords, tempo, order, attribute));
    }
  }
  report.R = report.replicates.size();

  const double tol = options.tie_tolerance * std::max(1.0, std::abs(report.observed));
  std::size_t smaller = 0;
  std::size_t as_extreme = 0;
  for (double v : report.replicates) {
    if (v < report.observed - tol) ++smaller;
    if (v <= report.observed + tol) ++as_extreme;
  }
  const auto R = static_cast<double>(report.R);
  report.fraction_smaller = static_cast<double>(smaller) / R;
  report.p_value = options.exhaustive ? static_cast<double>(as_extreme) / R
                                      : (1.0 + static_cast<double>(as_extreme)) / (R + 1.0);
  return report;
}

PermutationReport permutation_test(const TermSegmentMatrix& matrix, const SegmentedDocument& doc,
                                   Attribute which, const PermutationOptions& options) {
  if (matrix.n_segments() < 3 || doc.segments.size() < 3)
    throw Error(ErrorCode::TooShort, "permutation test needs at least 3 segments");
  for (int ordinal : matrix.row_ordinals)
    if (ordinal < 1 || ordinal > static_cast<int>(doc.segments.size()))
      throw Error(ErrorCode::InvalidArgument, "matrix rows do not align with the document");
  const auto model = correspondence_analysis(matrix.dense<double>());
  const Eigen::VectorXd tempo = matrix.row_totals.cast<double>();
  return permutation_test(model.row_coords, tempo, to_string(which),
                          [which](const AttributeSeries& s) { return scalar_attribute(s, which); }, options);
}

}  // namespace narrative
