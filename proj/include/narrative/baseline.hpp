#pragma once

// Monte Carlo baselining: narrative attributes of the true segment order
// against the same attributes under random reorderings of the segments.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "narrative/ca.hpp"
#include "narrative/corpus.hpp"

namespace narrative {

struct AttributeSeries {
  Eigen::VectorXd movement;     // |F[t+1] - F[t]|, length n - 1
  Eigen::VectorXd orientation;  // turning cosine of successive steps, length n - 2
  Eigen::VectorXd tempo;        // tokens per segment, length n
  Eigen::VectorXd tempo_delta;  // tempo[t+1] - tempo[t], length n - 1
};

enum class Attribute {
  A2_movement_variability,
  A3_orientation_similarity,
  A4_orientation_variability,
  A6_tempo_balance,
};

const char* to_string(Attribute attribute) noexcept;
/// Accepts "A2", "A3", "A4", "A6" or the full enumerator name.
std::optional<Attribute> parse_attribute(std::string_view name);

/// Rows of `coords` are segments in sequence order. A zero-length step has no
/// direction; its turning cosine is taken as 0. Throws Error{TooShort} if n < 3.
AttributeSeries attribute_series(const Eigen::MatrixXd& coords, const Eigen::VectorXd& tempo);

/// Model rows are matched to document segments by ordinal; tempo is the
/// token count of each segment's body.
AttributeSeries attribute_series(const FactorModeld& model, const SegmentedDocument& doc);

double scalar_attribute(const AttributeSeries& series, Attribute which);

/// Named attribute functions; the four built-ins are pre-registered under
/// "A2", "A3", "A4" and "A6".
class AttributeRegistry {
 public:
  using Function = std::function<double(const AttributeSeries&)>;

  AttributeRegistry();

  void add(std::string name, Function fn);
  const Function& at(const std::string& name) const;
  bool contains(const std::string& name) const { return functions_.count(name) > 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Function> functions_;
};

struct PermutationReport {
  std::string attribute_name;
  double observed = 0.0;
  std::vector<double> replicates;
  double fraction_smaller = 0.0;  // replicates strictly below observed
  double p_value = 1.0;           // lower tail
  std::size_t R = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::string rng;  // generator and shuffle algorithm identifier
};

/// Identifier recorded in every report.
inline constexpr const char* kRngAlgorithm = "mt19937_64/fisher-yates-rejection";

/// Uniform integer in [0, bound) from raw 64-bit draws by rejection; the
/// result is fixed by the generator's output sequence, unlike
/// std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates shuffle driven by uniform_below.
void shuffle(std::vector<int>& values, std::mt19937_64& rng);

struct PermutationOptions {
  std::size_t R = 999;
  std::uint64_t seed = 0;
  /// Enumerate all n! orders instead of sampling; n <= 10.
  bool exhaustive = false;
  /// Tolerance for treating a replicate as equal to the observed value.
  double tie_tolerance = 1e-12;
};

/// Permutation test on precomputed coordinates and tempo. Segment order is
/// the only thing randomized. Monte Carlo p-value is (1 + #{rep <= obs}) / (R + 1);
/// exhaustive mode includes the identity order and reports #{rep <= obs} / n!.
PermutationReport permutation_test(const Eigen::MatrixXd& coords, const Eigen::VectorXd& tempo,
                                   const std::string& attribute_name,
                                   const AttributeRegistry::Function& attribute,
                                   const PermutationOptions& options);

/// Full pipeline entry: correspondence analysis of `matrix`, tempo from the
/// row totals, built-in attribute `which`.
PermutationReport permutation_test(const TermSegmentMatrix& matrix, const SegmentedDocument& doc,
                                   Attribute which, const PermutationOptions& options);

}  // namespace narrative
