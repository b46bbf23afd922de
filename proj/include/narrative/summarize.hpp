#pragma once

// Backbone extraction: the segments that carry the most inertia on the
// leading axes, re-analyzed on their own.

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "narrative/ca.hpp"
#include "narrative/corpus.hpp"

namespace narrative {

struct SalienceEntry {
  int ordinal = 0;
  double contrib_sum = 0.0;  // contributions summed over axes 1..K
  double cos2_sum = 0.0;
  int rank = 0;  // 1 = most salient
};

struct SalienceReport {
  int K = 0;
  std::vector<SalienceEntry> entries;  // in model row order

  /// Ordinals by rank.
  std::vector<int> ranked() const;
};

/// Ranked by contrib_sum descending, then cos2_sum descending, then ordinal;
/// sums are compared after rounding to 1e-12.
SalienceReport salience(const FactorModeld& model, int K);

struct TopK {
  int k = 6;
};
struct ContributionThreshold {
  double min_contrib_sum = 0.0;
};
using BackboneSelection = std::variant<TopK, ContributionThreshold>;

struct Backbone {
  std::vector<int> selected;  // increasing ordinals
  MatrixBuild restricted;
  FactorModeld restricted_model;
};

/// Selects by salience over axes 1..K and re-runs the analysis on the
/// selected rows. Throws Error{DegenerateMatrix} if fewer than 2 rows remain.
Backbone extract_backbone(const SegmentedDocument& doc, const MatrixBuild& build, const FactorModeld& model,
                          const BackboneSelection& selection, int K = 2);

/// Best mass-weighted congruence of the two centred K-axis configurations on
/// the common segments, over all axis reflections and over axis orders within
/// groups of tied singular values. 1 means equal up to reflection.
double compare_configurations(const FactorModeld& a, const FactorModeld& b, std::span<const int> common, int K);

/// Plain-text summary: selected segment bodies in ordinal order.
std::string backbone_text(const SegmentedDocument& doc, const Backbone& backbone);

}  // namespace narrative
