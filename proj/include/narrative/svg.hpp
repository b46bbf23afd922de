#pragma once

// Static SVG renderings. Output is a pure function of the inputs: fixed
// canvas, fixed number formatting, no timestamps.

#include <span>
#include <string>

#include "narrative/ca.hpp"
#include "narrative/chrono.hpp"

namespace narrative {

struct PlaneOptions {
  /// Terms with cos2 over axes 1-2 at or above this get a text label; < 0 disables.
  double term_label_cos2 = -1.0;
  std::string title;
};

/// Axes 1-2 scatter: segments as labeled points, terms as dots, axis titles
/// with percent inertia. Highlighted segments are drawn in a second color.
/// Throws Error{RankTooLow} when the model has fewer than two axes.
std::string plot_factor_plane(const FactorModeld& model, std::span<const int> highlight = {},
                              const PlaneOptions& options = {});

/// One-axis strip plot used when only a single axis exists.
std::string plot_factor_strip(const FactorModeld& model, std::span<const int> highlight = {},
                              const PlaneOptions& options = {});

/// Leaves along the horizontal axis in sequence order, merge heights upward.
std::string plot_dendrogram(const Dendrogram& dendrogram, const std::string& title = {});

}  // namespace narrative
