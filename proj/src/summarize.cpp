#include "narrative/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "narrative/error.hpp"

namespace narrative {

std::vector<int> SalienceReport::ranked() const {
  std::vector<int> out(entries.size());
  for (const auto& e : entries) out[static_cast<std::size_t>(e.rank - 1)] = e.ordinal;
  return out;
}

SalienceReport salience(const FactorModeld& model, int K) {
  if (K < 1 || K > model.k)
    throw Error(ErrorCode::InvalidArgument, "K must lie in [1, " + std::to_string(model.k) + "]");
  SalienceReport report;
  report.K = K;
  const Eigen::VectorXd contrib = model.row_contrib.leftCols(K).rowwise().sum();
  const Eigen::VectorXd cos2 = model.row_cos2.leftCols(K).rowwise().sum();
  for (Eigen::Index i = 0; i < model.n_rows(); ++i) {
    const int ordinal = model.row_ids.empty() ? static_cast<int>(i) + 1 : model.row_ids[static_cast<std::size_t>(i)];
    report.entries.push_back({ordinal, contrib[i], cos2[i], 0});
  }
  std::vector<std::size_t> order(report.entries.size());
  std::iota(order.begin(), order.end(), 0);
  // compare on a 1e-12 grid so that rounding noise cannot break a tie
  auto key = [](double v) { return std::llround(v * 1e12); };
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = report.entries[x];
    const auto& b = report.entries[y];
    if (key(a.contrib_sum) != key(b.contrib_sum)) return key(a.contrib_sum) > key(b.contrib_sum);
    if (key(a.cos2_sum) != key(b.cos2_sum)) return key(a.cos2_sum) > key(b.cos2_sum);
    return a.ordinal < b.ordinal;
  });
  for (std::size_t r = 0; r < order.size(); ++r) report.entries[order[r]].rank = static_cast<int>(r) + 1;
  return report;
}

Backbone extract_backbone(const SegmentedDocument& doc, const MatrixBuild& build, const FactorModeld& model,
                          const BackboneSelection& selection, int K) {
  const auto report = salience(model, K);
  const auto ranked = report.ranked();
  Backbone out;
  if (const auto* top = std::get_if<TopK>(&selection)) {
    if (top->k < 1 || top->k > static_cast<int>(ranked.size()))
      throw Error(ErrorCode::InvalidArgument, "top-k must lie in [1, " + std::to_string(ranked.size()) + "]");
    out.selected.assign(ranked.begin(), ranked.begin() + top->k);
  } else {
    const double threshold = std::get<ContributionThreshold>(selection).min_contrib_sum;
    for (const auto& e : report.entries)
      if (e.contrib_sum >= threshold) out.selected.push_back(e.ordinal);
    if (out.selected.empty()) throw Error(ErrorCode::InvalidArgument, "no segment reaches the threshold");
  }
  std::sort(out.selected.begin(), out.selected.end());
  for (int ordinal : out.selected) {
    const bool known = std::any_of(doc.segments.begin(), doc.segments.end(),
                                   [&](const Segment& s) { return s.ordinal == ordinal; });
    if (!known) throw Error(ErrorCode::InvalidArgument, "selected ordinal not in document");
  }
  out.restricted = restrict_rows(build.matrix, build.vocabulary, out.selected);
  out.restricted_model = correspondence_analysis<double>(out.restricted.matrix, out.restricted.vocabulary);
  return out;
}

namespace {

// Axis orders of `sigma` that only permute within runs of tied values.
std::vector<std::vector<int>> tie_permutations(const Eigen::VectorXd& sigma, int K) {
  std::vector<std::vector<int>> groups;
  for (int a = 0; a < K; ++a) {
    if (a > 0 && std::abs(sigma[a] - sigma[a - 1]) < 1e-9)
      groups.back().push_back(a);
    else
      groups.push_back({a});
  }
  std::vector<std::vector<int>> out{{}};
  for (auto group : groups) {
    std::vector<std::vector<int>> next;
    std::sort(group.begin(), group.end());
    do {
      for (const auto& prefix : out) {
        auto p = prefix;
        p.insert(p.end(), group.begin(), group.end());
        next.push_back(std::move(p));
      }
    } while (std::next_permutation(group.begin(), group.end()));
    out = std::move(next);
  }
  return out;
}

}  // namespace

double compare_configurations(const FactorModeld& a, const FactorModeld& b, std::span<const int> common, int K) {
  if (common.empty()) throw Error(ErrorCode::NoCommonSegments, "no common segments");
  if (K < 1 || K > a.k || K > b.k) throw Error(ErrorCode::InvalidArgument, "K exceeds a model's rank");
  if (K > 10) throw Error(ErrorCode::InvalidArgument, "reflection search is limited to K <= 10");

  const auto n = static_cast<Eigen::Index>(common.size());
  Eigen::MatrixXd X(n, K), Y(n, K);
  Eigen::VectorXd wa(n), wb(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int ordinal = common[static_cast<std::size_t>(i)];
    const auto ia = a.row_of(ordinal);
    const auto ib = b.row_of(ordinal);
    if (ia < 0 || ib < 0)
      throw Error(ErrorCode::NoCommonSegments, "segment " + std::to_string(ordinal) + " missing from a model");
    X.row(i) = a.row_coords.row(ia).head(K);
    Y.row(i) = b.row_coords.row(ib).head(K);
    wa[i] = a.row_mass[ia];
    wb[i] = b.row_mass[ib];
  }
  const Eigen::VectorXd w = 0.5 * (wa / wa.sum() + wb / wb.sum());
  X.rowwise() -= (w.transpose() * X);
  Y.rowwise() -= (w.transpose() * Y);

  const double nx = std::sqrt((w.asDiagonal() * X.array().square().matrix()).sum());
  const double ny = std::sqrt((w.asDiagonal() * Y.array().square().matrix()).sum());
  if (nx == 0.0 || ny == 0.0) return nx == ny ? 1.0 : 0.0;

  double best = -1.0;
  for (const auto& perm : tie_permutations(b.sigma, K)) {
    // per-axis weighted cross products; the sign mask picks a reflection
    Eigen::VectorXd cross(K);
    for (int ax = 0; ax < K; ++ax) cross[ax] = (w.array() * X.col(ax).array() * Y.col(perm[static_cast<std::size_t>(ax)]).array()).sum();
    for (unsigned mask = 0; mask < (1u << K); ++mask) {
      double total = 0.0;
      for (int ax = 0; ax < K; ++ax) total += ((mask >> ax) & 1u) ? -cross[ax] : cross[ax];
      best = std::max(best, total / (nx * ny));
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

std::string backbone_text(const SegmentedDocument& doc, const Backbone& backbone) {
  std::string out;
  for (int ordinal : backbone.selected) {
    auto it = std::find_if(doc.segments.begin(), doc.segments.end(),
                           [&](const Segment& s) { return s.ordinal == ordinal; });
    if (it == doc.segments.end()) continue;
    if (!out.empty()) out += "\n\n";
    out += "[" + std::to_string(ordinal) + "]\n" + it->body;
  }
  out += "\n";
  return out;
}

}  // namespace narrative
