#include "narrative/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <vector>

#include "narrative/error.hpp"

namespace narrative {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 640.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(double width, double height) : width_(width), height_(height) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
         << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
         << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const char* stroke, double w = 1.0) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
         << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(w) << "\"/>\n";
  }
  void circle(double x, double y, double r, const char* fill) {
    out_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r) << "\" fill=\"" << fill
         << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, double size = 12.0, const char* anchor = "start",
            const char* fill = "black") {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\" font-size=\""
         << num(size) << "\" text-anchor=\"" << anchor << "\" fill=\"" << fill << "\">" << escape(s)
         << "</text>\n";
  }
  void comment(const std::string& s) { out_ << "<!-- " << escape(s) << " -->\n"; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double width_;
  double height_;
  std::ostringstream out_;
};

struct Range {
  double lo = -1.0;
  double hi = 1.0;

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    const double span = hi - lo;
    lo -= 0.05 * span;
    hi += 0.05 * span;
  }
};

std::string axis_title(const FactorModeld& model, int axis) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "Axis %d (%.1f%%)", axis + 1, model.percent_inertia[axis]);
  return buf;
}

int ordinal_of(const FactorModeld& model, Eigen::Index i) {
  return model.row_ids.empty() ? static_cast<int>(i) + 1 : model.row_ids[static_cast<std::size_t>(i)];
}

}  // namespace

std::string plot_factor_plane(const FactorModeld& model, std::span<const int> highlight,
                              const PlaneOptions& options) {
  if (model.k < 2) throw Error(ErrorCode::RankTooLow, "factor plane needs two axes");
  const std::set<int> marked(highlight.begin(), highlight.end());

  Range xr{0.0, 0.0}, yr{0.0, 0.0};
  for (const auto* coords : {&model.row_coords, &model.col_coords})
    for (Eigen::Index i = 0; i < coords->rows(); ++i) {
      xr.include((*coords)(i, 0));
      yr.include((*coords)(i, 1));
    }
  xr.pad();
  yr.pad();

  Canvas svg(kWidth, kHeight);
  auto px = [&](double x) { return kMargin + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - 2 * kMargin); };

  if (!options.title.empty()) svg.text(kWidth / 2, 24, options.title, 14, "middle");
  svg.line(px(xr.lo), py(0), px(xr.hi), py(0), "#888888");
  svg.line(px(0), py(yr.lo), px(0), py(yr.hi), "#888888");
  svg.text(kWidth - kMargin, py(0) - 6, axis_title(model, 0), 12, "end", "#444444");
  svg.text(px(0) + 6, kMargin - 8, axis_title(model, 1), 12, "start", "#444444");

  svg.comment("terms");
  for (Eigen::Index j = 0; j < model.n_cols(); ++j) {
    const double x = model.col_coords(j, 0), y = model.col_coords(j, 1);
    svg.circle(px(x), py(y), 1.5, "#9aa5b1");
    const double quality = model.col_cos2(j, 0) + model.col_cos2(j, 1);
    if (options.term_label_cos2 >= 0.0 && quality >= options.term_label_cos2 && !model.col_labels.empty())
      svg.text(px(x) + 3, py(y) - 3, model.col_labels[static_cast<std::size_t>(j)], 8, "start", "#6b7785");
  }
  svg.comment("segments");
  for (Eigen::Index i = 0; i < model.n_rows(); ++i) {
    const int id = ordinal_of(model, i);
    const char* color = marked.count(id) ? "#c0392b" : "#1f4e79";
    const double x = model.row_coords(i, 0), y = model.row_coords(i, 1);
    svg.circle(px(x), py(y), 4.0, color);
    svg.text(px(x) + 6, py(y) - 6, std::to_string(id), 12, "start", color);
  }
  return svg.finish();
}

std::string plot_factor_strip(const FactorModeld& model, std::span<const int> highlight, const PlaneOptions& options) {
  if (model.k < 1) throw Error(ErrorCode::RankTooLow, "strip plot needs one axis");
  const std::set<int> marked(highlight.begin(), highlight.end());
  Range xr{0.0, 0.0};
  for (const auto* coords : {&model.row_coords, &model.col_coords})
    for (Eigen::Index i = 0; i < coords->rows(); ++i) xr.include((*coords)(i, 0));
  xr.pad();

  const double height = 200.0;
  Canvas svg(kWidth, height);
  auto px = [&](double x) { return kMargin + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - 2 * kMargin); };
  const double mid = height / 2;
  if (!options.title.empty()) svg.text(kWidth / 2, 24, options.title, 14, "middle");
  svg.line(px(xr.lo), mid, px(xr.hi), mid, "#888888");
  svg.text(kWidth - kMargin, mid + 24, axis_title(model, 0), 12, "end", "#444444");
  for (Eigen::Index j = 0; j < model.n_cols(); ++j) svg.circle(px(model.col_coords(j, 0)), mid + 8, 1.5, "#9aa5b1");
  for (Eigen::Index i = 0; i < model.n_rows(); ++i) {
    const int id = ordinal_of(model, i);
    const char* color = marked.count(id) ? "#c0392b" : "#1f4e79";
    const double x = px(model.row_coords(i, 0));
    svg.circle(x, mid, 4.0, color);
    svg.text(x, mid - 10, std::to_string(id), 12, "middle", color);
  }
  return svg.finish();
}

std::string plot_dendrogram(const Dendrogram& d, const std::string& title) {
  const int n = d.n_leaves;
  const double top = d.merges.empty() ? 1.0 : std::max(d.merges.back().height, 1e-12);
  const double width = std::max(kWidth, 2 * kMargin + 14.0 * n);
  Canvas svg(width, kHeight);
  auto px = [&](double pos) { return kMargin + (pos + 0.5) / n * (width - 2 * kMargin); };
  auto py = [&](double h) { return kHeight - kMargin - h / top * (kHeight - 2 * kMargin); };

  if (!title.empty()) svg.text(width / 2, 24, title, 14, "middle");
  svg.line(kMargin - 10, py(0), kMargin - 10, py(top), "#444444");
  svg.text(kMargin - 14, py(0) + 4, num(0.0), 10, "end");
  svg.text(kMargin - 14, py(top) + 4, num(top), 10, "end");

  // x position and height of the node currently spanning each leaf range
  std::vector<double> node_x(static_cast<std::size_t>(n)), node_h(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    node_x[static_cast<std::size_t>(i)] = px(i);
    svg.text(px(i), kHeight - kMargin + 16, std::to_string(d.leaf_ids[static_cast<std::size_t>(i)]), 9, "middle");
  }
  for (const auto& m : d.merges) {
    const auto l = static_cast<std::size_t>(m.left.first);
    const auto r = static_cast<std::size_t>(m.right.first);
    const double xl = node_x[l], xr = node_x[r];
    svg.line(xl, py(node_h[l]), xl, py(m.height), "#1f4e79");
    svg.line(xr, py(node_h[r]), xr, py(m.height), "#1f4e79");
    svg.line(xl, py(m.height), xr, py(m.height), "#1f4e79");
    node_x[l] = 0.5 * (xl + xr);
    node_h[l] = m.height;
  }
  return svg.finish();
}

}  // namespace narrative
