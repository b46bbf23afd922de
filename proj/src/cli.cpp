#include "narrative/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "narrative/baseline.hpp"
#include "narrative/ca.hpp"
#include "narrative/chrono.hpp"
#include "narrative/corpus.hpp"
#include "narrative/error.hpp"
#include "narrative/report.hpp"
#include "narrative/summarize.hpp"
#include "narrative/svg.hpp"

namespace narrative::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string input_path;
  std::string kind = "auto";  // auto | screenplay | prose
  int axes = 0;               // 0 = subcommand default
  int blocks = 5;
  std::string attr = "A2";
  std::string R = "999";
  std::uint64_t seed = 1;
  int top_k = 6;
  std::optional<double> threshold;
  int scene = 0;  // > 0 analyzes the beats of that scene
  std::vector<int> highlight;
  std::string out = ".";
  std::vector<std::string> formats;

  bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

  Json to_json() const {
    Json j;
    j["subcommand"] = subcommand;
    j["kind"] = kind;
    j["axes"] = axes;
    j["blocks"] = blocks;
    j["attr"] = attr;
    j["R"] = R;
    j["seed"] = seed;
    j["top_k"] = top_k;
    j["threshold"] = threshold ? Json(*threshold) : Json();
    j["scene"] = scene;
    j["highlight"] = highlight;
    j["formats"] = formats;
    return j;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Session {
 public:
  Session(RunConfig config, std::ostream& log) : config_(std::move(config)), log_(log) {
    raw_ = read_file(config_.input_path);
    input_hash_ = content_hash(raw_);
    fs::create_directories(config_.out);
  }

  const RunConfig& config() const { return config_; }

  Json manifest() const {
    return Json{{"tool", "narrative"},
                {"version", kToolVersion},
                {"hash_algorithm", "fnv1a64"},
                {"input_hash", input_hash_},
                {"config", config_.to_json()}};
  }

  void write_json(const std::string& name, const std::string& key, Json payload) const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["manifest"] = manifest();
    j[key] = std::move(payload);
    write_text(name, j.dump(2) + "\n");
  }

  void write_svg(const std::string& name, const std::string& svg) const {
    // manifest as a comment right after the XML declaration
    const auto cut = svg.find('\n') + 1;
    write_text(name, svg.substr(0, cut) + "<!-- manifest " + manifest().dump() + " -->\n" + svg.substr(cut));
  }

  void write_text(const std::string& name, const std::string& content) const {
    const auto path = fs::path(config_.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
    f << content;
    log_ << "wrote " << path.string() << '\n';
  }

  /// Document from raw text or from a document JSON written by `parse`.
  SegmentedDocument document() const {
    SegmentedDocument doc;
    const auto first = raw_.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && raw_[first] == '{') {
      Json j;
      try {
        j = Json::parse(raw_);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("input is not valid JSON: ") + e.what());
      }
      doc = document_from_json(j.contains("document") ? j["document"] : j);
    } else {
      SourceKind kind = SourceKind::prose;
      if (config_.kind == "screenplay") kind = SourceKind::screenplay;
      else if (config_.kind == "prose") kind = SourceKind::prose;
      else kind = detect_source_kind(raw_);
      doc = kind == SourceKind::screenplay ? parse_screenplay(raw_) : parse_prose(raw_);
      doc.title = fs::path(config_.input_path).stem().string();
    }
    if (config_.scene > 0) doc = beats_of(doc, config_.scene);
    validate(doc);
    return doc;
  }

 private:
  RunConfig config_;
  std::ostream& log_;
  std::string raw_;
  std::string input_hash_;
};

Rank rank_flag(int axes) { return axes > 0 ? Rank(axes) : std::nullopt; }

MatrixBuild matrix_for(const SegmentedDocument& doc, std::ostream& err) {
  auto build = build_matrix(doc);
  for (const auto& w : build.warnings) err << "warning: " << w << '\n';
  validate(build.matrix);
  return build;
}

void write_plane(const Session& s, const FactorModeld& model, const std::string& name, std::span<const int> highlight,
                 const std::string& title) {
  PlaneOptions opts;
  opts.title = title;
  if (model.k >= 2) {
    s.write_svg(name, plot_factor_plane(model, highlight, opts));
  } else if (model.k == 1) {
    s.write_svg(name, plot_factor_strip(model, highlight, opts));
  } else {
    throw Error(ErrorCode::RankTooLow, "model has no nontrivial axis to plot");
  }
}

void cmd_parse(const Session& s, std::ostream& err) {
  const auto doc = s.document();
  s.write_json("document.json", "document", to_json(doc));
  const auto build = matrix_for(doc, err);
  std::ostringstream triplets, vocab;
  write_triplets(triplets, build.matrix);
  write_vocabulary(vocab, build.vocabulary);
  s.write_text("matrix.txt", triplets.str());
  s.write_text("vocabulary.txt", vocab.str());
  if (s.config().wants("json")) s.write_json("matrix.json", "matrix", to_json(build));
  s.write_json("manifest.json", "files", Json::array({"document.json", "matrix.txt", "vocabulary.txt"}));
}

void cmd_analyze(const Session& s, std::ostream& err) {
  const auto doc = s.document();
  const auto build = matrix_for(doc, err);
  const auto model = correspondence_analysis<double>(build.matrix, build.vocabulary, rank_flag(s.config().axes));
  check_invariants(model);
  s.write_json("factor_model.json", "factor_model", to_json(model));
  if (s.config().wants("svg")) write_plane(s, model, "factor_plane.svg", s.config().highlight, doc.title);
}

void cmd_segment(const Session& s, std::ostream& err) {
  const auto doc = s.document();
  const auto build = matrix_for(doc, err);
  const auto model = correspondence_analysis<double>(build.matrix, build.vocabulary, rank_flag(s.config().axes));
  const auto dendro = constrained_cluster(model.row_coords, model.row_ids);
  validate(dendro);
  const int blocks = s.config().blocks;
  if (blocks < 1 || blocks > dendro.n_leaves)
    throw Error(ErrorCode::InvalidArgument, "--blocks must lie in [1, " + std::to_string(dendro.n_leaves) + "]");
  const auto seg = cut(dendro, blocks);
  const auto scores = nodal_scores(dendro);

  if (s.config().wants("json")) {
    s.write_json("dendrogram.json", "dendrogram", to_json(dendro));
    Json j = to_json(seg, dendro);
    j["nodal_scores"] = Json::array();
    for (int i = 0; i < dendro.n_leaves; ++i)
      j["nodal_scores"].push_back({{"ordinal", dendro.leaf_ids[static_cast<std::size_t>(i)]}, {"score", scores[i]}});
    s.write_json("segmentation.json", "segmentation", std::move(j));
  }
  if (s.config().wants("svg")) s.write_svg("dendrogram.svg", plot_dendrogram(dendro, doc.title));
}

void cmd_baseline(const Session& s, std::ostream& err) {
  const auto doc = s.document();
  const auto build = matrix_for(doc, err);
  const auto attribute = parse_attribute(s.config().attr);
  if (!attribute) throw Error(ErrorCode::InvalidArgument, "unknown attribute " + s.config().attr);

  PermutationOptions options;
  options.seed = s.config().seed;
  if (s.config().R == "exhaustive") {
    options.exhaustive = true;
  } else {
    try {
      std::size_t pos = 0;
      const long long r = std::stoll(s.config().R, &pos);
      if (pos != s.config().R.size() || r < 1) throw std::invalid_argument("R");
      options.R = static_cast<std::size_t>(r);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "--R must be a positive integer or 'exhaustive'");
    }
  }
  const auto report = permutation_test(build.matrix, doc, *attribute, options);
  if (s.config().wants("json")) s.write_json("report.json", "report", to_json(report));
  if (s.config().wants("csv"))
    s.write_text("report.csv", "# manifest " + s.manifest().dump() + "\n" + csv_header() + "\n" +
                                   csv_summary(report) + "\n");
}

void cmd_summarize(const Session& s, std::ostream& err) {
  const auto doc = s.document();
  const auto build = matrix_for(doc, err);
  const auto model = correspondence_analysis<double>(build.matrix, build.vocabulary);
  const int K = s.config().axes > 0 ? s.config().axes : 2;
  const auto report = salience(model, K);
  BackboneSelection selection = TopK{s.config().top_k};
  if (s.config().threshold) selection = ContributionThreshold{*s.config().threshold};
  const auto backbone = extract_backbone(doc, build, model, selection, K);

  Json bj = to_json(backbone);
  const int Kc = static_cast<int>(std::min<Eigen::Index>({K, model.k, backbone.restricted_model.k}));
  bj["comparison"] = {{"K", Kc},
                      {"similarity", Kc > 0 ? compare_configurations(model, backbone.restricted_model,
                                                                      backbone.selected, Kc)
                                            : 0.0}};
  if (s.config().wants("json")) {
    s.write_json("salience.json", "salience", to_json(report));
    s.write_json("backbone.json", "backbone", std::move(bj));
  }
  s.write_text("summary.txt", backbone_text(doc, backbone));
  if (s.config().wants("svg")) {
    write_plane(s, model, "factor_plane.svg", backbone.selected, doc.title);
    write_plane(s, backbone.restricted_model, "backbone_plane.svg", backbone.selected, doc.title + " (backbone)");
  }
}

void cmd_plot(const Session& s, std::ostream& err) {
  const auto doc = s.document();
  const auto build = matrix_for(doc, err);
  const auto model = correspondence_analysis<double>(build.matrix, build.vocabulary, rank_flag(s.config().axes));
  write_plane(s, model, "factor_plane.svg", s.config().highlight, doc.title);
  s.write_svg("dendrogram.svg", plot_dendrogram(constrained_cluster(model.row_coords, model.row_ids), doc.title));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Narrative structure analysis of segmented texts", "narrative"};
  app.require_subcommand(1);
  RunConfig config;

  struct Spec {
    const char* name;
    const char* help;
    std::vector<std::string> default_formats;
  };
  const std::vector<Spec> specs = {
      {"parse", "Segment the input and write the document, matrix and vocabulary", {"json"}},
      {"analyze", "Correspondence analysis; writes factor_model.json", {"json"}},
      {"segment", "Sequence-constrained clustering; dendrogram and segmentation", {"json", "svg"}},
      {"baseline", "Permutation test of a narrative attribute", {"json", "csv"}},
      {"summarize", "Salient segments and backbone re-analysis", {"json"}},
      {"plot", "Factor plane and dendrogram SVGs", {"svg"}},
  };
  std::map<std::string, std::vector<std::string>> defaults;
  for (const auto& spec : specs) {
    defaults[spec.name] = spec.default_formats;
    auto* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("input", config.input_path, "Input text file or document JSON")->required();
    sub->add_option("--kind", config.kind, "Source kind")->check(CLI::IsMember({"auto", "screenplay", "prose"}));
    sub->add_option("--axes", config.axes, "Retained axes (analyze/segment/plot) or salience axes (summarize)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--blocks", config.blocks, "Number of episodes for segment");
    sub->add_option("--attr", config.attr, "Attribute: A2, A3, A4 or A6");
    sub->add_option("--R", config.R, "Replicates, or 'exhaustive'");
    sub->add_option("--seed", config.seed, "RNG seed");
    sub->add_option("--top-k", config.top_k, "Backbone size");
    sub->add_option("--threshold", config.threshold, "Backbone contribution threshold (overrides --top-k)");
    sub->add_option("--scene", config.scene, "Analyze the ---BEAT--- units of this scene");
    sub->add_option("--highlight", config.highlight, "Segment ordinals drawn highlighted")->delimiter(',');
    sub->add_option("--out", config.out, "Output directory");
    sub->add_option("--format", config.formats, "Output formats: json, csv, svg")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    sub->callback([&config, name = std::string(spec.name)] { config.subcommand = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (config.formats.empty()) config.formats = defaults.at(config.subcommand);

  try {
    Session session(config, out);
    const std::map<std::string, void (*)(const Session&, std::ostream&)> commands = {
        {"parse", cmd_parse},       {"analyze", cmd_analyze},     {"segment", cmd_segment},
        {"baseline", cmd_baseline}, {"summarize", cmd_summarize}, {"plot", cmd_plot},
    };
    commands.at(config.subcommand)(session, err);
    return 0;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << (code == 2 ? "internal error: " : "error: ") << e.what() << '\n';
    return code;
  }
}

int exit_code_for(const std::exception& e) {
  if (const auto* ne = dynamic_cast<const Error*>(&e)) return ne->code() == ErrorCode::Internal ? 2 : 1;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return 1;
  return 2;
}

}  // namespace narrative::cli
