#include <algorithm>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shapesuite/descriptors.hpp"
#include "shapesuite/io.hpp"
#include "shapesuite/raster.hpp"
#include "shapesuite/stats.hpp"
#include "shapesuite/synth.hpp"
#include "shapesuite/threading.hpp"

namespace {

using namespace shapesuite;

struct ExtractArgs {
  std::string labels_path;
  std::string gray_path;
  std::string out_path;
  int connectivity = 8;
  int32_t background = 0;
  double straightness_angle = 15.0;
  std::vector<int> scales = {1, 2, 4, 8, 16, 32};
  int dmp_depth = 4;
  double skeleton_filter = 1.0;
  bool byte_code = false;
  uint64_t seed = 0;
};

int run_extract(const ExtractArgs& args) {
  const LabelImage labels = read_label_raster(args.labels_path);

  CharacteristicMap cmap;
  bool have_gray = false;
  if (!args.gray_path.empty()) {
    const GrayImage gray = read_gray_raster(args.gray_path);
    if (gray.width != labels.width || gray.height != labels.height) {
      std::cerr << "error: gray raster size differs from label raster\n";
      return 1;
    }
    cmap = multiscale_characteristic(dmp(gray, args.dmp_depth));
    have_gray = true;
  }

  ExtractOptions eopts;
  eopts.connectivity = args.connectivity;
  eopts.background_label = args.background;
  const std::vector<Region> regions = extract_regions(labels, eopts);

  DescriptorConfig cfg;
  cfg.straightness.angle_threshold_deg = args.straightness_angle;
  cfg.straightness.scales = args.scales;
  cfg.skeleton_filter = args.skeleton_filter;

  std::vector<FeatureVector> rows(regions.size());
  parallel_for(int64_t(regions.size()), [&](int64_t i) {
    try {
      rows[size_t(i)] =
          compute_features(regions[size_t(i)], have_gray ? &cmap : nullptr, cfg);
    } catch (const std::exception& e) {
      FeatureVector fv;
      fv.label = regions[size_t(i)].label;
      fv.area = regions[size_t(i)].area;
      std::string what = e.what();
      for (char& ch : what)
        if (ch == ',' || ch == '\n') ch = ';';
      fv.flags = {"compute_failed:" + what};
      rows[size_t(i)] = std::move(fv);
    }
  });

  FeatureCsvOptions copts;
  copts.byte_code = args.byte_code;
  copts.comments = {"shapesuite extract seed=" + std::to_string(args.seed) +
                    " connectivity=" + std::to_string(args.connectivity) +
                    " straightness_angle=" +
                    format_double(args.straightness_angle) +
                    " dmp_depth=" + std::to_string(args.dmp_depth) +
                    " skeleton_filter=" + format_double(args.skeleton_filter) +
                    " byte_code=" + (args.byte_code ? "1" : "0")};
  write_text_file(args.out_path, feature_csv(rows, copts));
  std::cout << "wrote " << rows.size() << " region rows to " << args.out_path
            << "\n";
  return 0;
}

struct ValidateArgs {
  std::string in_path;
  std::string out_path;
  std::vector<std::string> features;
  double alpha = 0.05;
  double srcc_strong = 0.8;
  int decimate = 1;
  uint64_t seed = 0;
};

int run_validate(const ValidateArgs& args) {
  const CsvTable table = read_csv(args.in_path);
  const std::vector<std::string> features =
      args.features.empty() ? default_feature_columns(table)
                            : args.features;
  if (features.size() < 2) {
    std::cerr << "error: need at least 2 feature columns\n";
    return 1;
  }
  int64_t dropped = 0;
  SampleMatrix matrix = to_sample_matrix(table, features, &dropped);
  if (dropped > 0)
    std::cerr << "note: dropped " << dropped
              << " rows with missing or non-finite entries\n";

  if (args.decimate > 1) {
    const int64_t n = matrix.n_samples();
    const int64_t keep = std::max<int64_t>(n / args.decimate, 2);
    std::vector<int64_t> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(args.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(size_t(keep));
    std::sort(idx.begin(), idx.end());
    for (auto& col : matrix.columns) {
      std::vector<double> sub;
      sub.reserve(idx.size());
      for (int64_t i : idx) sub.push_back(col[size_t(i)]);
      col = std::move(sub);
    }
  }

  const ValidationReport report =
      validate_feature_set(matrix, args.alpha, args.srcc_strong);
  const std::string json =
      validation_report_json(report, args.seed, args.decimate);
  if (args.out_path.empty())
    std::cout << json;
  else
    write_text_file(args.out_path, json);

  int risky = 0;
  for (const auto& p : report.pairs)
    if (p.verdict == PairVerdict::kCausalRisk) ++risky;
  std::cout << report.pairs.size() << " pairs, N=" << report.n
            << ", k=" << report.k << ", causal-risk=" << risky
            << ", md_accepted=" << (report.md_accepted ? "true" : "false")
            << "\n";
  return report.md_accepted ? 0 : 2;
}

struct SynthArgs {
  std::string set_name;
  std::string out_prefix;
  int size = 256;
  uint64_t seed = 0;
};

int run_synth(const SynthArgs& args) {
  const SynthResult result = synth_shapes(args.set_name, args.size);
  const std::vector<std::string> comments = {
      "shapesuite synth set=" + args.set_name +
      " seed=" + std::to_string(args.seed) +
      " size=" + std::to_string(args.size)};
  write_pgm(args.out_prefix + "_labels.pgm", result.labels, comments);
  write_pgm(args.out_prefix + "_gray.pgm", result.gray, comments);
  std::cout << "wrote " << args.out_prefix << "_labels.pgm and "
            << args.out_prefix << "_gray.pgm (" << result.labels.width << "x"
            << result.labels.height << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D shape descriptor suite and feature-dependence validator"};
  app.require_subcommand(1);
  // Global option; the file uses [extract] / [validate] / [synth] sections
  // and explicit flags always win.
  app.set_config("--config", "", "Read options from a config file");

  ExtractArgs ex;
  CLI::App* extract =
      app.add_subcommand("extract", "Compute shape descriptors per region");
  extract->add_option("--labels", ex.labels_path, "Label raster (PGM or PNG)")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--gray", ex.gray_path,
                      "Gray raster for the multiscale characteristic");
  extract->add_option("--out", ex.out_path, "Output feature CSV")->required();
  extract->add_option("--connectivity", ex.connectivity, "Region connectivity")
      ->check(CLI::IsMember({4, 8}));
  extract->add_option("--background", ex.background, "Background label value");
  extract->add_option("--straightness-angle", ex.straightness_angle,
                      "Straightness angle threshold, degrees");
  extract->add_option("--scales", ex.scales, "Straightness step sizes")
      ->delimiter(',');
  extract->add_option("--dmp-depth", ex.dmp_depth, "Profile depth n");
  extract->add_option("--skeleton-filter", ex.skeleton_filter,
                      "Skeleton spur filter strength");
  extract->add_flag("--byte-code", ex.byte_code,
                    "Quantize [0,1] descriptors to 1/255 steps");
  extract->add_option("--seed", ex.seed, "Seed recorded in outputs");

  ValidateArgs va;
  CLI::App* validate = app.add_subcommand(
      "validate", "Run the pairwise minimum-dependence screen on a CSV");
  validate->add_option("--in", va.in_path, "Feature CSV")
      ->required()
      ->check(CLI::ExistingFile);
  validate->add_option("--out", va.out_path, "Output JSON report");
  validate->add_option("--features", va.features, "Feature columns to test")
      ->delimiter(',');
  validate->add_option("--alpha", va.alpha, "Chi-square significance level");
  validate->add_option("--srcc-strong", va.srcc_strong,
                       "Rank-correlation strength threshold");
  validate->add_option("--decimate", va.decimate,
                       "Keep 1/D of the rows by seeded random sampling");
  validate->add_option("--seed", va.seed, "Sampling seed");

  SynthArgs sy;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate deterministic test shapes");
  synth->add_option("--set", sy.set_name, "Shape set name")
      ->required()
      ->check(CLI::IsMember(shapesuite::synth_set_names()));
  synth->add_option("--out", sy.out_prefix, "Output path prefix")->required();
  synth->add_option("--size", sy.size, "Canvas wrap width");
  synth->add_option("--seed", sy.seed, "Seed recorded in outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) return run_extract(ex);
    if (*validate) return run_validate(va);
    if (*synth) return run_synth(sy);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
