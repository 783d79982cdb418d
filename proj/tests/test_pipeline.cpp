#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "shapesuite/descriptors.hpp"
#include "shapesuite/io.hpp"
#include "shapesuite/synth.hpp"
#include "shapesuite/threading.hpp"

using namespace shapesuite;

namespace {

std::vector<FeatureVector> extract_features(const SynthResult& synth,
                                            bool with_gray) {
  CharacteristicMap cmap;
  if (with_gray) cmap = multiscale_characteristic(dmp(synth.gray, 4));
  const auto regions = extract_regions(synth.labels);
  std::vector<FeatureVector> rows(regions.size());
  parallel_for(int64_t(regions.size()), [&](int64_t i) {
    rows[size_t(i)] =
        compute_features(regions[size_t(i)], with_gray ? &cmap : nullptr, {});
  });
  return rows;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("shapesuite_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("synthetic squares all have unit roundness") {
  const SynthResult synth = synth_shapes("squares");
  const auto rows = extract_features(synth, false);
  REQUIRE(rows.size() == 5);
  for (const auto& fv : rows) CHECK(fv.rndnss_and_no_hole == 1.0);
}

TEST_CASE("synthetic donuts carry one hole each") {
  const SynthResult synth = synth_shapes("donuts");
  const auto regions = extract_regions(synth.labels);
  REQUIRE(regions.size() == 3);
  for (const auto& r : regions) {
    CHECK(r.hole_count == 1);
    const FeatureVector fv = compute_features(r);
    CHECK(fv.combnd_smpl_cnctvty < 1.0);
  }
}

TEST_CASE("rotated rectangles report their construction angles") {
  const SynthResult synth = synth_shapes("rotrects");
  const auto regions = extract_regions(synth.labels);
  REQUIRE(regions.size() == 12);
  for (size_t i = 0; i < regions.size(); ++i) {
    const FeatureVector fv = compute_features(regions[i]);
    // The stamp's long axis points along (cos a, sin a) in (col, row), the
    // same convention the caliper angle reports mod 180.
    const double expected = std::fmod(15.0 * double(i), 180.0);
    const double diff = std::abs(fv.mer_angle_deg - expected);
    CHECK(std::min(diff, 180.0 - diff) <= 3.0);
    CHECK(fv.mer_l / fv.mer_w ==
          doctest::Approx(31.0 / 13.0).epsilon(0.1));
  }
}

TEST_CASE("PGM round trip preserves labels") {
  TempDir tmp;
  const SynthResult synth = synth_shapes("ltcross");
  write_pgm(tmp.file("labels.pgm"), synth.labels, {"roundtrip check"});
  const LabelImage back = read_label_raster(tmp.file("labels.pgm"));
  CHECK(back.width == synth.labels.width);
  CHECK(back.height == synth.labels.height);
  CHECK(back.labels == synth.labels.labels);
}

TEST_CASE("feature CSV is stable and parses back") {
  const SynthResult synth = synth_shapes("bars");
  const auto rows = extract_features(synth, true);
  const std::string csv1 = feature_csv(rows);
  const std::string csv2 = feature_csv(extract_features(synth, true));
  CHECK(csv1 == csv2);  // deterministic under the thread pool

  TempDir tmp;
  write_text_file(tmp.file("features.csv"), csv1);
  const CsvTable table = read_csv(tmp.file("features.csv"));
  CHECK(table.header.size() == 16);
  CHECK(table.rows.size() == rows.size());

  const auto names = default_feature_columns(table);
  CHECK(names.size() == 7);
  int64_t dropped = 0;
  const SampleMatrix m = to_sample_matrix(table, names, &dropped);
  CHECK(dropped == 0);
  CHECK(m.n_samples() == int64_t(rows.size()));
}

TEST_CASE("byte coding quantizes the unit-range columns") {
  const SynthResult synth = synth_shapes("squares");
  const auto rows = extract_features(synth, false);
  FeatureCsvOptions opts;
  opts.byte_code = true;
  const std::string csv = feature_csv(rows, opts);
  TempDir tmp;
  write_text_file(tmp.file("bc.csv"), csv);
  const CsvTable table = read_csv(tmp.file("bc.csv"));
  const auto col = std::find(table.header.begin(), table.header.end(),
                             "cnvxty_and_no_hole");
  REQUIRE(col != table.header.end());
  const size_t idx = size_t(col - table.header.begin());
  for (const auto& row : table.rows) {
    const double v = std::stod(row[idx]);
    const double scaled = v * 255.0;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
  }
}

TEST_CASE("report JSON carries the screening schema") {
  const SynthResult synth = synth_shapes("all");
  const auto rows = extract_features(synth, true);
  TempDir tmp;
  write_text_file(tmp.file("features.csv"), feature_csv(rows));
  const CsvTable table = read_csv(tmp.file("features.csv"));
  const SampleMatrix m =
      to_sample_matrix(table, default_feature_columns(table));
  REQUIRE(m.n_samples() >= 20);
  const ValidationReport rep = validate_feature_set(m);
  const std::string json = validation_report_json(rep, 42, 1);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"md_accepted\"") != std::string::npos);
  CHECK(json.find("\"pairs\"") != std::string::npos);
  CHECK(rep.pairs.size() == 21);
}

TEST_CASE("gray roundtrip and mismatched sizes") {
  TempDir tmp;
  const SynthResult synth = synth_shapes("disks");
  write_pgm(tmp.file("gray.pgm"), synth.gray);
  const GrayImage back = read_gray_raster(tmp.file("gray.pgm"));
  CHECK(back == synth.gray);
}

TEST_CASE("16-bit PGM samples survive the round trip") {
  TempDir tmp;
  GrayImage img(5, 3, 0);
  int32_t v = 250;
  for (auto& px : img.pixels) px = (v += 4099) % 65536;
  write_pgm(tmp.file("deep.pgm"), img);
  CHECK(read_gray_raster(tmp.file("deep.pgm")) == img);
}

TEST_CASE("missing gray column drops out of the default feature set") {
  const SynthResult synth = synth_shapes("all");
  const auto rows = extract_features(synth, false);  // no characteristic
  TempDir tmp;
  write_text_file(tmp.file("nogray.csv"), feature_csv(rows));
  const CsvTable table = read_csv(tmp.file("nogray.csv"));
  const auto names = default_feature_columns(table);
  CHECK(names.size() == 6);
  CHECK(std::find(names.begin(), names.end(), "dmp_mlt_scl_chrctrstc") ==
        names.end());
  int64_t dropped = 0;
  const SampleMatrix m = to_sample_matrix(table, names, &dropped);
  CHECK(dropped == 0);
  CHECK(validate_feature_set(m).pairs.size() == 15);  // 6 choose 2
}

TEST_CASE("unknown synth set is rejected") {
  CHECK_THROWS_AS(synth_shapes("nonsense"), std::invalid_argument);
}
