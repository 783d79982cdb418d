#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "shapesuite/descriptors.hpp"
#include "shapesuite/synth.hpp"
#include "test_helpers.hpp"

using namespace shapesuite;
using namespace shapesuite::testing;

namespace {

Bitmap disk_mask(int radius) {
  const int d = 2 * radius + 1;
  Bitmap b(d, d, 0);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const double dr = r - radius, dc = c - radius;
      if (dr * dr + dc * dc <= double(radius) * radius) b.at(r, c) = 1;
    }
  return b;
}

ConvexHullResult hull_of(const Region& region) {
  ConvexHullResult hull = convex_hull(trace_outer_boundary(region.mask));
  hull.a_convex = discretize_hull_area(hull);
  return hull;
}

Bitmap punch_hole(Bitmap b, int r, int c) {
  b.at(r, c) = 0;
  return b;
}

}  // namespace

TEST_CASE("convexity anchors") {
  SUBCASE("solid rectangle is fully convex") {
    const Region reg = region_of(solid(5, 7));
    CHECK(convexity(reg, hull_of(reg)) == doctest::Approx(1.0));
  }
  SUBCASE("straight line is fully convex through cell discretization") {
    const Region reg = region_of(solid(1, 5));
    CHECK(convexity(reg, hull_of(reg)) == doctest::Approx(1.0));
  }
  SUBCASE("hole eats convexity: 8/9 for the punched 3x3") {
    const Region reg = region_of(punch_hole(solid(3, 3), 1, 1));
    CHECK(convexity(reg, hull_of(reg)) == doctest::Approx(8.0 / 9.0));
  }
}

TEST_CASE("roundness anchors and scale invariance") {
  CHECK(roundness(region_of(solid(1, 1))) == doctest::Approx(1.0));
  CHECK(roundness(region_of(solid(2, 2))) == doctest::Approx(1.0));
  for (int n : {3, 5, 17, 64})
    CHECK(roundness(region_of(solid(n, n))) == 1.0);  // exact
  CHECK(roundness(region_of(solid(1, 4))) == doctest::Approx(0.8));

  SUBCASE("squares beat equal-area digital disks") {
    const Region diskr = region_of(disk_mask(9));
    const int side = int(std::lround(std::sqrt(double(diskr.area))));
    const Region sq = region_of(solid(side, side));
    CHECK(roundness(sq) >= roundness(diskr));
  }
}

TEST_CASE("boundary straightness") {
  StraightnessConfig cfg;  // 15 degrees, dyadic scales
  SUBCASE("long rectangle is mostly straight at step 4") {
    const Region reg = region_of(solid(10, 150));
    const StraightnessResult res =
        straightness(trace_outer_boundary(reg.mask), cfg);
    REQUIRE(res.per_scale.count(4) == 1);
    CHECK(res.per_scale.at(4) >= 0.9);
    for (const auto& [s, v] : res.per_scale) CHECK(res.best >= v);
  }
  SUBCASE("disk boundary is visibly less straight than a rectangle") {
    const StraightnessResult rect =
        straightness(trace_outer_boundary(solid(10, 150)), cfg);
    const StraightnessResult disk =
        straightness(trace_outer_boundary(disk_mask(20)), cfg);
    CHECK(rect.best - disk.best >= 0.1);
  }
  SUBCASE("short boundaries skip long steps instead of scoring zero") {
    const StraightnessResult res =
        straightness(trace_outer_boundary(solid(2, 2)), cfg);
    CHECK(res.per_scale.count(32) == 0);
  }
  SUBCASE("single pixel has no usable scale") {
    const StraightnessResult res =
        straightness(trace_outer_boundary(solid(1, 1)), cfg);
    CHECK(res.best_scale == 0);
    CHECK(res.per_scale.empty());
  }
}

TEST_CASE("fuzzy rectangularity") {
  FuzzyRectConfig cfg;
  StraightnessConfig scfg;
  SUBCASE("clean rectangle scores near one") {
    const auto walk = trace_outer_boundary(solid(20, 40));
    const int eps = straightness(walk, scfg).best_scale;
    CHECK(fuzzy_rectangularity(walk, cfg, eps) >= 0.95);
  }
  SUBCASE("disk scores near zero") {
    const auto walk = trace_outer_boundary(disk_mask(20));
    const int eps = straightness(walk, scfg).best_scale;
    CHECK(fuzzy_rectangularity(walk, cfg, eps) <= 0.1);
  }
  SUBCASE("degenerate polygon scores zero") {
    const auto walk = trace_outer_boundary(solid(1, 3));
    CHECK(fuzzy_rectangularity(walk, cfg, 1) == 0.0);
  }
}

TEST_CASE("elongatedness ratios from injected measurements") {
  SkeletonMetrics m;
  m.l_total = 12;
  m.w_avg = 3.0;
  CHECK(elongatedness_ratio(m) == doctest::Approx(4.0));

  m.l_total = 16;
  m.w_avg = 4.1;
  CHECK(elongatedness_ratio(m) == doctest::Approx(16.0 / 4.1).epsilon(1e-9));

  m.l_longest = 8;
  m.w_longest_avg = 3.0;
  CHECK(elongatedness_nm_ratio(m) == doctest::Approx(8.0 / 3.0).epsilon(1e-3));

  m.l_longest = 1;
  m.w_longest_avg = 10.0;
  CHECK(elongatedness_nm_ratio(m) == doctest::Approx(0.1));  // not floored

  bool clamped = false;
  m.l_total = 1;
  m.w_avg = 5.0;
  CHECK(elongatedness_ratio(m, &clamped) == 1.0);
  CHECK(clamped);
}

TEST_CASE("elongatedness of a 3x30 bar lands near 10") {
  const Region reg = region_of(solid(3, 30));
  const Skeleton skel = euclidean_skeleton(reg.mask);
  const SkeletonMetrics m = skeleton_metrics(skel, distance_transform(reg.mask));
  const double ratio = elongatedness_ratio(m);
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 12.0);
}

TEST_CASE("nm elongatedness of a 1x9 bar is 9") {
  const Region reg = region_of(solid(1, 9));
  const Skeleton skel = euclidean_skeleton(reg.filled_mask);
  const SkeletonMetrics m =
      skeleton_metrics(skel, distance_transform(reg.filled_mask));
  CHECK(elongatedness_nm_ratio(m) == doctest::Approx(9.0));
}

TEST_CASE("simple connectivity combines boundary and area terms") {
  SUBCASE("reference fuzzy-AND combinations") {
    CHECK(std::min(0.84, 0.71) == doctest::Approx(0.71));
    CHECK(std::min(0.84, 0.56) == doctest::Approx(0.56));
    CHECK(std::min(0.31, 0.55) == doctest::Approx(0.31));
  }
  SUBCASE("punched 3x3 block") {
    const Region reg = region_of(punch_hole(solid(3, 3), 1, 1));
    const SimpleConnectivity sc = simple_connectivity(reg);
    CHECK(sc.term_4adjacency == doctest::Approx(12.0 / 16.0));
    CHECK(sc.filled_area_ratio == doctest::Approx(8.0 / 9.0));
    CHECK(sc.combined == doctest::Approx(0.75));
  }
  SUBCASE("hole-free region scores exactly one") {
    std::mt19937 rng(301);
    for (int trial = 0; trial < 10; ++trial) {
      const Bitmap blob = random_blob(rng, 12, 50);
      const Region reg = region_of(blob);
      if (reg.hole_count != 0) continue;
      const SimpleConnectivity sc = simple_connectivity(reg);
      CHECK(sc.combined == 1.0);
    }
  }
}

TEST_CASE("feature vector for a solid 5x5 square") {
  const Region reg = region_of(solid(5, 5));
  const FeatureVector fv = compute_features(reg);
  CHECK(fv.area == 25);
  CHECK(fv.cnvxty_and_no_hole == doctest::Approx(1.0));
  CHECK(fv.rndnss_and_no_hole == doctest::Approx(1.0));
  CHECK(fv.combnd_smpl_cnctvty == doctest::Approx(1.0));
  CHECK(fv.elngtdnss_and_no_hole == doctest::Approx(1.0));
  CHECK(fv.mer_w == doctest::Approx(5.0));
  CHECK(fv.mer_l == doctest::Approx(5.0));
  CHECK(!fv.dmp_mlt_scl_chrctrstc.has_value());
}

TEST_CASE("feature vector for the 3x3 donut") {
  const Region reg = region_of(punch_hole(solid(3, 3), 1, 1));
  const FeatureVector fv = compute_features(reg);
  CHECK(fv.combnd_smpl_cnctvty == doctest::Approx(0.75));
  CHECK(fv.cnvxty_and_no_hole == doctest::Approx(8.0 / 9.0));
}

TEST_CASE("descriptor ranges hold on random blobs") {
  std::mt19937 rng(307);
  for (int trial = 0; trial < 25; ++trial) {
    const Bitmap blob = random_blob(rng, 16, 90);
    const FeatureVector fv = compute_features(region_of(blob));
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    CHECK(in_unit(fv.cnvxty_and_no_hole));
    CHECK(in_unit(fv.fuzzy_rule_bsd_rctnglrty));
    CHECK(in_unit(fv.rndnss_and_no_hole));
    CHECK(in_unit(fv.mlt_scl_strghtns_of_bndrs));
    CHECK(in_unit(fv.smpl_cnctvty_4adjncy));
    CHECK(in_unit(fv.filled_area_ratio));
    CHECK(in_unit(fv.combnd_smpl_cnctvty));
    CHECK(fv.elngtdnss_and_no_hole >= 1.0);
    CHECK(fv.mer_angle_deg >= 0.0);
    CHECK(fv.mer_angle_deg < 180.0);
    for (const auto& [s, v] : fv.straightness_per_scale) CHECK(in_unit(v));
  }
}

TEST_CASE("punching a hole moves the hole-sensitive descriptors") {
  const Bitmap base = solid(7, 9);
  const Bitmap holed = punch_hole(punch_hole(solid(7, 9), 3, 4), 3, 5);
  const FeatureVector a = compute_features(region_of(base));
  const FeatureVector b = compute_features(region_of(holed));
  CHECK(b.combnd_smpl_cnctvty < a.combnd_smpl_cnctvty);
  CHECK(b.cnvxty_and_no_hole < a.cnvxty_and_no_hole);
  CHECK(b.elngtdnss_and_no_hole >= a.elngtdnss_and_no_hole);
}

TEST_CASE("descriptors are exactly invariant under grid isometries") {
  std::mt19937 rng(311);
  for (int trial = 0; trial < 10; ++trial) {
    const Bitmap blob = random_blob(rng, 14, 70);
    const FeatureVector ref = compute_features(region_of(blob));
    for (int rot = 0; rot < 4; ++rot) {
      for (int flip = 0; flip < 2; ++flip) {
        const DihedralTransform t{rot, flip != 0};
        const FeatureVector got =
            compute_features(region_of(apply_transform(blob, t)));
        CHECK(got.area == ref.area);
        CHECK(got.cnvxty_and_no_hole == ref.cnvxty_and_no_hole);
        CHECK(got.fuzzy_rule_bsd_rctnglrty == ref.fuzzy_rule_bsd_rctnglrty);
        CHECK(got.rndnss_and_no_hole == ref.rndnss_and_no_hole);
        CHECK(got.mlt_scl_strghtns_of_bndrs == ref.mlt_scl_strghtns_of_bndrs);
        CHECK(got.elngtdnss_and_no_hole == ref.elngtdnss_and_no_hole);
        CHECK(got.elngtdnss_nm == ref.elngtdnss_nm);
        CHECK(got.combnd_smpl_cnctvty == ref.combnd_smpl_cnctvty);
        CHECK(got.mer_w == ref.mer_w);
        CHECK(got.mer_l == ref.mer_l);
      }
    }
  }
}

TEST_CASE("characteristic column appears only with a gray image") {
  const GrayImage gray = [] {
    GrayImage g(15, 15, 0);
    for (int r = 5; r < 10; ++r)
      for (int c = 5; c < 10; ++c) g.at(r, c) = 120;
    return g;
  }();
  LabelImage labels(15, 15, 0);
  for (int r = 5; r < 10; ++r)
    for (int c = 5; c < 10; ++c) labels.at(r, c) = 1;
  const Region reg = extract_regions(labels)[0];

  const CharacteristicMap cmap = multiscale_characteristic(dmp(gray, 4));
  const FeatureVector with = compute_features(reg, &cmap);
  REQUIRE(with.dmp_mlt_scl_chrctrstc.has_value());
  CHECK(*with.dmp_mlt_scl_chrctrstc == doctest::Approx(3.0));

  const FeatureVector without = compute_features(reg);
  CHECK(!without.dmp_mlt_scl_chrctrstc.has_value());
  CHECK(std::find(without.flags.begin(), without.flags.end(), "no_gray") !=
        without.flags.end());
}
