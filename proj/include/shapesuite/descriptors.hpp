#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shapesuite/geometry.hpp"
#include "shapesuite/morphology.hpp"
#include "shapesuite/raster.hpp"
#include "shapesuite/skeleton.hpp"

namespace shapesuite {

struct StraightnessConfig {
  double angle_threshold_deg = 15.0;
  std::vector<int> scales = {1, 2, 4, 8, 16, 32};
};

/// Fuzzy rule parameters for polygon-based rectangularity. Angles are
/// interior angles in degrees; `separation_min` is the edge length below
/// which a corner stops counting as a genuine rectangle corner.
struct FuzzyRectConfig {
  double right_angle_min_deg = 60.0;
  double right_angle_max_deg = 120.0;
  double shoulder_deg = 10.0;
  double much_obtuse_deg = 135.0;
  double much_acute_deg = 45.0;
  double separation_min = 3.0;
  int max_obtuse_count = 2;
  int max_acute_count = 2;
  int target_vertex_count = 4;
};

struct DescriptorConfig {
  StraightnessConfig straightness;
  FuzzyRectConfig rectangularity;
  double skeleton_filter = 1.0;
};

struct StraightnessResult {
  std::map<int, double> per_scale;  // scales with long enough boundaries
  double best = 0.0;
  int best_scale = 0;  // 0 when no scale was computable
};

struct SimpleConnectivity {
  double term_4adjacency = 1.0;   // pl_external / pl_total
  double filled_area_ratio = 1.0; // area / filled_area
  double combined = 1.0;          // min of the two
};

struct FeatureVector {
  int32_t label = 0;
  int64_t area = 0;
  double mer_angle_deg = 0.0;
  double mer_w = 0.0;
  double mer_l = 0.0;
  double cnvxty_and_no_hole = 0.0;
  double fuzzy_rule_bsd_rctnglrty = 0.0;
  double rndnss_and_no_hole = 0.0;
  double mlt_scl_strghtns_of_bndrs = 0.0;
  std::optional<double> dmp_mlt_scl_chrctrstc;  // absent without gray input
  double elngtdnss_and_no_hole = 1.0;
  double elngtdnss_nm = 0.0;  // comparison value, not floored
  double smpl_cnctvty_4adjncy = 1.0;
  double filled_area_ratio = 1.0;
  double combnd_smpl_cnctvty = 1.0;
  std::map<int, double> straightness_per_scale;
  std::vector<std::string> flags;
};

/// area / a_convex; requires hull.a_convex already discretized.
double convexity(const Region& region, const ConvexHullResult& hull);

/// 4*sqrt(A)/PL with the total cross-aura perimeter, clamped to [0, 1].
/// Exactly 1 for every solid square.
double roundness(const Region& region);

/// Per-scale fraction of boundary pixels whose chord pair at distance s
/// bends by at most the angle threshold, and the max over scales.
/// Scales needing more boundary than available are skipped.
StraightnessResult straightness(const std::vector<Pixel>& boundary_walk,
                                const StraightnessConfig& cfg);

/// Fuzzy-AND of the three corner rules evaluated on the RDP polygon of
/// the boundary (epsilon = the straightness-maximizing step size).
double fuzzy_rectangularity(const std::vector<Pixel>& boundary_walk,
                            const FuzzyRectConfig& cfg, int rdp_epsilon);

/// Whole-skeleton length over mean width, floored at 1.
double elongatedness_ratio(const SkeletonMetrics& metrics,
                           bool* clamped = nullptr);

/// Longest-path length over mean width along it (legacy comparison form,
/// computed on the hole-filled mask; not floored).
double elongatedness_nm_ratio(const SkeletonMetrics& metrics);

SimpleConnectivity simple_connectivity(const Region& region);

/// All descriptors for one region. Shape measures are computed in a
/// canonical orientation of the region mask, so every field except
/// mer_angle_deg is exactly invariant under grid rotations/reflections
/// of the input; the angle transforms covariantly mod 180.
FeatureVector compute_features(const Region& region,
                               const CharacteristicMap* cmap = nullptr,
                               const DescriptorConfig& cfg = {});

}  // namespace shapesuite
