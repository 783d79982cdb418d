#include "shapesuite/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapesuite {

double convexity(const Region& region, const ConvexHullResult& hull) {
  if (region.pixels.empty())
    throw std::invalid_argument("convexity: empty region");
  if (hull.a_convex <= 0)
    throw std::invalid_argument("convexity: hull area not discretized");
  return std::clamp(double(region.area) / double(hull.a_convex), 0.0, 1.0);
}

double roundness(const Region& region) {
  if (region.pixels.empty() || region.pl_total <= 0)
    throw std::invalid_argument("roundness: empty region");
  const double v = 4.0 * std::sqrt(double(region.area)) / double(region.pl_total);
  return std::clamp(v, 0.0, 1.0);
}

StraightnessResult straightness(const std::vector<Pixel>& boundary_walk,
                                const StraightnessConfig& cfg) {
  StraightnessResult res;
  const int64_t m = int64_t(boundary_walk.size()) - 1;  // distinct entries
  if (m < 1) return res;

  std::vector<int> scales = cfg.scales;
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  for (const int s : scales) {
    if (s <= 0)
      throw std::invalid_argument("straightness: scales must be positive");
    if (m < 2 * int64_t(s) + 2) continue;  // too short at this scale
    int64_t straight = 0;
    for (int64_t i = 0; i < m; ++i) {
      const Pixel p = boundary_walk[size_t(i)];
      const Pixel a = boundary_walk[size_t((i - s + m) % m)];
      const Pixel b = boundary_walk[size_t((i + s) % m)];
      const int64_t ur = a.r - p.r, uc = a.c - p.c;
      const int64_t vr = b.r - p.r, vc = b.c - p.c;
      if ((ur == 0 && uc == 0) || (vr == 0 && vc == 0)) continue;
      const int64_t dot = ur * vr + uc * vc;
      const int64_t cross = ur * vc - uc * vr;
      // Deviation from a straight pass-through: 180 deg minus the angle
      // between the two chords.
      const double delta =
          std::atan2(double(std::abs(cross)), double(-dot)) * 180.0 / M_PI;
      if (delta <= cfg.angle_threshold_deg) ++straight;
    }
    const double value = double(straight) / double(m);
    res.per_scale[s] = value;
    if (res.best_scale == 0 || value > res.best) {
      res.best = value;
      res.best_scale = s;  // smallest scale wins ties
    }
  }
  return res;
}

namespace {

double trapezoid(double v, double foot_lo, double top_lo, double top_hi,
                 double foot_hi) {
  if (v <= foot_lo || v >= foot_hi) return 0.0;
  if (v < top_lo) return (v - foot_lo) / (top_lo - foot_lo);
  if (v <= top_hi) return 1.0;
  return (foot_hi - v) / (foot_hi - top_hi);
}

// S-shaped ramp: 0 below lo, 1 above hi.
double ramp_up(double v, double lo, double hi) {
  if (v <= lo) return 0.0;
  if (v >= hi) return 1.0;
  return (v - lo) / (hi - lo);
}

}  // namespace

double fuzzy_rectangularity(const std::vector<Pixel>& boundary_walk,
                            const FuzzyRectConfig& cfg, int rdp_epsilon) {
  PolyChain chain{boundary_walk, true};
  const PolyChain poly = rdp_simplify(chain, double(std::max(rdp_epsilon, 1)));
  std::vector<Pixel> v = poly.vertices;
  if (v.size() > 1 && v.front() == v.back()) v.pop_back();
  if (v.size() < 3) return 0.0;

  // Orient counterclockwise (positive shoelace in (x=col, y=row)).
  double signed2 = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Pixel& a = v[i];
    const Pixel& b = v[(i + 1) % v.size()];
    signed2 += double(a.c) * b.r - double(b.c) * a.r;
  }
  if (signed2 < 0) std::reverse(v.begin(), v.end());

  double near_right = 0.0, much_obtuse = 0.0, much_acute = 0.0;
  const size_t n = v.size();
  for (size_t j = 0; j < n; ++j) {
    const Pixel prev = v[(j + n - 1) % n];
    const Pixel cur = v[j];
    const Pixel next = v[(j + 1) % n];
    const double inr = cur.r - prev.r, inc = cur.c - prev.c;
    const double outr = next.r - cur.r, outc = next.c - cur.c;
    const double cross = inc * outr - inr * outc;  // left turn positive (CCW)
    const double dot = inr * outr + inc * outc;
    const double turn = std::atan2(cross, dot) * 180.0 / M_PI;
    const double interior = 180.0 - turn;  // (0, 360)

    const double len_in = std::hypot(inr, inc);
    const double len_out = std::hypot(outr, outc);
    const double sep_w =
        std::clamp(std::min(len_in, len_out) / cfg.separation_min, 0.0, 1.0);

    near_right += sep_w * trapezoid(interior,
                                    cfg.right_angle_min_deg - cfg.shoulder_deg,
                                    cfg.right_angle_min_deg,
                                    cfg.right_angle_max_deg,
                                    cfg.right_angle_max_deg + cfg.shoulder_deg);
    much_obtuse += ramp_up(interior, cfg.right_angle_max_deg, cfg.much_obtuse_deg);
    much_acute += 1.0 - ramp_up(interior, cfg.much_acute_deg,
                                cfg.right_angle_min_deg);
  }

  const double target = cfg.target_vertex_count;
  const double rule_corners =
      trapezoid(near_right, target - 2.0, target - 0.5, target + 0.5,
                target + 2.0);
  const double rule_obtuse =
      1.0 - ramp_up(much_obtuse, double(cfg.max_obtuse_count),
                    2.0 * cfg.max_obtuse_count);
  const double rule_acute =
      1.0 - ramp_up(much_acute, double(cfg.max_acute_count),
                    2.0 * cfg.max_acute_count);
  return std::min({rule_corners, rule_obtuse, rule_acute});
}

double elongatedness_ratio(const SkeletonMetrics& metrics, bool* clamped) {
  if (metrics.l_total <= 0 || metrics.w_avg <= 0.0)
    throw std::invalid_argument("elongatedness_ratio: empty skeleton");
  const double raw = double(metrics.l_total) / metrics.w_avg;
  if (clamped) *clamped = raw < 1.0;
  return std::max(raw, 1.0);
}

double elongatedness_nm_ratio(const SkeletonMetrics& metrics) {
  if (metrics.l_longest <= 0 || metrics.w_longest_avg <= 0.0)
    throw std::invalid_argument("elongatedness_nm_ratio: empty path");
  return double(metrics.l_longest) / metrics.w_longest_avg;
}

SimpleConnectivity simple_connectivity(const Region& region) {
  if (region.pixels.empty())
    throw std::invalid_argument("simple_connectivity: empty region");
  SimpleConnectivity sc;
  sc.term_4adjacency =
      std::clamp(double(region.pl_external) / double(region.pl_total), 0.0, 1.0);
  sc.filled_area_ratio =
      std::clamp(double(region.area) / double(region.filled_area), 0.0, 1.0);
  sc.combined = std::min(sc.term_4adjacency, sc.filled_area_ratio);
  return sc;
}

FeatureVector compute_features(const Region& region,
                               const CharacteristicMap* cmap,
                               const DescriptorConfig& cfg) {
  if (region.pixels.empty())
    throw std::invalid_argument("compute_features: empty region");

  FeatureVector fv;
  fv.label = region.label;
  fv.area = region.area;

  const SimpleConnectivity sc = simple_connectivity(region);
  fv.smpl_cnctvty_4adjncy = sc.term_4adjacency;
  fv.filled_area_ratio = sc.filled_area_ratio;
  fv.combnd_smpl_cnctvty = sc.combined;
  fv.rndnss_and_no_hole = roundness(region);

  // Shape measures run in the canonical orientation of the mask.
  const DihedralTransform t = canonical_transform(region.mask);
  const Bitmap mask = apply_transform(region.mask, t);
  const Bitmap filled = apply_transform(region.filled_mask, t);

  const std::vector<Pixel> walk = trace_outer_boundary(filled);
  ConvexHullResult hull = convex_hull(walk);
  hull.a_convex = discretize_hull_area(hull);
  fv.cnvxty_and_no_hole = convexity(region, hull);
  if (hull.degenerate) fv.flags.push_back("degenerate_hull");

  const StraightnessResult st = straightness(walk, cfg.straightness);
  fv.straightness_per_scale = st.per_scale;
  fv.mlt_scl_strghtns_of_bndrs = st.best;
  if (st.best_scale == 0) fv.flags.push_back("no_straightness_scale");

  fv.fuzzy_rule_bsd_rctnglrty = fuzzy_rectangularity(
      walk, cfg.rectangularity, st.best_scale > 0 ? st.best_scale : 1);

  const OrientedRect rect = min_enclosing_rect(hull);
  fv.mer_w = rect.width_w;
  fv.mer_l = rect.length_l;
  fv.mer_angle_deg = map_angle_from_transformed(rect.angle_deg, t);
  if (rect.degenerate) {
    fv.mer_angle_deg = 0.0;
    fv.flags.push_back("mer_degenerate");
  }
  if (rect.square_tie) fv.flags.push_back("mer_square_tie");

  const Skeleton skel = euclidean_skeleton(mask, cfg.skeleton_filter);
  const DistanceField df = distance_transform(mask);
  const SkeletonMetrics metrics = skeleton_metrics(skel, df);
  bool clamped = false;
  fv.elngtdnss_and_no_hole = elongatedness_ratio(metrics, &clamped);
  if (clamped) fv.flags.push_back("elongatedness_clamped");
  if (metrics.path_heuristic) fv.flags.push_back("cyclic_skeleton");

  const Skeleton nm_skel = euclidean_skeleton(filled, cfg.skeleton_filter);
  const DistanceField nm_df = distance_transform(filled);
  fv.elngtdnss_nm = elongatedness_nm_ratio(skeleton_metrics(nm_skel, nm_df));

  if (cmap) {
    bool mixed = false;
    fv.dmp_mlt_scl_chrctrstc =
        segment_average_characteristic(*cmap, region, &mixed);
    if (mixed) fv.flags.push_back("mixed_phi_signs");
  } else {
    fv.flags.push_back("no_gray");
  }
  return fv;
}

}  // namespace shapesuite
