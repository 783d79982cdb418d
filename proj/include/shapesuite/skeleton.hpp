#pragma once

#include <cstdint>
#include <vector>

#include "shapesuite/raster.hpp"

namespace shapesuite {

/// Exact Euclidean distance transform of a mask. Distances are measured
/// from each set pixel to the nearest clear pixel; out-of-image counts as
/// clear, so an isolated pixel has distance 1. Clear pixels score 0.
struct DistanceField {
  int width = 0;
  int height = 0;
  std::vector<int64_t> dist2;  // squared distances, row-major

  int64_t at2(int r, int c) const { return dist2[size_t(r) * width + c]; }
  double at(int r, int c) const;
};

/// Linear-time exact squared EDT (column scan + row lower envelopes).
DistanceField distance_transform(const Bitmap& mask);

/// Medial skeleton pixels of a mask, topology preserving.
struct Skeleton {
  Bitmap pixels;
  double filter_param = 1.0;
};

/// Distance-ordered homotopic thinning anchored at centers of maximal
/// balls, followed by pruning of junction spurs no longer than
/// filter_param pixels. The result is 8-connected per mask component and
/// keeps one cycle per hole. Width-1 paths are their own skeleton.
Skeleton euclidean_skeleton(const Bitmap& mask, double filter_param = 1.0);

struct SkeletonPath {
  std::vector<Pixel> pixels;
  bool heuristic = false;  // skeleton graph has cycles; path is best-effort
};

/// Longest simple path between skeleton endpoints via a double
/// breadth-first sweep. Exact on trees; flagged heuristic when the
/// skeleton pixel graph contains cycles.
SkeletonPath longest_skeleton_path(const Skeleton& skel);

struct SkeletonMetrics {
  int64_t l_total = 0;        // skeleton pixel count
  double w_avg = 0.0;         // mean width over skeleton pixels
  int64_t l_longest = 0;      // pixel length of the longest path
  double w_longest_avg = 0.0; // mean width along that path
  bool path_heuristic = false;
};

/// Width at a skeleton pixel is 2*d(p) - 1 (the distance field counts the
/// boundary pixel), so a one-pixel-wide bar has width 1.
SkeletonMetrics skeleton_metrics(const Skeleton& skel, const DistanceField& df);

}  // namespace shapesuite
