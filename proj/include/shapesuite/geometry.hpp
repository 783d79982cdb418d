#pragma once

#include <vector>

#include "shapesuite/raster.hpp"

namespace shapesuite {

struct PolyChain {
  std::vector<Pixel> vertices;
  bool closed = false;
};

/// Convex hull of a boundary walk. Vertices are boundary pixel centers in
/// counterclockwise order (positive shoelace with x = col, y = row) and
/// strictly convex. Collinear or single-point inputs yield a degenerate
/// 2- or 1-vertex hull.
struct ConvexHullResult {
  std::vector<Pixel> hull_vertices;
  double algebraic_area = 0.0;  // shoelace area of the vertex polygon
  int64_t a_convex = 0;         // filled by discretize_hull_area
  bool degenerate = false;
};

/// Oriented minimum enclosing rectangle with L >= W. angle_deg is the
/// orientation of the L side, atan2(dr, dc) normalized to [0, 180).
struct OrientedRect {
  double length_l = 0.0;
  double width_w = 0.0;
  double angle_deg = 0.0;
  bool degenerate = false;
  bool square_tie = false;  // W == L, axis choice is arbitrary
};

/// Convex hull of the boundary walk points (monotone chain; boundary
/// walks revisit pixels on one-pixel-wide parts, which rules out the
/// online deque methods that need a simple polyline).
ConvexHullResult convex_hull(const std::vector<Pixel>& boundary);

/// Monotone-chain hull of an unordered point set; same output conventions.
std::vector<Pixel> convex_hull_points(std::vector<Pixel> points);

/// Absolute shoelace area of a closed polygon; polygons with fewer than
/// 3 vertices score 0 (degenerate).
double surveyor_area(const PolyChain& polygon);

/// Counts pixels whose unit cell [r,r+1]x[c,c+1] overlaps the hull of the
/// region cells by strictly more than half a cell. The hull polygon over
/// cells is the Minkowski expansion of the vertex hull, so a straight-line
/// region scores exactly its pixel count.
int64_t discretize_hull_area(const ConvexHullResult& hull);

/// Hull of the unit cells of the (vertex) hull, as cell-corner points.
std::vector<Pixel> cell_hull(const ConvexHullResult& hull);

/// Ramer-Douglas-Peucker simplification. Every input vertex stays within
/// `epsilon` of the output chain; output vertices are a subset of the
/// input, order preserved. Closed chains are split at their farthest
/// vertex pair and both halves are simplified.
PolyChain rdp_simplify(const PolyChain& chain, double epsilon);

/// Rotating calipers over the cell hull. A single-pixel region is
/// degenerate (0, 0, 0).
OrientedRect min_enclosing_rect(const ConvexHullResult& hull);

}  // namespace shapesuite
