#include "shapesuite/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapesuite {

namespace {

// Geometry runs in (x = col, y = row); counterclockwise means positive
// shoelace in that frame.
int64_t cross(Pixel o, Pixel a, Pixel b) {
  return int64_t(a.c - o.c) * (b.r - o.r) - int64_t(a.r - o.r) * (b.c - o.c);
}

int64_t dist2(Pixel a, Pixel b) {
  return int64_t(a.r - b.r) * (a.r - b.r) + int64_t(a.c - b.c) * (a.c - b.c);
}

double shoelace_signed(const std::vector<Pixel>& poly) {
  double s = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Pixel& a = poly[i];
    const Pixel& b = poly[(i + 1) % n];
    s += double(a.c) * b.r - double(b.c) * a.r;
  }
  return 0.5 * s;
}

}  // namespace

std::vector<Pixel> convex_hull_points(std::vector<Pixel> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const size_t n = pts.size();
  if (n <= 2) return pts;

  std::vector<Pixel> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  // Positive-shoelace order in (x=col, y=row), smallest vertex first.
  return hull;
}

ConvexHullResult convex_hull(const std::vector<Pixel>& boundary) {
  ConvexHullResult res;
  res.hull_vertices = convex_hull_points(boundary);
  res.degenerate = res.hull_vertices.size() < 3;
  if (res.hull_vertices.size() >= 3)
    res.algebraic_area =
        std::abs(shoelace_signed(res.hull_vertices));
  return res;
}

double surveyor_area(const PolyChain& polygon) {
  if (polygon.vertices.size() < 3) return 0.0;
  return std::abs(shoelace_signed(polygon.vertices));
}

std::vector<Pixel> cell_hull(const ConvexHullResult& hull) {
  std::vector<Pixel> corners;
  corners.reserve(hull.hull_vertices.size() * 4);
  for (const Pixel& v : hull.hull_vertices) {
    corners.push_back({v.r, v.c});
    corners.push_back({v.r, v.c + 1});
    corners.push_back({v.r + 1, v.c});
    corners.push_back({v.r + 1, v.c + 1});
  }
  return convex_hull_points(std::move(corners));
}

namespace {

struct Pt {
  double x, y;
};

// Clips `poly` against the half-plane keep(x, y) >= 0 described by one
// axis-aligned bound. axis 0: x, axis 1: y; sign +1 keeps >= bound,
// sign -1 keeps <= bound.
std::vector<Pt> clip_axis(const std::vector<Pt>& poly, int axis, double bound,
                          int sign) {
  std::vector<Pt> out;
  const size_t n = poly.size();
  if (n == 0) return out;
  auto inside = [&](const Pt& p) {
    const double v = axis == 0 ? p.x : p.y;
    return sign > 0 ? v >= bound : v <= bound;
  };
  auto intersect = [&](const Pt& a, const Pt& b) {
    if (axis == 0) {
      const double t = (bound - a.x) / (b.x - a.x);
      return Pt{bound, a.y + t * (b.y - a.y)};
    }
    const double t = (bound - a.y) / (b.y - a.y);
    return Pt{a.x + t * (b.x - a.x), bound};
  };
  for (size_t i = 0; i < n; ++i) {
    const Pt& cur = poly[i];
    const Pt& prev = poly[(i + n - 1) % n];
    const bool cin = inside(cur), pin = inside(prev);
    if (cin) {
      if (!pin) out.push_back(intersect(prev, cur));
      out.push_back(cur);
    } else if (pin) {
      out.push_back(intersect(prev, cur));
    }
  }
  return out;
}

double polygon_area(const std::vector<Pt>& poly) {
  double s = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * std::abs(s);
}

}  // namespace

int64_t discretize_hull_area(const ConvexHullResult& hull) {
  if (hull.hull_vertices.empty()) return 0;
  const std::vector<Pixel> cells = cell_hull(hull);
  std::vector<Pt> poly;
  poly.reserve(cells.size());
  for (const Pixel& p : cells) poly.push_back({double(p.c), double(p.r)});

  int min_r = cells[0].r, max_r = cells[0].r;
  int min_c = cells[0].c, max_c = cells[0].c;
  for (const Pixel& p : cells) {
    min_r = std::min(min_r, p.r);
    max_r = std::max(max_r, p.r);
    min_c = std::min(min_c, p.c);
    max_c = std::max(max_c, p.c);
  }

  // Overlap must strictly exceed half a cell; exact halves stay out, which
  // keeps diagonal one-pixel lines at a_convex == pixel count.
  constexpr double kHalf = 0.5 + 1e-9;
  int64_t count = 0;
  for (int r = min_r; r < max_r; ++r) {
    std::vector<Pt> strip = clip_axis(poly, 1, double(r), +1);
    strip = clip_axis(strip, 1, double(r + 1), -1);
    if (strip.empty()) continue;
    for (int c = min_c; c < max_c; ++c) {
      std::vector<Pt> cellpoly = clip_axis(strip, 0, double(c), +1);
      cellpoly = clip_axis(cellpoly, 0, double(c + 1), -1);
      if (cellpoly.size() >= 3 && polygon_area(cellpoly) > kHalf) ++count;
    }
  }
  return count;
}

namespace {

double point_segment_dist2(Pixel p, Pixel a, Pixel b) {
  const double abx = b.c - a.c, aby = b.r - a.r;
  const double apx = p.c - a.c, apy = p.r - a.r;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) return apx * apx + apy * apy;
  double t = (apx * abx + apy * aby) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = apx - t * abx, dy = apy - t * aby;
  return dx * dx + dy * dy;
}

void rdp_open(const std::vector<Pixel>& pts, size_t i, size_t j, double eps,
              std::vector<Pixel>& out) {
  // Keeps pts[i], recursion emits everything up to (not including) pts[j].
  double max_d2 = -1.0;
  size_t split = i;
  for (size_t k = i + 1; k < j; ++k) {
    const double d2 = point_segment_dist2(pts[k], pts[i], pts[j]);
    if (d2 > max_d2) {
      max_d2 = d2;
      split = k;
    }
  }
  if (max_d2 > eps * eps && split > i) {
    rdp_open(pts, i, split, eps, out);
    rdp_open(pts, split, j, eps, out);
  } else {
    out.push_back(pts[i]);
  }
}

}  // namespace

PolyChain rdp_simplify(const PolyChain& chain, double epsilon) {
  if (epsilon < 0.0)
    throw std::invalid_argument("rdp_simplify: epsilon must be >= 0");
  std::vector<Pixel> pts = chain.vertices;
  if (chain.closed && pts.size() > 1 && pts.front() == pts.back())
    pts.pop_back();
  // Consecutive duplicates carry no geometry.
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < (chain.closed ? 3u : 2u)) return {pts, chain.closed};

  PolyChain out;
  out.closed = chain.closed;
  if (!chain.closed) {
    rdp_open(pts, 0, pts.size() - 1, epsilon, out.vertices);
    out.vertices.push_back(pts.back());
    return out;
  }

  // Closed chain: split at the farthest vertex pair, simplify both arcs.
  const size_t n = pts.size();
  size_t bi = 0, bj = 1;
  int64_t best = -1;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const int64_t d = dist2(pts[i], pts[j]);
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  std::vector<Pixel> arc1(pts.begin() + bi, pts.begin() + bj + 1);
  std::vector<Pixel> arc2(pts.begin() + bj, pts.end());
  arc2.insert(arc2.end(), pts.begin(), pts.begin() + bi + 1);

  rdp_open(arc1, 0, arc1.size() - 1, epsilon, out.vertices);
  rdp_open(arc2, 0, arc2.size() - 1, epsilon, out.vertices);
  return out;
}

OrientedRect min_enclosing_rect(const ConvexHullResult& hull) {
  OrientedRect rect;
  if (hull.hull_vertices.empty()) {
    rect.degenerate = true;
    return rect;
  }
  if (hull.hull_vertices.size() == 1) {
    rect.degenerate = true;  // single pixel: (0, 0, 0) by convention
    return rect;
  }

  const std::vector<Pixel> corners = cell_hull(hull);
  const size_t n = corners.size();

  struct Candidate {
    int64_t dot_range = 0, cross_range = 0, len2 = 1;
    int dr = 0, dc = 0;
    bool valid = false;
  } best;

  for (size_t i = 0; i < n; ++i) {
    const Pixel a = corners[i];
    const Pixel b = corners[(i + 1) % n];
    const int dr = b.r - a.r, dc = b.c - a.c;
    if (dr == 0 && dc == 0) continue;
    const int64_t len2 = int64_t(dr) * dr + int64_t(dc) * dc;
    int64_t dmin = 0, dmax = 0, cmin = 0, cmax = 0;
    bool first = true;
    for (const Pixel& p : corners) {
      const int64_t dot = int64_t(dr) * p.r + int64_t(dc) * p.c;
      const int64_t crs = int64_t(dc) * p.r - int64_t(dr) * p.c;
      if (first) {
        dmin = dmax = dot;
        cmin = cmax = crs;
        first = false;
      } else {
        dmin = std::min(dmin, dot);
        dmax = std::max(dmax, dot);
        cmin = std::min(cmin, crs);
        cmax = std::max(cmax, crs);
      }
    }
    Candidate cand{dmax - dmin, cmax - cmin, len2, dr, dc, true};
    if (!best.valid) {
      best = cand;
      continue;
    }
    // area(cand) < area(best) compared exactly:
    // (Dc*Cc)/len2c < (Db*Cb)/len2b
    const __int128 lhs =
        __int128(cand.dot_range) * cand.cross_range * best.len2;
    const __int128 rhs =
        __int128(best.dot_range) * best.cross_range * cand.len2;
    if (lhs < rhs) best = cand;
  }

  const double inv_len = 1.0 / std::sqrt(double(best.len2));
  double along = double(best.dot_range) * inv_len;
  double across = double(best.cross_range) * inv_len;
  int adr = best.dr, adc = best.dc;
  if (across > along) {
    std::swap(along, across);
    // L runs perpendicular to the caliper edge.
    const int t = adr;
    adr = adc;
    adc = -t;
  }
  rect.length_l = along;
  rect.width_w = across;
  rect.square_tie = along == across;
  double angle = std::atan2(double(adr), double(adc)) * 180.0 / M_PI;
  angle = std::fmod(angle, 180.0);
  if (angle < 0) angle += 180.0;
  if (angle == 180.0) angle = 0.0;
  rect.angle_deg = angle;
  return rect;
}

}  // namespace shapesuite
