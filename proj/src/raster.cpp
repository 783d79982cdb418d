#include "shapesuite/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace shapesuite {

namespace {

// 8-neighborhood in clockwise screen order (row grows downward).
constexpr std::array<Pixel, 8> kDirs8 = {{{0, 1},
                                          {1, 1},
                                          {1, 0},
                                          {1, -1},
                                          {0, -1},
                                          {-1, -1},
                                          {-1, 0},
                                          {-1, 1}}};
constexpr std::array<Pixel, 4> kDirs4 = {{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};

int dir_index8(Pixel from, Pixel to) {
  for (int i = 0; i < 8; ++i) {
    if (from.r + kDirs8[i].r == to.r && from.c + kDirs8[i].c == to.c) return i;
  }
  throw std::logic_error("dir_index8: pixels are not 8-adjacent");
}

}  // namespace

int64_t Bitmap::count() const {
  return std::accumulate(data.begin(), data.end(), int64_t{0});
}

CrossAuraMap cross_aura(const LabelImage& img) {
  CrossAuraMap map;
  map.width = img.width;
  map.height = img.height;
  map.counts.assign(size_t(img.width) * img.height, 0);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const int32_t own = img.at(r, c);
      uint8_t n = 0;
      for (const Pixel& d : kDirs4) {
        const int rr = r + d.r, cc = c + d.c;
        if (!img.in_bounds(rr, cc) || img.at(rr, cc) != own) ++n;
      }
      map.counts[size_t(r) * img.width + c] = n;
    }
  }
  return map;
}

int64_t mask_cross_aura(const Bitmap& mask) {
  int64_t total = 0;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.at(r, c)) continue;
      for (const Pixel& d : kDirs4) {
        if (!mask.test(r + d.r, c + d.c)) ++total;
      }
    }
  }
  return total;
}

Bitmap fill_holes(const Bitmap& mask, int region_connectivity) {
  const int hole_conn = region_connectivity == 8 ? 4 : 8;
  const int w = mask.width + 2, h = mask.height + 2;
  // 0 = unknown clear, 1 = region, 2 = exterior
  std::vector<uint8_t> grid(size_t(w) * h, 0);
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.at(r, c)) grid[size_t(r + 1) * w + (c + 1)] = 1;

  std::vector<Pixel> stack;
  stack.push_back({0, 0});
  grid[0] = 2;
  const auto neighbors = hole_conn == 4 ? 4 : 8;
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    for (int i = 0; i < neighbors; ++i) {
      const Pixel d = hole_conn == 4 ? kDirs4[i] : kDirs8[i];
      const int rr = p.r + d.r, cc = p.c + d.c;
      if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
      uint8_t& cell = grid[size_t(rr) * w + cc];
      if (cell == 0) {
        cell = 2;
        stack.push_back({rr, cc});
      }
    }
  }
  Bitmap filled(mask.width, mask.height, 0);
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c)
      filled.at(r, c) = grid[size_t(r + 1) * w + (c + 1)] != 2;
  return filled;
}

std::vector<Pixel> trace_outer_boundary(const Bitmap& mask) {
  Pixel start{-1, -1};
  for (int r = 0; r < mask.height && start.r < 0; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.at(r, c)) {
        start = {r, c};
        break;
      }
  if (start.r < 0) return {};

  std::vector<Pixel> walk;
  walk.push_back(start);

  // Start is topmost-leftmost, so its west neighbor is clear. The walk
  // closes when a (pixel, exit-direction) state repeats: that marks one
  // full period of the deterministic traversal.
  Pixel cur = start, back{start.r, start.c - 1};
  std::map<std::pair<Pixel, int>, size_t> seen;
  const int64_t limit = 16 * int64_t(mask.width + 2) * (mask.height + 2) + 16;
  for (int64_t step = 0; step < limit; ++step) {
    const int bdir = dir_index8(cur, back);
    int exit_dir = -1;
    for (int i = 1; i <= 8; ++i) {
      const int k = (bdir + i) % 8;
      if (mask.test(cur.r + kDirs8[k].r, cur.c + kDirs8[k].c)) {
        exit_dir = k;
        break;
      }
    }
    if (exit_dir < 0) return walk;  // isolated pixel

    const auto [it, inserted] =
        seen.insert({{cur, exit_dir}, walk.size() - 1});
    if (!inserted)
      return std::vector<Pixel>(walk.begin() + it->second, walk.end());

    const int prev = (exit_dir + 7) % 8;
    back = {cur.r + kDirs8[prev].r, cur.c + kDirs8[prev].c};
    cur = {cur.r + kDirs8[exit_dir].r, cur.c + kDirs8[exit_dir].c};
    walk.push_back(cur);
  }
  throw std::logic_error("trace_outer_boundary: walk failed to close");
}

std::vector<Pixel> trace_outer_boundary(const Region& region) {
  std::vector<Pixel> walk = trace_outer_boundary(region.filled_mask);
  for (Pixel& p : walk) {
    p.r += region.bbox.min_r;
    p.c += region.bbox.min_c;
  }
  return walk;
}

std::pair<int64_t, int64_t> boundary_cross_aura_lengths(const Region& region) {
  return {mask_cross_aura(region.filled_mask), mask_cross_aura(region.mask)};
}

namespace {

Region build_region(int32_t label, const std::vector<Pixel>& pixels,
                    int connectivity) {
  Region reg;
  reg.label = label;
  reg.pixels = pixels;
  reg.connectivity = connectivity;
  std::sort(reg.pixels.begin(), reg.pixels.end());
  BBox box{pixels[0].r, pixels[0].c, pixels[0].r, pixels[0].c};
  for (const Pixel& p : pixels) {
    box.min_r = std::min(box.min_r, p.r);
    box.min_c = std::min(box.min_c, p.c);
    box.max_r = std::max(box.max_r, p.r);
    box.max_c = std::max(box.max_c, p.c);
  }
  reg.bbox = box;
  reg.area = int64_t(pixels.size());

  reg.mask = Bitmap(box.cols(), box.rows(), 0);
  for (const Pixel& p : reg.pixels) reg.mask.at(p.r - box.min_r, p.c - box.min_c) = 1;
  reg.filled_mask = fill_holes(reg.mask, connectivity);
  reg.filled_area = reg.filled_mask.count();

  // Hole components under the complement connectivity.
  const int hole_conn = connectivity == 8 ? 4 : 8;
  Bitmap hole_seen(reg.mask.width, reg.mask.height, 0);
  for (int r = 0; r < reg.mask.height; ++r) {
    for (int c = 0; c < reg.mask.width; ++c) {
      if (reg.mask.at(r, c) || !reg.filled_mask.at(r, c) || hole_seen.at(r, c))
        continue;
      ++reg.hole_count;
      std::vector<Pixel> hole;
      std::vector<Pixel> stack{{r, c}};
      hole_seen.at(r, c) = 1;
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        hole.push_back(p);
        const int n = hole_conn == 4 ? 4 : 8;
        for (int i = 0; i < n; ++i) {
          const Pixel d = hole_conn == 4 ? kDirs4[i] : kDirs8[i];
          const int rr = p.r + d.r, cc = p.c + d.c;
          if (!reg.mask.in_bounds(rr, cc) || hole_seen.at(rr, cc)) continue;
          if (reg.mask.at(rr, cc) || !reg.filled_mask.at(rr, cc)) continue;
          hole_seen.at(rr, cc) = 1;
          stack.push_back({rr, cc});
        }
      }
      Bitmap hole_mask(reg.mask.width, reg.mask.height, 0);
      for (const Pixel& p : hole) hole_mask.at(p.r, p.c) = 1;
      std::vector<Pixel> hwalk = trace_outer_boundary(hole_mask);
      for (Pixel& p : hwalk) {
        p.r += box.min_r;
        p.c += box.min_c;
      }
      reg.hole_boundaries.push_back(std::move(hwalk));
    }
  }

  reg.pl_external = mask_cross_aura(reg.filled_mask);
  reg.pl_total = mask_cross_aura(reg.mask);
  reg.outer_boundary = trace_outer_boundary(reg);
  return reg;
}

}  // namespace

std::vector<Region> extract_regions(const LabelImage& img,
                                    const ExtractOptions& opts) {
  if (img.width < 1 || img.height < 1)
    throw std::invalid_argument("extract_regions: empty image");
  if (opts.connectivity != 4 && opts.connectivity != 8)
    throw std::invalid_argument("extract_regions: connectivity must be 4 or 8");

  std::vector<uint8_t> seen(size_t(img.width) * img.height, 0);
  std::vector<Region> regions;
  const int nconn = opts.connectivity;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (seen[size_t(r) * img.width + c]) continue;
      const int32_t label = img.at(r, c);
      if (!opts.background_is_region && label == opts.background_label) {
        seen[size_t(r) * img.width + c] = 1;
        continue;
      }
      std::vector<Pixel> comp;
      std::vector<Pixel> stack{{r, c}};
      seen[size_t(r) * img.width + c] = 1;
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (int i = 0; i < nconn; ++i) {
          const Pixel d = nconn == 4 ? kDirs4[i] : kDirs8[i];
          const int rr = p.r + d.r, cc = p.c + d.c;
          if (!img.in_bounds(rr, cc)) continue;
          if (seen[size_t(rr) * img.width + cc] || img.at(rr, cc) != label)
            continue;
          seen[size_t(rr) * img.width + cc] = 1;
          stack.push_back({rr, cc});
        }
      }
      regions.push_back(build_region(label, comp, nconn));
    }
  }
  std::sort(regions.begin(), regions.end(),
            [](const Region& a, const Region& b) {
              if (a.label != b.label) return a.label < b.label;
              if (a.bbox != b.bbox) return a.bbox < b.bbox;
              return a.pixels.front() < b.pixels.front();
            });
  return regions;
}

// --- Grid isometries --------------------------------------------------------

Bitmap apply_transform(const Bitmap& mask, const DihedralTransform& t) {
  Bitmap cur = mask;
  if (t.flip) {
    Bitmap out(cur.width, cur.height, 0);
    for (int r = 0; r < cur.height; ++r)
      for (int c = 0; c < cur.width; ++c)
        out.at(r, cur.width - 1 - c) = cur.at(r, c);
    cur = std::move(out);
  }
  for (int k = 0; k < (t.rot & 3); ++k) {
    Bitmap out(cur.height, cur.width, 0);  // dims swap
    for (int r = 0; r < cur.height; ++r)
      for (int c = 0; c < cur.width; ++c)
        out.at(c, cur.height - 1 - r) = cur.at(r, c);
    cur = std::move(out);
  }
  return cur;
}

Pixel apply_transform(Pixel p, int width, int height,
                      const DihedralTransform& t) {
  int w = width, h = height;
  if (t.flip) p.c = w - 1 - p.c;
  for (int k = 0; k < (t.rot & 3); ++k) {
    p = {p.c, h - 1 - p.r};
    std::swap(w, h);
  }
  return p;
}

DihedralTransform canonical_transform(const Bitmap& mask) {
  DihedralTransform best;
  Bitmap best_map = mask;
  bool first = true;
  for (int flip = 0; flip < 2; ++flip) {
    for (int rot = 0; rot < 4; ++rot) {
      const DihedralTransform t{rot, flip != 0};
      Bitmap m = apply_transform(mask, t);
      const bool better =
          first || std::tie(m.width, m.height, m.data) <
                       std::tie(best_map.width, best_map.height, best_map.data);
      if (better) {
        best = t;
        best_map = std::move(m);
        first = false;
      }
    }
  }
  return best;
}

double map_angle_from_transformed(double angle_deg,
                                  const DihedralTransform& t) {
  double a = angle_deg - 90.0 * (t.rot & 3);
  if (t.flip) a = 180.0 - a;
  a = std::fmod(a, 180.0);
  if (a < 0) a += 180.0;
  if (a == 180.0) a = 0.0;
  return a;
}

}  // namespace shapesuite
