#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace shapesuite {

struct Pixel {
  int r = 0;
  int c = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Rectangular grid of non-negative integer labels, row-major.
/// Every pixel carries exactly one label; by convention label 0 is
/// background (configurable at extraction time).
struct LabelImage {
  int width = 0;
  int height = 0;
  std::vector<int32_t> labels;

  LabelImage() = default;
  LabelImage(int w, int h, int32_t fill = 0)
      : width(w), height(h), labels(size_t(w) * size_t(h), fill) {}

  int32_t at(int r, int c) const { return labels[size_t(r) * width + c]; }
  int32_t& at(int r, int c) { return labels[size_t(r) * width + c]; }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < height && c >= 0 && c < width;
  }
};

/// Binary mask, row-major, one byte per pixel (0 or 1).
struct Bitmap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  Bitmap() = default;
  Bitmap(int w, int h, uint8_t fill = 0)
      : width(w), height(h), data(size_t(w) * size_t(h), fill) {}

  uint8_t at(int r, int c) const { return data[size_t(r) * width + c]; }
  uint8_t& at(int r, int c) { return data[size_t(r) * width + c]; }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < height && c >= 0 && c < width;
  }
  /// Set-pixel test that treats out-of-image as clear.
  bool test(int r, int c) const { return in_bounds(r, c) && at(r, c) != 0; }
  int64_t count() const;
  friend bool operator==(const Bitmap&, const Bitmap&) = default;
};

/// Per-pixel count in [0,4] of 4-neighbors carrying a different label.
/// Out-of-image neighbors count as different.
struct CrossAuraMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> counts;

  uint8_t at(int r, int c) const { return counts[size_t(r) * width + c]; }
};

struct BBox {
  int min_r = 0;
  int min_c = 0;
  int max_r = -1;
  int max_c = -1;

  int rows() const { return max_r - min_r + 1; }
  int cols() const { return max_c - min_c + 1; }
  friend bool operator==(const BBox&, const BBox&) = default;
  friend auto operator<=>(const BBox&, const BBox&) = default;
};

/// One segment of a label image: a connected set of equal-label pixels
/// together with its boundary structure and cross-aura perimeters.
///
/// A hole is a connected component of non-region pixels fully enclosed by
/// the region (it may carry any other label). Components touching the
/// image border are exterior, never holes. Hole connectivity is the
/// complement of the region connectivity.
struct Region {
  int32_t label = 0;
  std::vector<Pixel> pixels;  // row-major order, image coordinates
  BBox bbox;
  int64_t area = 0;         // pixel count, holes excluded
  int64_t filled_area = 0;  // pixel count with holes filled
  int hole_count = 0;
  std::vector<Pixel> outer_boundary;  // closed Moore walk, image coords
  std::vector<std::vector<Pixel>> hole_boundaries;
  int64_t pl_external = 0;  // 4-adjacency cross-aura of the filled mask
  int64_t pl_total = 0;     // 4-adjacency cross-aura of the region mask
  int connectivity = 8;
  Bitmap mask;         // crop over bbox
  Bitmap filled_mask;  // crop over bbox, holes filled
};

struct ExtractOptions {
  int connectivity = 8;          // region connectivity, 4 or 8
  int32_t background_label = 0;  // skipped unless background_is_region
  bool background_is_region = false;
};

/// Decomposes a label image into connected same-label regions.
/// Regions are returned ordered by (label, bbox, first pixel), which is a
/// total deterministic order. An all-background image yields an empty list.
std::vector<Region> extract_regions(const LabelImage& img,
                                    const ExtractOptions& opts = {});

CrossAuraMap cross_aura(const LabelImage& img);

/// Moore boundary walk around the component holding the topmost-leftmost
/// set pixel. The walk is closed: front() == back() whenever it has more
/// than one entry; a single-pixel mask yields a length-1 walk. Pixels of
/// 1-pixel-wide parts appear twice (once per side).
std::vector<Pixel> trace_outer_boundary(const Bitmap& mask);

/// Region-level outer boundary in image coordinates (walks the filled
/// mask, so holes never perturb the contour).
std::vector<Pixel> trace_outer_boundary(const Region& region);

/// Sum over set pixels of 4-neighbors that are clear or out of image.
int64_t mask_cross_aura(const Bitmap& mask);

/// (pl_external, pl_total): cross-aura of the filled mask and of the
/// region mask. pl_external <= pl_total, equality iff hole-free.
std::pair<int64_t, int64_t> boundary_cross_aura_lengths(const Region& region);

/// Fills the enclosed non-region components; hole connectivity is the
/// complement of `region_connectivity`.
Bitmap fill_holes(const Bitmap& mask, int region_connectivity);

// --- Grid isometries -------------------------------------------------------
//
// Shape descriptors are computed in a canonical orientation of each region
// mask so that results are exactly invariant under 90-degree rotations and
// reflections of the input raster.

/// One of the 8 grid isometries: mirror columns first (if flip), then
/// rotate 90 degrees clockwise `rot` times (rot in 0..3).
struct DihedralTransform {
  int rot = 0;
  bool flip = false;
  bool identity() const { return rot == 0 && !flip; }
};

Bitmap apply_transform(const Bitmap& mask, const DihedralTransform& t);
Pixel apply_transform(Pixel p, int width, int height,
                      const DihedralTransform& t);

/// Transform minimizing the encoded bitmap lexicographically; ties are
/// broken by transform enumeration order (tied transforms produce the
/// same bitmap, so downstream results agree).
DihedralTransform canonical_transform(const Bitmap& mask);

/// Maps an orientation angle measured in the transformed frame back to
/// the source frame, mod 180 degrees. Angles follow atan2(dr, dc).
double map_angle_from_transformed(double angle_deg, const DihedralTransform& t);

}  // namespace shapesuite
