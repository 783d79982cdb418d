#pragma once

#include <cstdint>
#include <vector>

#include "shapesuite/raster.hpp"

namespace shapesuite {

/// Single-channel intensity image, non-negative values up to 16 bits.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<int32_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, int32_t fill = 0)
      : width(w), height(h), pixels(size_t(w) * size_t(h), fill) {}

  int32_t at(int r, int c) const { return pixels[size_t(r) * width + c]; }
  int32_t& at(int r, int c) { return pixels[size_t(r) * width + c]; }
  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Min (max) over the (2*half_size+1)^2 window, two separable 1D passes.
/// Out-of-image samples are neutral, so border structures are not eroded
/// (or dilated) against the frame.
GrayImage erode_square(const GrayImage& img, int half_size);
GrayImage dilate_square(const GrayImage& img, int half_size);

/// Grayscale reconstruction fixpoints over 8-neighborhoods, computed with
/// a single ordered downhill (uphill) pass. Dilation requires
/// marker <= mask pointwise, erosion the dual.
GrayImage reconstruct_by_dilation(const GrayImage& marker,
                                  const GrayImage& mask);
GrayImage reconstruct_by_erosion(const GrayImage& marker,
                                 const GrayImage& mask);

GrayImage opening_by_reconstruction(const GrayImage& img, int scale);
GrayImage closing_by_reconstruction(const GrayImage& img, int scale);

/// Opening/closing-by-reconstruction profiles over the dyadic scale
/// sequence 0, 1, 3, 5, 9, ... (scale_i = 2^(i-1)+1 for i >= 2), with
/// per-scale derivatives normalized by the scale gaps.
struct MorphProfileStack {
  int width = 0;
  int height = 0;
  std::vector<int> scales;                  // n+1 entries, scales[0] == 0
  std::vector<GrayImage> opening_profile;   // n+1 images
  std::vector<GrayImage> closing_profile;   // n+1 images
  std::vector<std::vector<double>> d_open;  // n per-pixel planes
  std::vector<std::vector<double>> d_close;
};

MorphProfileStack dmp(const GrayImage& img, int depth);

/// Signed scale of the strongest profile response: +scale when the
/// opening derivative dominates, -scale when the closing one does, 0 on
/// exact ties. Comparisons run in exact integer arithmetic.
struct CharacteristicMap {
  int width = 0;
  int height = 0;
  std::vector<int32_t> phi;

  int32_t at(int r, int c) const { return phi[size_t(r) * width + c]; }
};

CharacteristicMap multiscale_characteristic(const MorphProfileStack& stack);

/// Mean of |phi| over the region pixels. Mixed signs inside one segment
/// are reported through `mixed_signs` when provided.
double segment_average_characteristic(const CharacteristicMap& cmap,
                                      const Region& region,
                                      bool* mixed_signs = nullptr);

// --- Reference local indicators of spatial association ---------------------

struct SpatialWeights {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> neighbors;

  explicit SpatialWeights(int units = 0) : n(units), neighbors(units) {}
  void add_symmetric(int i, int j, double w);
  double total() const;  // sum over ordered pairs

  /// Binary 4-adjacency contiguity over a height x width grid of units.
  static SpatialWeights grid4(int height, int width);
};

struct LisaResult {
  double global = 0.0;
  std::vector<double> local;
};

/// Global and per-unit autocovariance ratio; -1 is perfect inverse
/// autocorrelation, +1 perfect positive, 0 a random pattern.
LisaResult morans_i(const std::vector<double>& values,
                    const SpatialWeights& w);

/// Squared-difference form; 1 means no autocorrelation, values below 1
/// positive autocorrelation, up to 2 inverse.
LisaResult gearys_c(const std::vector<double>& values,
                    const SpatialWeights& w);

/// 1 - min(C, 2), mapping Geary's C onto the [-1, 1] range.
double reversed_gearys_c(double gearys_c_global);

}  // namespace shapesuite
