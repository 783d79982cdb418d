#include "shapesuite/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace shapesuite {

namespace {

constexpr Pixel kN8[8] = {{0, 1}, {1, 1},   {1, 0},  {1, -1},
                          {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};

template <typename Cmp>
void sliding_extreme_rows(const GrayImage& in, GrayImage& out, int half,
                          Cmp better) {
  // Monotone deque of column indices per row.
  for (int r = 0; r < in.height; ++r) {
    std::deque<int> dq;
    for (int c = 0; c < in.width + half; ++c) {
      if (c < in.width) {
        while (!dq.empty() && !better(in.at(r, dq.back()), in.at(r, c)))
          dq.pop_back();
        dq.push_back(c);
      }
      const int target = c - half;  // window center now fully decided
      if (target < 0) continue;
      while (dq.front() < target - half) dq.pop_front();
      out.at(r, target) = in.at(r, dq.front());
    }
  }
}

template <typename Cmp>
void sliding_extreme_cols(const GrayImage& in, GrayImage& out, int half,
                          Cmp better) {
  for (int c = 0; c < in.width; ++c) {
    std::deque<int> dq;
    for (int r = 0; r < in.height + half; ++r) {
      if (r < in.height) {
        while (!dq.empty() && !better(in.at(dq.back(), c), in.at(r, c)))
          dq.pop_back();
        dq.push_back(r);
      }
      const int target = r - half;
      if (target < 0) continue;
      while (dq.front() < target - half) dq.pop_front();
      out.at(target, c) = in.at(dq.front(), c);
    }
  }
}

template <typename Cmp>
GrayImage square_filter(const GrayImage& img, int half, Cmp better) {
  if (half == 0) return img;
  GrayImage tmp(img.width, img.height), out(img.width, img.height);
  sliding_extreme_rows(img, tmp, half, better);
  sliding_extreme_cols(tmp, out, half, better);
  return out;
}

void check_same_dims(const GrayImage& a, const GrayImage& b,
                     const char* what) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

GrayImage erode_square(const GrayImage& img, int half_size) {
  if (half_size < 0) throw std::invalid_argument("erode_square: half_size < 0");
  return square_filter(img, half_size,
                       [](int32_t kept, int32_t cand) { return kept < cand; });
}

GrayImage dilate_square(const GrayImage& img, int half_size) {
  if (half_size < 0)
    throw std::invalid_argument("dilate_square: half_size < 0");
  return square_filter(img, half_size,
                       [](int32_t kept, int32_t cand) { return kept > cand; });
}

GrayImage reconstruct_by_dilation(const GrayImage& marker,
                                  const GrayImage& mask) {
  check_same_dims(marker, mask, "reconstruct_by_dilation");
  int32_t maxv = 0;
  for (size_t i = 0; i < mask.pixels.size(); ++i) {
    if (marker.pixels[i] > mask.pixels[i])
      throw std::invalid_argument(
          "reconstruct_by_dilation: marker exceeds mask");
    maxv = std::max(maxv, mask.pixels[i]);
  }

  GrayImage out = marker;
  std::vector<std::vector<int>> bucket(size_t(maxv) + 1);
  for (int i = 0; i < int(out.pixels.size()); ++i)
    bucket[out.pixels[i]].push_back(i);

  const int w = out.width, h = out.height;
  for (int32_t v = maxv; v >= 1; --v) {
    auto& q = bucket[v];
    for (size_t qi = 0; qi < q.size(); ++qi) {
      const int p = q[qi];
      if (out.pixels[p] != v) continue;  // stale entry
      const int r = p / w, c = p % w;
      for (const Pixel& d : kN8) {
        const int rr = r + d.r, cc = c + d.c;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        const int np = rr * w + cc;
        const int32_t cand = std::min(v, mask.pixels[np]);
        if (cand > out.pixels[np]) {
          out.pixels[np] = cand;
          bucket[cand].push_back(np);
        }
      }
    }
    q.clear();
  }
  return out;
}

GrayImage reconstruct_by_erosion(const GrayImage& marker,
                                 const GrayImage& mask) {
  check_same_dims(marker, mask, "reconstruct_by_erosion");
  int32_t maxv = 0;
  for (size_t i = 0; i < mask.pixels.size(); ++i) {
    if (marker.pixels[i] < mask.pixels[i])
      throw std::invalid_argument(
          "reconstruct_by_erosion: marker below mask");
    maxv = std::max(maxv, marker.pixels[i]);
  }

  GrayImage out = marker;
  std::vector<std::vector<int>> bucket(size_t(maxv) + 1);
  for (int i = 0; i < int(out.pixels.size()); ++i)
    bucket[out.pixels[i]].push_back(i);

  const int w = out.width, h = out.height;
  for (int32_t v = 0; v < maxv; ++v) {
    auto& q = bucket[v];
    for (size_t qi = 0; qi < q.size(); ++qi) {
      const int p = q[qi];
      if (out.pixels[p] != v) continue;
      const int r = p / w, c = p % w;
      for (const Pixel& d : kN8) {
        const int rr = r + d.r, cc = c + d.c;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        const int np = rr * w + cc;
        const int32_t cand = std::max(v, mask.pixels[np]);
        if (cand < out.pixels[np]) {
          out.pixels[np] = cand;
          bucket[cand].push_back(np);
        }
      }
    }
    q.clear();
  }
  return out;
}

GrayImage opening_by_reconstruction(const GrayImage& img, int scale) {
  if (scale < 0)
    throw std::invalid_argument("opening_by_reconstruction: scale < 0");
  if (scale == 0) return img;
  return reconstruct_by_dilation(erode_square(img, scale), img);
}

GrayImage closing_by_reconstruction(const GrayImage& img, int scale) {
  if (scale < 0)
    throw std::invalid_argument("closing_by_reconstruction: scale < 0");
  if (scale == 0) return img;
  return reconstruct_by_erosion(dilate_square(img, scale), img);
}

MorphProfileStack dmp(const GrayImage& img, int depth) {
  if (depth < 1) throw std::invalid_argument("dmp: depth must be >= 1");
  MorphProfileStack stack;
  stack.width = img.width;
  stack.height = img.height;
  stack.scales.resize(depth + 1);
  stack.scales[0] = 0;
  for (int i = 1; i <= depth; ++i)
    stack.scales[i] = i == 1 ? 1 : (1 << (i - 1)) + 1;

  stack.opening_profile.reserve(depth + 1);
  stack.closing_profile.reserve(depth + 1);
  for (int i = 0; i <= depth; ++i) {
    stack.opening_profile.push_back(
        opening_by_reconstruction(img, stack.scales[i]));
    stack.closing_profile.push_back(
        closing_by_reconstruction(img, stack.scales[i]));
  }

  const size_t npx = img.pixels.size();
  for (int i = 1; i <= depth; ++i) {
    const double gap = stack.scales[i] - stack.scales[i - 1];
    std::vector<double> dop(npx), dcl(npx);
    for (size_t p = 0; p < npx; ++p) {
      dop[p] = std::abs(stack.opening_profile[i].pixels[p] -
                        stack.opening_profile[i - 1].pixels[p]) /
               gap;
      dcl[p] = std::abs(stack.closing_profile[i].pixels[p] -
                        stack.closing_profile[i - 1].pixels[p]) /
               gap;
    }
    stack.d_open.push_back(std::move(dop));
    stack.d_close.push_back(std::move(dcl));
  }
  return stack;
}

CharacteristicMap multiscale_characteristic(const MorphProfileStack& stack) {
  CharacteristicMap map;
  map.width = stack.width;
  map.height = stack.height;
  const size_t npx = size_t(stack.width) * stack.height;
  map.phi.assign(npx, 0);

  const int n = int(stack.scales.size()) - 1;
  // Scale gaps are powers of two; normalize diffs onto a common integer
  // denominator so suprema compare exactly.
  std::vector<int64_t> mult(n + 1, 0);
  int64_t max_gap = 1;
  for (int i = 1; i <= n; ++i)
    max_gap = std::max<int64_t>(max_gap, stack.scales[i] - stack.scales[i - 1]);
  for (int i = 1; i <= n; ++i)
    mult[i] = max_gap / (stack.scales[i] - stack.scales[i - 1]);

  for (size_t p = 0; p < npx; ++p) {
    int64_t best_open = 0, best_close = 0;
    int scale_open = 0, scale_close = 0;
    for (int i = 1; i <= n; ++i) {
      const int64_t dop = std::abs(int64_t(stack.opening_profile[i].pixels[p]) -
                                   stack.opening_profile[i - 1].pixels[p]) *
                          mult[i];
      const int64_t dcl = std::abs(int64_t(stack.closing_profile[i].pixels[p]) -
                                   stack.closing_profile[i - 1].pixels[p]) *
                          mult[i];
      if (dop > best_open) {
        best_open = dop;
        scale_open = stack.scales[i];
      }
      if (dcl > best_close) {
        best_close = dcl;
        scale_close = stack.scales[i];
      }
    }
    if (best_open > best_close)
      map.phi[p] = scale_open;
    else if (best_close > best_open)
      map.phi[p] = -scale_close;
  }
  return map;
}

double segment_average_characteristic(const CharacteristicMap& cmap,
                                      const Region& region,
                                      bool* mixed_signs) {
  if (region.pixels.empty())
    throw std::invalid_argument(
        "segment_average_characteristic: empty region");
  int64_t sum = 0;
  bool pos = false, neg = false;
  for (const Pixel& p : region.pixels) {
    const int32_t v = cmap.at(p.r, p.c);
    sum += std::abs(v);
    pos = pos || v > 0;
    neg = neg || v < 0;
  }
  if (mixed_signs) *mixed_signs = pos && neg;
  return double(sum) / double(region.pixels.size());
}

// --- LISA -------------------------------------------------------------------

void SpatialWeights::add_symmetric(int i, int j, double w) {
  if (i == j) throw std::invalid_argument("SpatialWeights: w_ii must be 0");
  neighbors[i].push_back({j, w});
  neighbors[j].push_back({i, w});
}

double SpatialWeights::total() const {
  double s = 0.0;
  for (const auto& row : neighbors)
    for (const auto& [j, w] : row) s += w;
  return s;
}

SpatialWeights SpatialWeights::grid4(int height, int width) {
  SpatialWeights w(height * width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const int i = r * width + c;
      if (c + 1 < width) w.add_symmetric(i, i + 1, 1.0);
      if (r + 1 < height) w.add_symmetric(i, i + width, 1.0);
    }
  }
  return w;
}

namespace {

double centered_square_sum(const std::vector<double>& x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s;
}

void check_lisa_inputs(const std::vector<double>& values,
                       const SpatialWeights& w, double ssq) {
  if (int(values.size()) != w.n)
    throw std::invalid_argument("LISA: weights/value size mismatch");
  if (values.size() < 2)
    throw std::invalid_argument("LISA: need at least two units");
  if (ssq == 0.0)
    throw std::invalid_argument("LISA: zero variance is undefined");
}

}  // namespace

LisaResult morans_i(const std::vector<double>& values,
                    const SpatialWeights& w) {
  const int n = int(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  const double ssq = centered_square_sum(values, mean);
  check_lisa_inputs(values, w, ssq);

  LisaResult res;
  res.local.resize(n, 0.0);
  double wsum = 0.0, num = 0.0;
  for (int i = 0; i < n; ++i) {
    double row_w = 0.0, row_num = 0.0;
    for (const auto& [j, wij] : w.neighbors[i]) {
      row_w += wij;
      row_num += wij * (values[i] - mean) * (values[j] - mean);
    }
    wsum += row_w;
    num += row_num;
    res.local[i] = row_w > 0.0 ? (row_num / row_w) / ssq : 0.0;
  }
  if (wsum == 0.0)
    throw std::invalid_argument("LISA: weight matrix is all zero");
  res.global = (double(n) / wsum) * (num / ssq);
  return res;
}

LisaResult gearys_c(const std::vector<double>& values,
                    const SpatialWeights& w) {
  const int n = int(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  const double ssq = centered_square_sum(values, mean);
  check_lisa_inputs(values, w, ssq);

  LisaResult res;
  res.local.resize(n, 0.0);
  double wsum = 0.0, num = 0.0;
  for (int i = 0; i < n; ++i) {
    double row_w = 0.0, row_num = 0.0;
    for (const auto& [j, wij] : w.neighbors[i]) {
      const double diff = values[i] - values[j];
      row_w += wij;
      row_num += wij * diff * diff;
    }
    wsum += row_w;
    num += row_num;
    res.local[i] = row_w > 0.0 ? (row_num / (2.0 * row_w)) / ssq : 0.0;
  }
  if (wsum == 0.0)
    throw std::invalid_argument("LISA: weight matrix is all zero");
  res.global = (double(n) / (2.0 * wsum)) * (num / ssq);
  return res;
}

double reversed_gearys_c(double gearys_c_global) {
  return 1.0 - std::min(gearys_c_global, 2.0);
}

}  // namespace shapesuite
