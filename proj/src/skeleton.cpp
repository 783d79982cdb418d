#include "shapesuite/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace shapesuite {

namespace {

constexpr std::array<Pixel, 8> kN8 = {{{0, 1},
                                       {1, 1},
                                       {1, 0},
                                       {1, -1},
                                       {0, -1},
                                       {-1, -1},
                                       {-1, 0},
                                       {-1, 1}}};

}  // namespace

double DistanceField::at(int r, int c) const {
  return std::sqrt(double(at2(r, c)));
}

DistanceField distance_transform(const Bitmap& mask) {
  const int w = mask.width, h = mask.height;
  DistanceField df;
  df.width = w;
  df.height = h;
  df.dist2.assign(size_t(w) * h, 0);
  if (w == 0 || h == 0) return df;

  // Vertical pixel distance to the nearest clear cell, counting the
  // implicit clear border beyond the image.
  std::vector<int64_t> g(size_t(w) * h, 0);
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) {
      const size_t i = size_t(r) * w + c;
      g[i] = mask.at(r, c) ? (r == 0 ? 1 : g[i - w] + 1) : 0;
    }
    for (int r = h - 1; r >= 0; --r) {
      const size_t i = size_t(r) * w + c;
      if (!mask.at(r, c)) continue;
      const int64_t below = r == h - 1 ? 1 : g[i + w] + 1;
      g[i] = std::min(g[i], below);
    }
  }

  // Row-wise lower envelope of parabolas (c - x)^2 + g(x)^2.
  std::vector<int> s(w), t(w);
  for (int r = 0; r < h; ++r) {
    const int64_t* gr = &g[size_t(r) * w];
    auto f = [&](int x, int i) {
      return int64_t(x - i) * (x - i) + gr[i] * gr[i];
    };
    auto sep = [&](int i, int u) {
      return (int64_t(u) * u - int64_t(i) * i + gr[u] * gr[u] -
              gr[i] * gr[i]) /
             (2 * int64_t(u - i));
    };
    int q = 0;
    s[0] = 0;
    t[0] = 0;
    for (int u = 1; u < w; ++u) {
      while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) --q;
      if (q < 0) {
        q = 0;
        s[0] = u;
        t[0] = 0;
      } else {
        const int64_t ww = 1 + sep(s[q], u);
        if (ww < w) {
          ++q;
          s[q] = u;
          t[q] = int(ww);
        }
      }
    }
    for (int u = w - 1; u >= 0; --u) {
      int64_t d = f(u, s[q]);
      // Clear border columns just outside the image.
      d = std::min(d, int64_t(u + 1) * (u + 1));
      d = std::min(d, int64_t(w - u) * (w - u));
      df.dist2[size_t(r) * w + u] = mask.at(r, u) ? d : 0;
      if (q > 0 && u == t[q]) --q;
    }
  }
  return df;
}

namespace {

// (8, 4) simple-point lookup: bit i of the key is kN8[i] set.
const std::array<bool, 256>& simple_point_lut() {
  static const std::array<bool, 256> lut = [] {
    std::array<bool, 256> out{};
    // Ring adjacency between the 8 neighbor slots.
    auto adjacent8 = [](int a, int b) {
      const int dr = kN8[a].r - kN8[b].r, dc = kN8[a].c - kN8[b].c;
      return std::abs(dr) <= 1 && std::abs(dc) <= 1;
    };
    auto adjacent4 = [](int a, int b) {
      const int dr = kN8[a].r - kN8[b].r, dc = kN8[a].c - kN8[b].c;
      return std::abs(dr) + std::abs(dc) == 1;
    };
    for (int m = 0; m < 256; ++m) {
      // Count 8-components of set ring cells.
      int fg_comp = 0;
      std::array<bool, 8> seen{};
      for (int i = 0; i < 8; ++i) {
        if (!(m >> i & 1) || seen[i]) continue;
        ++fg_comp;
        std::array<int, 8> stack{};
        int top = 0;
        stack[top++] = i;
        seen[i] = true;
        while (top > 0) {
          const int cur = stack[--top];
          for (int j = 0; j < 8; ++j) {
            if ((m >> j & 1) && !seen[j] && adjacent8(cur, j)) {
              seen[j] = true;
              stack[top++] = j;
            }
          }
        }
      }
      // Count 4-components of clear ring cells touching a 4-neighbor slot.
      int bg_comp = 0;
      std::array<bool, 8> bseen{};
      for (int i : {0, 2, 4, 6}) {
        if ((m >> i & 1) || bseen[i]) continue;
        ++bg_comp;
        std::array<int, 8> stack{};
        int top = 0;
        stack[top++] = i;
        bseen[i] = true;
        while (top > 0) {
          const int cur = stack[--top];
          for (int j = 0; j < 8; ++j) {
            if (!(m >> j & 1) && !bseen[j] && adjacent4(cur, j)) {
              bseen[j] = true;
              stack[top++] = j;
            }
          }
        }
      }
      out[m] = fg_comp == 1 && bg_comp == 1;
    }
    return out;
  }();
  return lut;
}

int neighborhood_key(const Bitmap& b, int r, int c) {
  int key = 0;
  for (int i = 0; i < 8; ++i)
    if (b.test(r + kN8[i].r, c + kN8[i].c)) key |= 1 << i;
  return key;
}

// Discrete maximal-ball bookkeeping. ball(p) = {z : |z-p|^2 < dist2(p)};
// p is removable when a nearby pixel's ball contains its ball exactly.
class BallCoverTester {
 public:
  // Containment test ball(p, b) subset-of ball(q, a) with offset v = q-p:
  // max over disk offsets o (|o|^2 <= b-1) of |o-v|^2 must stay below a.
  bool covered(const Bitmap& mask, const DistanceField& df, int r, int c) {
    const int64_t b = df.at2(r, c);
    const auto& table = reach_table(b);
    int idx = 0;
    for (int dr = -kWin; dr <= kWin; ++dr) {
      for (int dc = -kWin; dc <= kWin; ++dc, ++idx) {
        if (dr == 0 && dc == 0) continue;
        const int rr = r + dr, cc = c + dc;
        if (!mask.test(rr, cc)) continue;
        const int64_t a = df.at2(rr, cc);
        if (a > b && table[size_t(idx)] < a) return true;
      }
    }
    return false;
  }

 private:
  static constexpr int kWin = 5;  // candidate covering centers, 11x11

  // For one squared radius b, the farthest squared distance from each
  // candidate offset v to any ball member. |o-v|^2 separates per row:
  // given the row o_r, the best column is the extreme one away from v_c,
  // so each entry costs one scan over rows.
  const std::vector<int64_t>& reach_table(int64_t b) {
    auto it = cache_.find(b);
    if (it != cache_.end()) return it->second;
    const int side = 2 * kWin + 1;
    std::vector<int64_t> table(size_t(side) * side, 0);
    int radius = int(std::sqrt(double(b - 1)));
    while (int64_t(radius + 1) * (radius + 1) <= b - 1) ++radius;
    while (int64_t(radius) * radius > b - 1) --radius;
    for (int orr = -radius; orr <= radius; ++orr) {
      const int64_t row_budget = b - 1 - int64_t(orr) * orr;
      int cmax = int(std::sqrt(double(row_budget)));
      while (int64_t(cmax + 1) * (cmax + 1) <= row_budget) ++cmax;
      while (int64_t(cmax) * cmax > row_budget) --cmax;
      int idx = 0;
      for (int dr = -kWin; dr <= kWin; ++dr) {
        for (int dc = -kWin; dc <= kWin; ++dc, ++idx) {
          const int occ = dc >= 0 ? -cmax : cmax;  // farthest column from v
          const int64_t d = int64_t(orr - dr) * (orr - dr) +
                            int64_t(occ - dc) * (occ - dc);
          table[size_t(idx)] = std::max(table[size_t(idx)], d);
        }
      }
    }
    return cache_.emplace(b, std::move(table)).first->second;
  }

  std::map<int64_t, std::vector<int64_t>> cache_;
};

int skeleton_degree(const Bitmap& b, int r, int c) {
  int deg = 0;
  for (const Pixel& d : kN8)
    if (b.test(r + d.r, c + d.c)) ++deg;
  return deg;
}

void prune_spurs(Bitmap& skel, double filter_param) {
  if (filter_param <= 0) return;
  const int limit = int(filter_param);
  if (limit < 1) return;
  for (int r = 0; r < skel.height; ++r) {
    for (int c = 0; c < skel.width; ++c) {
      if (!skel.at(r, c) || skeleton_degree(skel, r, c) > 1) continue;
      // Walk from the endpoint toward a junction.
      std::vector<Pixel> chain;
      Pixel cur{r, c}, prev{-9, -9};
      bool at_junction = false;
      while (int(chain.size()) <= limit) {
        chain.push_back(cur);
        Pixel next{-1, -1};
        int others = 0;
        for (const Pixel& d : kN8) {
          const Pixel q{cur.r + d.r, cur.c + d.c};
          if (!skel.test(q.r, q.c) || q == prev) continue;
          ++others;
          next = q;
        }
        if (others == 0) break;  // isolated path, not a spur
        if (others > 1) {
          // `cur` is itself a junction approached from the spur side.
          chain.pop_back();
          at_junction = true;
          break;
        }
        if (skeleton_degree(skel, next.r, next.c) > 2) {
          at_junction = true;
          break;
        }
        prev = cur;
        cur = next;
      }
      if (at_junction && !chain.empty() && int(chain.size()) <= limit) {
        for (const Pixel& p : chain) skel.at(p.r, p.c) = 0;
      }
    }
  }
}

}  // namespace

Skeleton euclidean_skeleton(const Bitmap& mask, double filter_param) {
  const DistanceField df = distance_transform(mask);
  Bitmap skel = mask;
  const auto& lut = simple_point_lut();

  // Pixels whose maximal ball is covered by a neighbor's may be thinned
  // away; uncovered pixels anchor the medial axis.
  BallCoverTester tester;
  std::vector<uint8_t> removable(size_t(mask.width) * mask.height, 0);
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.at(r, c))
        removable[size_t(r) * mask.width + c] = tester.covered(mask, df, r, c);

  // Thin outward-in: per distance level in fixed row-major order, then a
  // final full fixpoint sweep for stragglers the level ordering missed.
  std::map<int64_t, std::vector<Pixel>> by_level;
  for (int r = 0; r < mask.height; ++r)
    for (int c = 0; c < mask.width; ++c)
      if (mask.at(r, c)) by_level[df.at2(r, c)].push_back({r, c});

  auto try_remove = [&](int r, int c) {
    if (!skel.at(r, c)) return false;
    if (!removable[size_t(r) * skel.width + c]) return false;  // anchor
    if (!lut[neighborhood_key(skel, r, c)]) return false;      // not simple
    skel.at(r, c) = 0;
    return true;
  };

  for (const auto& [level, pixels] : by_level) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Pixel& p : pixels) changed |= try_remove(p.r, p.c);
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r < skel.height; ++r)
      for (int c = 0; c < skel.width; ++c) changed |= try_remove(r, c);
  }

  prune_spurs(skel, filter_param);
  return Skeleton{std::move(skel), filter_param};
}

SkeletonPath longest_skeleton_path(const Skeleton& skel) {
  SkeletonPath out;
  const Bitmap& b = skel.pixels;
  std::vector<Pixel> nodes;
  std::map<Pixel, int> id;
  for (int r = 0; r < b.height; ++r)
    for (int c = 0; c < b.width; ++c)
      if (b.at(r, c)) {
        id[{r, c}] = int(nodes.size());
        nodes.push_back({r, c});
      }
  if (nodes.empty()) return out;

  const int n = int(nodes.size());
  std::vector<std::vector<int>> adj(n);
  int64_t edges = 0;
  for (int i = 0; i < n; ++i) {
    for (const Pixel& d : kN8) {
      const Pixel q{nodes[i].r + d.r, nodes[i].c + d.c};
      auto it = id.find(q);
      if (it != id.end()) {
        adj[i].push_back(it->second);
        if (it->second > i) ++edges;
      }
    }
  }

  // Component of the lexicographically smallest pixel.
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<int> stack{i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (int j : adj[cur])
        if (comp[j] < 0) {
          comp[j] = ncomp;
          stack.push_back(j);
        }
    }
    ++ncomp;
  }
  out.heuristic = edges - n + ncomp > 0;

  auto bfs = [&](int src, std::vector<int>& dist, std::vector<int>& parent) {
    dist.assign(n, -1);
    parent.assign(n, -1);
    std::deque<int> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      for (int j : adj[cur]) {
        if (dist[j] < 0) {
          dist[j] = dist[cur] + 1;
          parent[j] = cur;
          queue.push_back(j);
        }
      }
    }
    int best = src;
    for (int i = 0; i < n; ++i) {
      if (comp[i] != comp[src] || dist[i] < 0) continue;
      if (dist[i] > dist[best] ||
          (dist[i] == dist[best] && nodes[i] < nodes[best]))
        best = i;
    }
    return best;
  };

  std::vector<int> dist, parent;
  const int u = bfs(0, dist, parent);
  const int v = bfs(u, dist, parent);
  for (int cur = v; cur >= 0; cur = parent[cur]) out.pixels.push_back(nodes[cur]);
  std::reverse(out.pixels.begin(), out.pixels.end());
  return out;
}

SkeletonMetrics skeleton_metrics(const Skeleton& skel,
                                 const DistanceField& df) {
  SkeletonMetrics m;
  const Bitmap& b = skel.pixels;
  if (b.width != df.width || b.height != df.height)
    throw std::invalid_argument(
        "skeleton_metrics: distance field does not match skeleton");
  double wsum = 0.0;
  for (int r = 0; r < b.height; ++r) {
    for (int c = 0; c < b.width; ++c) {
      if (!b.at(r, c)) continue;
      ++m.l_total;
      wsum += 2.0 * df.at(r, c) - 1.0;
    }
  }
  if (m.l_total > 0) m.w_avg = wsum / double(m.l_total);

  const SkeletonPath path = longest_skeleton_path(skel);
  m.path_heuristic = path.heuristic;
  m.l_longest = int64_t(path.pixels.size());
  double psum = 0.0;
  for (const Pixel& p : path.pixels) psum += 2.0 * df.at(p.r, p.c) - 1.0;
  if (m.l_longest > 0) m.w_longest_avg = psum / double(m.l_longest);
  return m;
}

}  // namespace shapesuite
