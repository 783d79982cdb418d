#include "shapesuite/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace shapesuite {

namespace {

struct Stamp {
  int width = 0;
  int height = 0;
  std::function<bool(int r, int c)> inside;  // local coordinates
};

Stamp solid_rect(int h, int w) {
  return {w, h, [](int, int) { return true; }};
}

Stamp annulus(int outer, int hole) {
  const int lo = (outer - hole) / 2;
  return {outer, outer, [=](int r, int c) {
            const bool in_hole = r >= lo && r < lo + hole && c >= lo &&
                                 c < lo + hole;
            return !in_hole;
          }};
}

Stamp ell(int size, int arm) {
  return {size, size,
          [=](int r, int c) { return c < arm || r >= size - arm; }};
}

Stamp tee(int size, int arm) {
  const int mid = (size - arm) / 2;
  return {size, size,
          [=](int r, int c) { return r < arm || (c >= mid && c < mid + arm); }};
}

Stamp plus_sign(int size, int arm) {
  const int mid = (size - arm) / 2;
  return {size, size, [=](int r, int c) {
            return (r >= mid && r < mid + arm) || (c >= mid && c < mid + arm);
          }};
}

Stamp disk(int radius) {
  const int d = 2 * radius + 1;
  return {d, d, [=](int r, int c) {
            const double dr = r - radius, dc = c - radius;
            return dr * dr + dc * dc <= double(radius) * radius;
          }};
}

Stamp rotated_rect(int half_l, int half_w, double angle_deg) {
  const double rad = angle_deg * M_PI / 180.0;
  const double ca = std::cos(rad), sa = std::sin(rad);
  const int ext = int(std::ceil(std::hypot(half_l, half_w))) + 1;
  const int d = 2 * ext + 1;
  return {d, d, [=](int r, int c) {
            const double y = r - ext, x = c - ext;
            // Rotate pixel center back into the rectangle frame.
            const double u = x * ca + y * sa;
            const double v = -x * sa + y * ca;
            return std::abs(u) <= half_l && std::abs(v) <= half_w;
          }};
}

std::vector<Stamp> stamps_for(const std::string& set_name) {
  std::vector<Stamp> out;
  if (set_name == "squares") {
    for (int n : {1, 2, 4, 8, 16}) out.push_back(solid_rect(n, n));
  } else if (set_name == "bars") {
    out.push_back(solid_rect(1, 9));
    out.push_back(solid_rect(1, 20));
    out.push_back(solid_rect(2, 14));
    out.push_back(solid_rect(3, 30));
  } else if (set_name == "donuts") {
    out.push_back(annulus(3, 1));
    out.push_back(annulus(9, 3));
    out.push_back(annulus(15, 5));
  } else if (set_name == "ltcross") {
    out.push_back(ell(12, 4));
    out.push_back(tee(12, 4));
    out.push_back(plus_sign(13, 3));
  } else if (set_name == "rotrects") {
    for (int a = 0; a < 180; a += 15) out.push_back(rotated_rect(15, 6, a));
  } else if (set_name == "disks") {
    for (int r : {5, 10, 20}) out.push_back(disk(r));
  } else if (set_name == "all") {
    for (const char* name :
         {"squares", "bars", "donuts", "ltcross", "rotrects", "disks"}) {
      auto sub = stamps_for(name);
      out.insert(out.end(), std::make_move_iterator(sub.begin()),
                 std::make_move_iterator(sub.end()));
    }
  } else {
    throw std::invalid_argument("unknown shape set: " + set_name);
  }
  return out;
}

}  // namespace

std::vector<std::string> synth_set_names() {
  return {"squares", "bars", "donuts", "ltcross", "rotrects", "disks", "all"};
}

SynthResult synth_shapes(const std::string& set_name, int canvas_width) {
  const std::vector<Stamp> stamps = stamps_for(set_name);
  const int margin = 6;
  const int wrap = std::max(canvas_width, 64);

  // Row-wrapping layout pass.
  struct Placed {
    int r, c;
    const Stamp* stamp;
  };
  std::vector<Placed> placed;
  int cur_r = margin, cur_c = margin, row_h = 0, canvas_w = wrap;
  for (const Stamp& s : stamps) {
    if (cur_c + s.width + margin > wrap && cur_c > margin) {
      cur_r += row_h + margin;
      cur_c = margin;
      row_h = 0;
    }
    placed.push_back({cur_r, cur_c, &s});
    cur_c += s.width + margin;
    row_h = std::max(row_h, s.height);
    canvas_w = std::max(canvas_w, cur_c);
  }
  const int canvas_h = cur_r + row_h + margin;

  SynthResult out;
  out.labels = LabelImage(canvas_w, canvas_h, 0);
  out.gray = GrayImage(canvas_w, canvas_h, 0);
  int32_t label = 0;
  for (const Placed& p : placed) {
    ++label;
    const int32_t intensity = 60 + (label * 35) % 180;
    for (int r = 0; r < p.stamp->height; ++r) {
      for (int c = 0; c < p.stamp->width; ++c) {
        if (!p.stamp->inside(r, c)) continue;
        out.labels.at(p.r + r, p.c + c) = label;
        out.gray.at(p.r + r, p.c + c) = intensity;
      }
    }
  }
  return out;
}

}  // namespace shapesuite
