#pragma once

#include <string>
#include <vector>

#include "shapesuite/morphology.hpp"
#include "shapesuite/raster.hpp"

namespace shapesuite {

/// A label raster plus a gray companion (shapes carry per-label
/// intensities over a dark background).
struct SynthResult {
  LabelImage labels;
  GrayImage gray;
};

std::vector<std::string> synth_set_names();

/// Deterministic test-shape suites: solid squares (scale ladder), bars,
/// square annuli, L/T/cross polyominoes, rotated rectangles, disks, or
/// "all" of them on one canvas. `canvas_width` only sets the wrap width.
SynthResult synth_shapes(const std::string& set_name, int canvas_width = 256);

}  // namespace shapesuite
