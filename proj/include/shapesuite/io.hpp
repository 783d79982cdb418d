#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapesuite/descriptors.hpp"
#include "shapesuite/morphology.hpp"
#include "shapesuite/raster.hpp"
#include "shapesuite/stats.hpp"

namespace shapesuite {

/// Reads a single-channel raster: PGM (P2 or P5, up to 16-bit) or
/// grayscale PNG (8/16-bit). Pixel value = label / intensity. Throws
/// std::runtime_error with a description on malformed input.
LabelImage read_label_raster(const std::string& path);
GrayImage read_gray_raster(const std::string& path);

/// Writes binary PGM (P5), 8- or 16-bit depending on the max value.
/// `comment` lines go into the header.
void write_pgm(const std::string& path, const LabelImage& img,
               const std::vector<std::string>& comments = {});
void write_pgm(const std::string& path, const GrayImage& img,
               const std::vector<std::string>& comments = {});

/// Fixed feature CSV schema, one row per region. [0,1]-ranged descriptor
/// columns may be byte-coded (quantized to n/255).
struct FeatureCsvOptions {
  bool byte_code = false;
  std::vector<std::string> comments;  // emitted as leading '#' lines
};

extern const char* const kFeatureCsvHeader;

std::string feature_csv(const std::vector<FeatureVector>& rows,
                        const FeatureCsvOptions& opts = {});

/// Plain table read: '#' lines skipped, first data line is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

/// Extracts named numeric columns into a SampleMatrix, dropping any row
/// with a non-finite or non-numeric entry. `dropped` reports how many.
SampleMatrix to_sample_matrix(const CsvTable& table,
                              const std::vector<std::string>& feature_names,
                              int64_t* dropped = nullptr);

/// Columns validated by default when the CSV carries the extractor
/// schema; descriptor columns that are empty throughout (for instance the
/// characteristic without a gray raster) are left out.
std::vector<std::string> default_feature_columns(const CsvTable& table);

/// JSON validation report (schema_version 1).
std::string validation_report_json(const ValidationReport& report,
                                   uint64_t seed, int decimate);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Shortest decimal form that round-trips doubles; used for all CSV/JSON
/// numeric output so reruns are byte-identical.
std::string format_double(double v);

}  // namespace shapesuite
