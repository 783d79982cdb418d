#include "shapesuite/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace shapesuite {

namespace {

struct RawRaster {
  int width = 0;
  int height = 0;
  std::vector<int32_t> pixels;
};

int pnm_next_token(std::istream& in, std::string& token) {
  token.clear();
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) break;
  }
  if (ch == EOF) return 0;
  do {
    token.push_back(char(ch));
  } while ((ch = in.get()) != EOF && !std::isspace(ch));
  return 1;
}

RawRaster read_pgm(const std::string& path, std::ifstream& in,
                   const std::string& magic) {
  auto next_int = [&](const char* what) {
    std::string tok;
    if (!pnm_next_token(in, tok))
      throw std::runtime_error(path + ": truncated PGM header (" + what + ")");
    return std::stol(tok);
  };
  RawRaster img;
  img.width = int(next_int("width"));
  img.height = int(next_int("height"));
  const long maxval = next_int("maxval");
  if (img.width < 1 || img.height < 1)
    throw std::runtime_error(path + ": invalid PGM dimensions");
  if (maxval < 1 || maxval > 65535)
    throw std::runtime_error(path + ": unsupported PGM maxval");

  const size_t n = size_t(img.width) * img.height;
  img.pixels.resize(n);
  if (magic == "P2") {
    for (size_t i = 0; i < n; ++i) {
      std::string tok;
      if (!pnm_next_token(in, tok))
        throw std::runtime_error(path + ": truncated P2 data");
      img.pixels[i] = int32_t(std::stol(tok));
    }
  } else {  // P5: header ends after exactly one whitespace byte
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<uint8_t> buf(n * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (size_t(in.gcount()) != buf.size())
      throw std::runtime_error(path + ": truncated P5 data");
    for (size_t i = 0; i < n; ++i) {
      img.pixels[i] = bytes == 2 ? (int32_t(buf[2 * i]) << 8) | buf[2 * i + 1]
                                 : buf[i];
    }
  }
  for (int32_t v : img.pixels)
    if (v < 0 || v > maxval)
      throw std::runtime_error(path + ": sample exceeds maxval");
  return img;
}

RawRaster read_png_gray(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error(path + ": cannot open");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error(path + ": libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error(path + ": PNG decode error");
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error(path + ": PNG must be single-channel grayscale");
  }
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  RawRaster img;
  img.width = int(png_get_image_width(png, info));
  img.height = int(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const size_t stride = png_get_rowbytes(png, info);
  std::vector<uint8_t> row(stride);
  img.pixels.resize(size_t(img.width) * img.height);
  for (int r = 0; r < img.height; ++r) {
    png_read_row(png, row.data(), nullptr);
    for (int c = 0; c < img.width; ++c) {
      img.pixels[size_t(r) * img.width + c] =
          depth == 16 ? (int32_t(row[2 * c]) << 8) | row[2 * c + 1] : row[c];
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

RawRaster read_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  char sig[2] = {0, 0};
  in.read(sig, 2);
  if (!in) throw std::runtime_error(path + ": empty file");
  if (sig[0] == 'P' && (sig[1] == '2' || sig[1] == '5'))
    return read_pgm(path, in, std::string(sig, 2));
  if (sig[0] == char(0x89) && sig[1] == 'P') {
    in.close();
    return read_png_gray(path);
  }
  throw std::runtime_error(path + ": unsupported raster format");
}

void write_pgm_raw(const std::string& path, int width, int height,
                   const std::vector<int32_t>& pixels,
                   const std::vector<std::string>& comments) {
  int32_t maxv = 1;
  for (int32_t v : pixels) {
    if (v < 0) throw std::invalid_argument(path + ": negative sample");
    maxv = std::max(maxv, v);
  }
  if (maxv > 65535) throw std::invalid_argument(path + ": sample above 16 bit");
  const int bytes = maxv > 255 ? 2 : 1;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << "P5\n";
  for (const std::string& c : comments) out << "# " << c << "\n";
  out << width << " " << height << "\n" << maxv << "\n";
  std::vector<uint8_t> buf;
  buf.reserve(pixels.size() * bytes);
  for (int32_t v : pixels) {
    if (bytes == 2) buf.push_back(uint8_t(v >> 8));
    buf.push_back(uint8_t(v & 0xff));
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size()));
}

}  // namespace

LabelImage read_label_raster(const std::string& path) {
  RawRaster raw = read_raster(path);
  LabelImage img;
  img.width = raw.width;
  img.height = raw.height;
  img.labels = std::move(raw.pixels);
  return img;
}

GrayImage read_gray_raster(const std::string& path) {
  RawRaster raw = read_raster(path);
  GrayImage img;
  img.width = raw.width;
  img.height = raw.height;
  img.pixels = std::move(raw.pixels);
  return img;
}

void write_pgm(const std::string& path, const LabelImage& img,
               const std::vector<std::string>& comments) {
  write_pgm_raw(path, img.width, img.height, img.labels, comments);
}

void write_pgm(const std::string& path, const GrayImage& img,
               const std::vector<std::string>& comments) {
  write_pgm_raw(path, img.width, img.height, img.pixels, comments);
}

std::string format_double(double v) {
  char buf[64];
  if (v == std::llround(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

const char* const kFeatureCsvHeader =
    "label,area,mer_angle_deg,mer_w,mer_l,cnvxty_and_no_hole,"
    "fuzzy_rule_bsd_rctnglrty,rndnss_and_no_hole,mlt_scl_strghtns_of_bndrs,"
    "dmp_mlt_scl_chrctrstc,elngtdnss_and_no_hole,elngtdnss_nm,"
    "smpl_cnctvty_4adjncy,filled_area_ratio,combnd_smpl_cnctvty,flags";

namespace {

double byte_code_unit(double v) {
  return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
}

}  // namespace

std::string feature_csv(const std::vector<FeatureVector>& rows,
                        const FeatureCsvOptions& opts) {
  std::ostringstream out;
  for (const std::string& c : opts.comments) out << "# " << c << "\n";
  out << kFeatureCsvHeader << "\n";
  for (const FeatureVector& fv : rows) {
    auto unit = [&](double v) {
      return format_double(opts.byte_code ? byte_code_unit(v) : v);
    };
    out << fv.label << ',' << fv.area << ',' << format_double(fv.mer_angle_deg)
        << ',' << format_double(fv.mer_w) << ',' << format_double(fv.mer_l)
        << ',' << unit(fv.cnvxty_and_no_hole) << ','
        << unit(fv.fuzzy_rule_bsd_rctnglrty) << ','
        << unit(fv.rndnss_and_no_hole) << ','
        << unit(fv.mlt_scl_strghtns_of_bndrs) << ',';
    if (fv.dmp_mlt_scl_chrctrstc)
      out << format_double(*fv.dmp_mlt_scl_chrctrstc);
    out << ',' << format_double(fv.elngtdnss_and_no_hole) << ','
        << format_double(fv.elngtdnss_nm) << ','
        << unit(fv.smpl_cnctvty_4adjncy) << ',' << unit(fv.filled_area_ratio)
        << ',' << unit(fv.combnd_smpl_cnctvty) << ',';
    for (size_t i = 0; i < fv.flags.size(); ++i) {
      if (i) out << ';';
      out << fv.flags[i];
    }
    out << "\n";
  }
  return out.str();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  CsvTable table;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : s) {
      if (ch == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (ch != '\r') {
        cell.push_back(ch);
      }
    }
    cells.push_back(cell);
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (table.header.empty())
      table.header = split(line);
    else
      table.rows.push_back(split(line));
  }
  if (table.header.empty()) throw std::runtime_error(path + ": no header row");
  return table;
}

SampleMatrix to_sample_matrix(const CsvTable& table,
                              const std::vector<std::string>& feature_names,
                              int64_t* dropped) {
  SampleMatrix m;
  m.names = feature_names;
  std::vector<size_t> indices;
  for (const std::string& name : feature_names) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
      throw std::runtime_error("column not found: " + name);
    indices.push_back(size_t(it - table.header.begin()));
  }
  m.columns.assign(feature_names.size(), {});
  int64_t bad = 0;
  for (const auto& row : table.rows) {
    std::vector<double> parsed(indices.size());
    bool ok = true;
    for (size_t i = 0; i < indices.size() && ok; ++i) {
      if (indices[i] >= row.size() || row[indices[i]].empty()) {
        ok = false;
        break;
      }
      char* end = nullptr;
      parsed[i] = std::strtod(row[indices[i]].c_str(), &end);
      ok = end && *end == '\0' && std::isfinite(parsed[i]);
    }
    if (!ok) {
      ++bad;
      continue;
    }
    for (size_t i = 0; i < indices.size(); ++i)
      m.columns[i].push_back(parsed[i]);
  }
  if (dropped) *dropped = bad;
  return m;
}

std::vector<std::string> default_feature_columns(const CsvTable& table) {
  static const std::vector<std::string> kSeven = {
      "cnvxty_and_no_hole",        "fuzzy_rule_bsd_rctnglrty",
      "rndnss_and_no_hole",        "mlt_scl_strghtns_of_bndrs",
      "dmp_mlt_scl_chrctrstc",     "elngtdnss_and_no_hole",
      "combnd_smpl_cnctvty"};
  const auto& header = table.header;
  auto column_has_values = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return false;
    const size_t idx = size_t(it - header.begin());
    for (const auto& row : table.rows)
      if (idx < row.size() && !row[idx].empty()) return true;
    return false;
  };
  const bool extractor_schema =
      std::all_of(kSeven.begin(), kSeven.end(), [&](const std::string& n) {
        return std::find(header.begin(), header.end(), n) != header.end();
      });
  if (extractor_schema) {
    std::vector<std::string> cols;
    for (const std::string& n : kSeven)
      if (column_has_values(n)) cols.push_back(n);
    return cols;
  }
  // Otherwise every column except obvious non-features.
  std::vector<std::string> cols;
  for (const std::string& h : header)
    if (h != "label" && h != "flags") cols.push_back(h);
  return cols;
}

std::string validation_report_json(const ValidationReport& report,
                                   uint64_t seed, int decimate) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["N"] = report.n;
  j["k"] = report.k;
  j["alpha"] = report.alpha;
  j["srcc_strong"] = report.srcc_strong;
  j["seed"] = seed;
  j["decimate"] = decimate;
  j["md_accepted"] = report.md_accepted;
  nlohmann::json pairs = nlohmann::json::array();
  for (const PairwiseReport& p : report.pairs) {
    nlohmann::json e;
    e["features"] = {p.name_a, p.name_b};
    e["p_value"] = p.p_value;
    e["independent_at_alpha"] = p.independent_at_alpha;
    if (p.cvi) e["cvi"] = *p.cvi;
    e["srcc"] = p.srcc;
    e["srcc_band"] = p.srcc_band;
    if (p.witness) {
      e["witness_indices"] = {p.witness->indices[0], p.witness->indices[1],
                              p.witness->indices[2]};
      e["witness_condition"] = p.witness->condition_a ? "A" : "B";
    }
    if (p.witness_capped) e["witness_capped"] = true;
    e["min_expected"] = p.min_expected;
    e["expected_below_5"] = p.expected_below_5;
    e["verdict"] = to_string(p.verdict);
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace shapesuite
