#include "semijulia/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semijulia::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    if (r.size() != header.size()) throw std::invalid_argument("csv_table: row width differs from header");
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string pgm_bytes(const GridRaster& raster) {
  std::string out = "P5\n" + std::to_string(raster.nx) + " " + std::to_string(raster.ny) + "\n255\n";
  for (int iy = raster.ny - 1; iy >= 0; --iy)
    for (int ix = 0; ix < raster.nx; ++ix) out += static_cast<char>(raster.at(ix, iy) ? 255 : 0);
  return out;
}

std::string ppm_bytes(int width, int height, const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) throw std::invalid_argument("ppm_bytes: size mismatch");
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

std::string density_ppm(const PointCloud& cloud, const Box& bbox, int nx, int ny) {
  const GridRaster grid(bbox, nx, ny);
  std::vector<std::uint32_t> count(grid.occupancy.size(), 0);
  for (const auto& p : cloud.points) {
    int ix, iy;
    if (!p.is_infinity() && grid.locate(p.value(), ix, iy)) ++count[grid.index(ix, iy)];
  }
  const double top = std::log1p(static_cast<double>(*std::max_element(count.begin(), count.end())));
  std::vector<std::uint8_t> rgb;
  rgb.reserve(count.size() * 3);
  auto channel = [](double t) { return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0))); };
  for (int iy = ny - 1; iy >= 0; --iy)
    for (int ix = 0; ix < nx; ++ix) {
      const std::uint32_t c = count[grid.index(ix, iy)];
      const double t = (c == 0 || top == 0.0) ? 0.0 : 0.25 + 0.75 * std::log1p(c) / top;
      rgb.push_back(channel(3.0 * t - 2.0 + (c ? 0.3 : 0.0)));
      rgb.push_back(channel(3.0 * t - 1.0));
      rgb.push_back(channel(c ? 1.5 * t + 0.2 : 0.0));
    }
  return ppm_bytes(nx, ny, rgb);
}

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64(std::string_view s, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
  return v;
}

constexpr std::string_view kFieldMagic = "GFIELD1\n";

}  // namespace

Json green_field_header(const GreenField& f) {
  Json h;
  h["format"] = "semijulia-green-field";
  h["prefix"] = to_json(f.prefix);
  h["bbox"] = to_json(f.bbox);
  h["nx"] = f.nx;
  h["ny"] = f.ny;
  h["escape_radius"] = f.escape_radius;
  h["max_iters"] = f.max_iters;
  h["value_type"] = "f64le";
  h["order"] = "row-major, first row at im_min";
  return h;
}

std::string green_field_bytes(const GreenField& field) {
  const std::string header = green_field_header(field).dump();
  std::string out(kFieldMagic);
  put_u64(out, header.size());
  out += header;
  for (double v : field.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

GreenField parse_green_field(std::string_view bytes) {
  if (bytes.size() < kFieldMagic.size() + 8 || bytes.substr(0, kFieldMagic.size()) != kFieldMagic)
    throw std::runtime_error("green field: bad magic");
  const std::uint64_t hlen = get_u64(bytes, kFieldMagic.size());
  const std::size_t body = kFieldMagic.size() + 8 + hlen;
  if (body > bytes.size()) throw std::runtime_error("green field: truncated header");
  const Json h = Json::parse(bytes.substr(kFieldMagic.size() + 8, hlen));
  GreenField f;
  std::vector<int> symbols;
  for (int s : h.at("prefix")) symbols.push_back(s - 1);
  f.prefix = Word(symbols);
  const auto& b = h.at("bbox");
  f.bbox = Box{b.at("re_min"), b.at("re_max"), b.at("im_min"), b.at("im_max")};
  f.nx = h.at("nx");
  f.ny = h.at("ny");
  f.escape_radius = h.at("escape_radius");
  f.max_iters = h.at("max_iters");
  const std::size_t n = static_cast<std::size_t>(f.nx) * f.ny;
  if (bytes.size() != body + 8 * n) throw std::runtime_error("green field: value block has the wrong size");
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = std::bit_cast<double>(get_u64(bytes, body + 8 * i));
  return f;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json to_json(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

Json to_json(const ExtComplex& z) {
  if (z.is_infinity()) return "inf";
  return Json::array({z.re(), z.im()});
}

Json to_json(const Word& w) {
  Json a = Json::array();
  for (int s : w.symbols()) a.push_back(s + 1);
  return a;
}

Json to_json(const Box& b) {
  Json j;
  j["re_min"] = b.re_min;
  j["re_max"] = b.re_max;
  j["im_min"] = b.im_min;
  j["im_max"] = b.im_max;
  return j;
}

namespace {

Json witnesses(const std::vector<OscWitness>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) {
    Json j;
    j["i"] = w.i + 1;
    if (w.j >= 0) j["j"] = w.j + 1;
    j["sample"] = to_json(w.sample);
    j["image"] = to_json(w.image);
    a.push_back(j);
  }
  return a;
}

Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(to_json(x));
  return a;
}

}  // namespace

Json to_json(const OscReport& r) {
  Json j;
  j["holds"] = r.holds;
  j["samples_used"] = r.samples_used;
  j["containment_violation_count"] = r.containment_violation_count;
  j["disjointness_violation_count"] = r.disjointness_violation_count;
  j["containment_violations"] = witnesses(r.containment_violations);
  j["disjointness_violations"] = witnesses(r.disjointness_violations);
  return j;
}

Json to_json(const HyperbolicityReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["min_postcritical_julia_distance"] = to_json(r.min_postcritical_julia_distance);
  j["threshold"] = r.threshold;
  j["word_length_used"] = r.word_length_used;
  j["postcritical_points"] = r.postcritical_points;
  return j;
}

Json to_json(const SemiHypReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["delta"] = r.delta;
  j["max_word_length"] = r.max_word_length;
  j["n_cap"] = r.n_cap;
  j["max_branch_degree_observed"] = r.max_branch_degree_observed;
  Json h;
  for (const auto& [n, d] : r.degree_histogram) h[std::to_string(n)] = d;
  j["degree_histogram"] = h;
  j["samples_used"] = r.samples_used;
  j["budget_exhausted"] = r.budget_exhausted;
  return j;
}

Json to_json(const DimensionReport& r) {
  Json j;
  j["box_dim"] = r.box_dim;
  j["fit_residual"] = r.fit_residual;
  j["degenerate"] = r.degenerate;
  j["scales"] = reals(r.scales);
  j["counts"] = r.counts;
  return j;
}

Json to_json(const PorosityReport& r) {
  Json j;
  j["k_estimate"] = r.k_estimate;
  j["non_porous"] = r.non_porous;
  j["centers_used"] = r.centers_used;
  j["radii"] = reals(r.radii);
  j["k_by_radius"] = reals(r.k_by_radius);
  return j;
}

Json to_json(const UPReport& r) {
  Json j;
  j["max_modulus"] = r.max_modulus;
  j["annuli_count"] = r.annuli_count;
  j["centers_used"] = r.centers_used;
  j["gap_floor"] = r.gap_floor;
  j["hit_search_cap"] = r.hit_search_cap;
  j["note"] = r.hit_search_cap ? "not uniformly perfect at sample scale" : "lower bound over round annuli";
  Json a = Json::array();
  for (const auto& an : r.annuli_found) {
    Json x;
    x["center"] = to_json(ExtComplex(an.center));
    x["r"] = an.r;
    x["R"] = an.R;
    x["modulus"] = an.modulus;
    a.push_back(x);
  }
  j["annuli_found"] = a;
  return j;
}

Json to_json(const PoincareReport& r) {
  Json j;
  j["base_point"] = to_json(r.base_point);
  j["s0_estimate"] = r.s0_estimate;
  j["bracketed"] = r.bracketed;
  j["max_degree"] = r.max_degree;
  j["leaves"] = r.leaves;
  j["dropped_leaves"] = r.dropped_leaves;
  j["s_grid"] = reals(r.s_grid);
  Json rows = Json::array();
  for (const auto& row : r.level_sums) rows.push_back(reals(row));
  j["level_sums"] = rows;
  j["min_step_norm"] = reals(r.min_step_norm);
  return j;
}

Json to_json(const DimensionBound& r) {
  Json j;
  j["holds"] = r.holds;
  j["withheld"] = r.withheld;
  j["applicable"] = r.applicable;
  j["diagnostic"] = r.diagnostic;
  return j;
}

Json to_json(const GreenLine& r) {
  Json j;
  j["start"] = to_json(ExtComplex(r.start));
  j["terminal_estimate"] = to_json(ExtComplex(r.terminal_estimate));
  j["vertices"] = r.vertices.size();
  j["g_stop"] = r.g_stop;
  j["deflections"] = r.deflections;
  j["stagnated"] = r.stagnated;
  j["left_field"] = r.left_field;
  return j;
}

Json to_json(const JohnReport& r) {
  Json j;
  j["c"] = r.c;
  j["passes"] = r.passes;
  j["c_estimate"] = r.c_estimate;
  j["non_john"] = r.non_john;
  j["tested_points"] = r.tested_points;
  Json a = Json::array();
  for (const auto& f : r.failures) {
    Json x;
    x["y"] = to_json(ExtComplex(f.y));
    x["disk_center"] = to_json(ExtComplex(f.disk_center));
    a.push_back(x);
  }
  j["failures"] = a;
  j["provenance"] = r.provenance;
  return j;
}

std::string cloud_csv(const PointCloud& cloud) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(cloud.size());
  for (const auto& p : cloud.points) {
    if (p.is_infinity())
      rows.push_back({"", "", "1"});
    else
      rows.push_back({fmt(p.re()), fmt(p.im()), "0"});
  }
  return csv_table({"re", "im", "at_infinity"}, rows);
}

namespace {

std::vector<std::string> witness_row(const char* kind, const OscWitness& w) {
  auto part = [](const ExtComplex& z, bool im) { return z.is_infinity() ? std::string("inf") : fmt(im ? z.im() : z.re()); };
  return {kind, std::to_string(w.i + 1), w.j >= 0 ? std::to_string(w.j + 1) : "",
          part(w.sample, false), part(w.sample, true), part(w.image, false), part(w.image, true)};
}

}  // namespace

std::string csv(const OscReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& w : r.containment_violations) rows.push_back(witness_row("containment", w));
  for (const auto& w : r.disjointness_violations) rows.push_back(witness_row("disjointness", w));
  return csv_table({"kind", "i", "j", "sample_re", "sample_im", "image_re", "image_im"}, rows);
}

std::string csv(const SemiHypReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [n, d] : r.degree_histogram) rows.push_back({std::to_string(n), std::to_string(d)});
  return csv_table({"word_length", "max_cluster_multiplicity"}, rows);
}

std::string csv(const DimensionReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.scales.size(); ++i) rows.push_back({fmt(r.scales[i]), std::to_string(r.counts[i])});
  return csv_table({"scale", "count"}, rows);
}

std::string csv(const PorosityReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.radii.size(); ++i) rows.push_back({fmt(r.radii[i]), fmt(r.k_by_radius[i])});
  return csv_table({"radius", "k"}, rows);
}

std::string csv(const UPReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& a : r.annuli_found)
    rows.push_back({fmt(a.center.real()), fmt(a.center.imag()), fmt(a.r), fmt(a.R), fmt(a.modulus)});
  return csv_table({"center_re", "center_im", "r", "R", "modulus"}, rows);
}

std::string csv(const PoincareReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < r.level_sums.size(); ++n)
    for (std::size_t i = 0; i < r.s_grid.size(); ++i)
      rows.push_back({std::to_string(n + 1), fmt(r.s_grid[i]), fmt(r.level_sums[n][i])});
  return csv_table({"word_length", "s", "level_sum"}, rows);
}

std::string csv(const JohnReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : r.failures)
    rows.push_back({fmt(f.y.real()), fmt(f.y.imag()), fmt(f.disk_center.real()), fmt(f.disk_center.imag())});
  return csv_table({"y_re", "y_im", "disk_center_re", "disk_center_im"}, rows);
}

}  // namespace semijulia::io
