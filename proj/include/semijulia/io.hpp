#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semijulia/analysis.hpp"
#include "semijulia/checkers.hpp"
#include "semijulia/cloud.hpp"
#include "semijulia/fiberedpoly.hpp"

namespace semijulia::io {

// Insertion-ordered, so serialized key order is stable.
using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips; "inf", "-inf", "nan" for non-finite.
std::string fmt(double v);

// RFC 4180: fields with comma, quote, CR or LF are quoted, quotes doubled;
// records end in CRLF.
std::string csv_field(std::string_view s);
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

// Binary PGM (P5), 255 on occupied cells; top image row is the top of the box.
std::string pgm_bytes(const GridRaster& raster);
// Binary PPM (P6) from row-major RGB triples, top row first.
std::string ppm_bytes(int width, int height, const std::vector<std::uint8_t>& rgb);
// Log-scaled point density over the box, as a PPM.
std::string density_ppm(const PointCloud& cloud, const Box& bbox, int nx, int ny);

// "GFIELD1\n", little-endian u64 header length, JSON header, then nx*ny
// little-endian f64 values in row-major order (iy = 0 is the bottom row).
std::string green_field_bytes(const GreenField& field);
GreenField parse_green_field(std::string_view bytes);

std::string sha256_hex(std::string_view bytes);
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

Json to_json(double v);
Json to_json(const ExtComplex& z);
Json to_json(const Word& w);  // 1-based symbols
Json to_json(const Box& b);
Json to_json(const OscReport& r);
Json to_json(const HyperbolicityReport& r);
Json to_json(const SemiHypReport& r);
Json to_json(const DimensionReport& r);
Json to_json(const PorosityReport& r);
Json to_json(const UPReport& r);
Json to_json(const PoincareReport& r);
Json to_json(const DimensionBound& r);
Json to_json(const GreenLine& r);
Json to_json(const JohnReport& r);
Json green_field_header(const GreenField& f);

std::string cloud_csv(const PointCloud& cloud);
std::string csv(const OscReport& r);
std::string csv(const SemiHypReport& r);
std::string csv(const DimensionReport& r);
std::string csv(const PorosityReport& r);
std::string csv(const UPReport& r);
std::string csv(const PoincareReport& r);
std::string csv(const JohnReport& r);

}  // namespace semijulia::io
