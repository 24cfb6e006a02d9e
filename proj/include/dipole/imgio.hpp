#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "dipole/render.hpp"
#include "dipole/types.hpp"

namespace dipole {

using Bytes = std::vector<std::uint8_t>;

/// Decodes a P5 (binary) or P2 (ASCII) graymap with maxval <= 255. Header
/// fields may be separated by any whitespace and `#` comments. Pixel values
/// are kept as stored; they are not rescaled to 255.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);

/// Decodes a P6 pixmap with maxval <= 255.
RgbImage read_ppm(std::span<const std::uint8_t> bytes);

/// "P5\n<w> <h>\n255\n" followed by the raw pixels.
Bytes write_pgm(const GrayImage& img);

/// "P6\n<w> <h>\n255\n" followed by interleaved RGB.
Bytes write_ppm(const RgbImage& img);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

enum class FieldFormat { Json, Csv };

FieldFormat parse_field_format(std::string_view text);

using AnyField = std::variant<VectorField, ScalarField>;

/// Extra fields echoed into JSON exports under "meta" (window, flags, ...).
using ExportMetadata = nlohmann::ordered_json;

/// JSON: {"kind": "vector"|"scalar", "width", "height", "px"/"py" or
/// "values" as flat row-major arrays, "meta": {...}}.
/// CSV: header `i,j,px,py` or `i,j,value`, then one row per pixel in raster
/// order (i = row, j = column). Numbers use up to 17 significant digits.
std::string export_field(const AnyField& field, FieldFormat format, const ExportMetadata& meta = ExportMetadata::object());

/// Inverse of export_field for either format.
AnyField import_field(std::string_view text, FieldFormat format);

/// "%.17g" rendering used for CSV numbers; parses back to the same double.
std::string format_number(double value);

}  // namespace dipole
