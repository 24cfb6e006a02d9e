#pragma once

#include <array>
#include <optional>

#include "dipole/types.hpp"

namespace dipole {

using Rgb = std::array<std::uint8_t, 3>;

class RgbImage {
public:
    RgbImage() = default;
    RgbImage(std::size_t width, std::size_t height, Rgb fill = {0, 0, 0});
    RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> interleaved);

    /// Gray value copied into all three channels.
    static RgbImage from_gray(const GrayImage& img);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    Rgb at(std::size_t row, std::size_t col) const;
    void set(std::size_t row, std::size_t col, Rgb color);

    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

    bool operator==(const RgbImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> bytes_;
};

enum class LineLength { FixedFraction, MagnitudeScaled };

struct OverlayConfig {
    std::size_t cell_size = 20;
    /// Cells whose dipole is shorter than this are left untouched. Unset
    /// means 5% of the largest cell dipole.
    std::optional<double> magnitude_threshold;
    Rgb line_color = {255, 0, 0};
    LineLength line_length = LineLength::FixedFraction;
};

/// Fraction of the maximum used whenever a threshold is "auto".
inline constexpr double kAutoThresholdFraction = 0.05;

/// Default tone-map exponent.
inline constexpr double kDefaultAlpha = 0.5;

struct ToneMapResult {
    GrayImage image;
    /// True when the field was all zero and the output is blank.
    bool flat = false;
};

/// 255 * (P / P_max)^alpha, rounded half up. A field with P_max = 0 maps
/// to all zeros and sets `flat`.
ToneMapResult tone_map(const ScalarField& magnitude, double alpha = kDefaultAlpha);

struct CellDipole {
    std::size_t center_row = 0;
    std::size_t center_col = 0;
    Dipole dipole;
};

/// One dipole per full cell_size x cell_size tile, in raster order, taken
/// over the whole tile. Partial tiles on the right and bottom are skipped.
std::vector<CellDipole> cell_dipoles(const GrayImage& img, std::size_t cell_size);

/// Odd pixel length of the fixed-fraction line for a cell.
std::size_t fixed_line_length(std::size_t cell_size);

/// The threshold render_overlay uses when the config leaves it unset.
double auto_cell_threshold(const std::vector<CellDipole>& cells);

/// Gray image with one undirected segment per cell through the cell center
/// along its dipole, clipped to the cell.
RgbImage render_overlay(const GrayImage& img, const std::vector<CellDipole>& cells, const OverlayConfig& cfg);

}  // namespace dipole
