#include "dipole/render.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "dipole/core.hpp"

namespace dipole {

RgbImage::RgbImage(std::size_t width, std::size_t height, Rgb fill)
    : width_(width), height_(height), bytes_(3 * width * height) {
    if (width == 0 || height == 0) {
        throw DimensionError("RgbImage: width and height must be at least 1");
    }
    for (std::size_t k = 0; k < width * height; ++k) {
        std::copy(fill.begin(), fill.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(3 * k));
    }
}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), bytes_(std::move(interleaved)) {
    if (width == 0 || height == 0) {
        throw DimensionError("RgbImage: width and height must be at least 1");
    }
    if (bytes_.size() != 3 * width * height) {
        throw DimensionError("RgbImage: expected " + std::to_string(3 * width * height) + " bytes, got " +
                             std::to_string(bytes_.size()));
    }
}

RgbImage RgbImage::from_gray(const GrayImage& img) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(3 * img.size());
    for (std::uint8_t v : img.pixels()) {
        bytes.insert(bytes.end(), {v, v, v});
    }
    return RgbImage(img.width(), img.height(), std::move(bytes));
}

Rgb RgbImage::at(std::size_t row, std::size_t col) const {
    const std::size_t k = 3 * (row * width_ + col);
    return {bytes_[k], bytes_[k + 1], bytes_[k + 2]};
}

void RgbImage::set(std::size_t row, std::size_t col, Rgb color) {
    const std::size_t k = 3 * (row * width_ + col);
    bytes_[k] = color[0];
    bytes_[k + 1] = color[1];
    bytes_[k + 2] = color[2];
}

ToneMapResult tone_map(const ScalarField& magnitude, double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("tone_map: alpha must be > 0");
    }
    const double peak = magnitude.max();
    std::vector<std::uint8_t> pixels(magnitude.size(), 0);
    if (!(peak > 0.0)) {
        return {GrayImage(magnitude.width(), magnitude.height(), std::move(pixels)), true};
    }
    const auto values = magnitude.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] < 0.0) {
            throw std::invalid_argument("tone_map: magnitudes must be >= 0");
        }
        const double tone = 255.0 * std::pow(values[k] / peak, alpha);
        pixels[k] = static_cast<std::uint8_t>(std::clamp(std::floor(tone + 0.5), 0.0, 255.0));
    }
    return {GrayImage(magnitude.width(), magnitude.height(), std::move(pixels)), false};
}

std::vector<CellDipole> cell_dipoles(const GrayImage& img, std::size_t cell_size) {
    if (cell_size < 2) {
        throw std::invalid_argument("cell size must be at least 2");
    }
    if (img.width() < cell_size || img.height() < cell_size) {
        throw DimensionError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " is smaller than one " + std::to_string(cell_size) + "x" + std::to_string(cell_size) +
                             " cell");
    }
    std::vector<CellDipole> cells;
    for (std::size_t r0 = 0; r0 + cell_size <= img.height(); r0 += cell_size) {
        for (std::size_t c0 = 0; c0 + cell_size <= img.width(); c0 += cell_size) {
            const Rect tile{r0, c0, r0 + cell_size - 1, c0 + cell_size - 1};
            cells.push_back({r0 + cell_size / 2, c0 + cell_size / 2, window_dipole(img, tile)});
        }
    }
    return cells;
}

std::size_t fixed_line_length(std::size_t cell_size) {
    auto length = static_cast<std::size_t>(std::lround(0.8 * static_cast<double>(cell_size)));
    return length % 2 == 0 ? length + 1 : length;
}

double auto_cell_threshold(const std::vector<CellDipole>& cells) {
    double peak = 0.0;
    for (const auto& cell : cells) {
        peak = std::max(peak, cell.dipole.magnitude());
    }
    return kAutoThresholdFraction * peak;
}

namespace {

struct Point {
    long x;
    long y;

    auto operator<=>(const Point&) const = default;
};

// Bresenham between two endpoints; the endpoints are put in a fixed order
// first so a segment and its reverse produce the same pixels.
template <typename Plot>
void draw_segment(Point a, Point b, Plot plot) {
    if (b < a) {
        std::swap(a, b);
    }
    const long dx = std::labs(b.x - a.x);
    const long dy = -std::labs(b.y - a.y);
    const long sx = a.x < b.x ? 1 : -1;
    const long sy = a.y < b.y ? 1 : -1;
    long err = dx + dy;
    for (;;) {
        plot(a);
        if (a == b) {
            break;
        }
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            a.x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            a.y += sy;
        }
    }
}

}  // namespace

RgbImage render_overlay(const GrayImage& img, const std::vector<CellDipole>& cells, const OverlayConfig& cfg) {
    if (cfg.cell_size < 2) {
        throw std::invalid_argument("cell size must be at least 2");
    }
    RgbImage out = RgbImage::from_gray(img);
    const double threshold = cfg.magnitude_threshold.value_or(auto_cell_threshold(cells));
    const std::size_t full_length = fixed_line_length(cfg.cell_size);
    double peak = 0.0;
    for (const auto& cell : cells) {
        peak = std::max(peak, cell.dipole.magnitude());
    }

    const long half_cell = static_cast<long>(cfg.cell_size / 2);
    for (const auto& cell : cells) {
        const double magnitude = cell.dipole.magnitude();
        if (magnitude == 0.0 || magnitude < threshold) {
            continue;
        }
        std::size_t length = full_length;
        if (cfg.line_length == LineLength::MagnitudeScaled) {
            length = static_cast<std::size_t>(std::lround(static_cast<double>(full_length) * magnitude / peak));
            if (length % 2 == 0) {
                length += 1;
            }
        }
        const double half = static_cast<double>((length - 1) / 2);
        const long off_x = std::lround(half * cell.dipole.px / magnitude);
        const long off_y = std::lround(half * cell.dipole.py / magnitude);
        const Point center{static_cast<long>(cell.center_col), static_cast<long>(cell.center_row)};

        const long x_min = center.x - half_cell;
        const long y_min = center.y - half_cell;
        const long x_max = std::min<long>(x_min + static_cast<long>(cfg.cell_size), static_cast<long>(img.width())) - 1;
        const long y_max = std::min<long>(y_min + static_cast<long>(cfg.cell_size), static_cast<long>(img.height())) - 1;

        draw_segment({center.x - off_x, center.y - off_y}, {center.x + off_x, center.y + off_y}, [&](Point p) {
            if (p.x >= std::max(x_min, 0L) && p.x <= x_max && p.y >= std::max(y_min, 0L) && p.y <= y_max) {
                out.set(static_cast<std::size_t>(p.y), static_cast<std::size_t>(p.x), cfg.line_color);
            }
        });
    }
    return out;
}

}  // namespace dipole
