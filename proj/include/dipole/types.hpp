#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dipole {

/// Raised when an image is too small for the requested window or operation,
/// or when two fields that must match in size do not.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the Netpbm / field readers. `offset()` is the byte position
/// where decoding stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// 8-bit brightness map, row-major. Pixel (row i, column j) lives at
/// `pixels[i * width + j]`.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    std::uint8_t operator()(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
    std::uint8_t& operator()(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Real-valued map with the same layout as GrayImage.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(std::size_t width, std::size_t height, double fill = 0.0);
    ScalarField(std::size_t width, std::size_t height, std::vector<double> values);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
    double& operator()(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double max() const;

    bool operator==(const ScalarField&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> values_;
};

/// Two-component vector per pixel. x runs along columns (rightward),
/// y along rows (downward).
class VectorField {
public:
    VectorField() = default;
    VectorField(std::size_t width, std::size_t height);
    VectorField(std::size_t width, std::size_t height, std::vector<double> xs, std::vector<double> ys);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return xs_.size(); }

    double x(std::size_t row, std::size_t col) const { return xs_[row * width_ + col]; }
    double y(std::size_t row, std::size_t col) const { return ys_[row * width_ + col]; }
    void set(std::size_t row, std::size_t col, double x, double y) {
        xs_[row * width_ + col] = x;
        ys_[row * width_ + col] = y;
    }

    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const double> ys() const noexcept { return ys_; }
    std::span<double> xs() noexcept { return xs_; }
    std::span<double> ys() noexcept { return ys_; }

    bool operator==(const VectorField&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// Neighborhood over which mean, charge and dipole are taken.
///
/// Block2x2 is the 4-pixel block whose top-left pixel is the anchor.
/// Radius covers (2*delta_i+1) rows by (2*delta_j+1) columns centered on the
/// anchor, clipped at the image border.
class Window {
public:
    enum class Kind { Block2x2, Radius };

    static Window block2x2() noexcept { return Window(Kind::Block2x2, 0, 0); }
    static Window radius(std::size_t delta_i, std::size_t delta_j);

    /// Parses "2x2" or "r<di>x<dj>" (e.g. "r3x3").
    static Window parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    std::size_t delta_i() const noexcept { return delta_i_; }
    std::size_t delta_j() const noexcept { return delta_j_; }

    std::string to_string() const;

    bool operator==(const Window&) const = default;

private:
    Window(Kind kind, std::size_t di, std::size_t dj) noexcept : kind_(kind), delta_i_(di), delta_j_(dj) {}

    Kind kind_;
    std::size_t delta_i_;
    std::size_t delta_j_;
};

/// Inclusive pixel rectangle.
struct Rect {
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t row1 = 0;
    std::size_t col1 = 0;

    std::size_t rows() const noexcept { return row1 - row0 + 1; }
    std::size_t cols() const noexcept { return col1 - col0 + 1; }
    std::size_t count() const noexcept { return rows() * cols(); }

    bool operator==(const Rect&) const = default;
};

struct Dipole {
    double px = 0.0;
    double py = 0.0;

    double magnitude() const noexcept { return std::hypot(px, py); }

    bool operator==(const Dipole&) const = default;
};

}  // namespace dipole
