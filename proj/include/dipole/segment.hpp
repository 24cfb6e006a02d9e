#pragma once

#include "dipole/core.hpp"
#include "dipole/types.hpp"

namespace dipole {

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(std::size_t width, std::size_t height, bool fill = false);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    bool operator()(std::size_t row, std::size_t col) const { return bits_[row * width_ + col] != 0; }
    void set(std::size_t row, std::size_t col, bool on) { bits_[row * width_ + col] = on ? 1 : 0; }

    std::size_t count() const;

    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> bits_;
};

enum class Connectivity { Four = 4, Eight = 8 };

/// Component labels: 0 for background, 1..count for set pixels, numbered in
/// raster order of each component's first pixel.
struct LabelImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint32_t> labels;
    std::size_t count = 0;

    std::uint32_t operator()(std::size_t row, std::size_t col) const { return labels[row * width + col]; }
};

struct BoundingBox {
    std::size_t min_x = 0;
    std::size_t min_y = 0;
    std::size_t max_x = 0;
    std::size_t max_y = 0;

    std::size_t width() const noexcept { return max_x - min_x + 1; }
    std::size_t height() const noexcept { return max_y - min_y + 1; }

    bool operator==(const BoundingBox&) const = default;
};

/// One connected region of strong dipoles. mask, dipoles and perpendiculars
/// are cropped to bbox; the vector fields are zero off the mask.
struct SignDomain {
    std::uint32_t label = 0;
    BoundingBox bbox;
    BinaryMask mask;
    std::size_t pixel_count = 0;
    VectorField dipoles;
    VectorField perpendiculars;
};

struct SegmentOptions {
    Window window = Window::block2x2();
    /// Magnitude threshold; unset means 5% of the largest magnitude.
    std::optional<double> tau;
    Connectivity connectivity = Connectivity::Eight;
    std::size_t min_pixels = 4;
};

/// Set where magnitude >= tau.
BinaryMask threshold_mask(const ScalarField& magnitude, double tau);

LabelImage connected_components(const BinaryMask& mask, Connectivity connectivity = Connectivity::Eight);

/// The auto threshold: 5% of the maximum magnitude.
double auto_threshold(const ScalarField& magnitude);

/// dipole field -> magnitude -> threshold -> components -> domains, sorted
/// by label. Components with fewer than min_pixels pixels are dropped.
std::vector<SignDomain> extract_domains(const GrayImage& img, const SegmentOptions& options);

}  // namespace dipole
