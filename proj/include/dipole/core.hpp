#pragma once

#include <optional>

#include "dipole/types.hpp"

namespace dipole {

/// Number of worker threads used by the field filters. 0 means one per
/// hardware thread. Results never depend on this value.
struct Parallelism {
    unsigned threads = 0;
};

/// Throws DimensionError if `img` cannot host `win` (empty image, or a
/// Block2x2 window on an image narrower or shorter than 2 pixels).
void check_window(const GrayImage& img, const Window& win);

/// The pixel rectangle used for the local mean at (row, col).
///
/// Radius windows are clipped at the border. A Block2x2 window whose anchor
/// sits on the last row or column is shifted back inside the image so the
/// mean is always taken over four pixels.
Rect mean_window(const Window& win, std::size_t width, std::size_t height, std::size_t row, std::size_t col);

/// The pixel rectangle over which the dipole at (row, col) is summed, or
/// nothing for Block2x2 anchors on the last row or column (those dipoles
/// are zero).
std::optional<Rect> dipole_window(const Window& win, std::size_t width, std::size_t height, std::size_t row,
                                  std::size_t col);

ScalarField local_mean(const GrayImage& img, const Window& win);

/// q = b - M, with M from local_mean.
ScalarField charge_map(const GrayImage& img, const Window& win);

/// First moment of the charges inside `rect`, where each charge is taken
/// against the mean of `rect` itself and positions are relative to the
/// rectangle's top-left pixel. Normalized by the pixel count.
Dipole window_dipole(const GrayImage& img, const Rect& rect);

/// Local dipole field by direct summation over every window.
VectorField dipole_field(const GrayImage& img, const Window& win, Parallelism par = {});

/// Same field via summed-area tables of b, b*column and b*row; constant
/// work per pixel regardless of window size.
VectorField dipole_field_fast(const GrayImage& img, const Window& win, Parallelism par = {});

/// Per-pixel Euclidean norm.
ScalarField magnitude_field(const VectorField& field);

/// Brightness-weighted mean position over the whole frame, with the origin
/// at the top-left pixel (x = column, y = row). Unlike the local dipoles this
/// depends on where the origin is placed.
Dipole whole_image_dipole(const GrayImage& img);

}  // namespace dipole
