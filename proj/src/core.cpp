#include "dipole/core.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace dipole {

namespace {

// Summed-area table with a zero guard row and column, so the sum over the
// inclusive rectangle (r0, c0)-(r1, c1) needs no branches.
class IntegralImage {
public:
    template <typename Weight>
    IntegralImage(const GrayImage& img, Weight weight)
        : stride_(img.width() + 1), sums_((img.height() + 1) * (img.width() + 1), 0) {
        for (std::size_t r = 0; r < img.height(); ++r) {
            std::int64_t row_sum = 0;
            for (std::size_t c = 0; c < img.width(); ++c) {
                row_sum += static_cast<std::int64_t>(img(r, c)) * weight(r, c);
                sums_[(r + 1) * stride_ + c + 1] = sums_[r * stride_ + c + 1] + row_sum;
            }
        }
    }

    std::int64_t sum(const Rect& rect) const {
        const std::size_t top = rect.row0 * stride_;
        const std::size_t bottom = (rect.row1 + 1) * stride_;
        return sums_[bottom + rect.col1 + 1] - sums_[top + rect.col1 + 1] - sums_[bottom + rect.col0] +
               sums_[top + rect.col0];
    }

private:
    std::size_t stride_;
    std::vector<std::int64_t> sums_;
};

// Sum of k for k in [first, last].
std::int64_t index_sum(std::size_t first, std::size_t last) {
    const auto a = static_cast<std::int64_t>(first);
    const auto b = static_cast<std::int64_t>(last);
    return (a + b) * (b - a + 1) / 2;
}

}  // namespace

void check_window(const GrayImage& img, const Window& win) {
    if (img.empty()) {
        throw DimensionError("image is empty; minimum size is 1x1");
    }
    if (win.kind() == Window::Kind::Block2x2 && (img.width() < 2 || img.height() < 2)) {
        throw DimensionError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " is too small for the 2x2 window; minimum size is 2x2");
    }
}

Rect mean_window(const Window& win, std::size_t width, std::size_t height, std::size_t row, std::size_t col) {
    if (win.kind() == Window::Kind::Block2x2) {
        const std::size_t r0 = std::min(row, height - 2);
        const std::size_t c0 = std::min(col, width - 2);
        return {r0, c0, r0 + 1, c0 + 1};
    }
    return {row - std::min(row, win.delta_i()), col - std::min(col, win.delta_j()),
            std::min(row + win.delta_i(), height - 1), std::min(col + win.delta_j(), width - 1)};
}

std::optional<Rect> dipole_window(const Window& win, std::size_t width, std::size_t height, std::size_t row,
                                  std::size_t col) {
    if (win.kind() == Window::Kind::Block2x2) {
        if (row + 1 >= height || col + 1 >= width) {
            return std::nullopt;
        }
        return Rect{row, col, row + 1, col + 1};
    }
    return mean_window(win, width, height, row, col);
}

ScalarField local_mean(const GrayImage& img, const Window& win) {
    check_window(img, win);
    const IntegralImage sums(img, [](std::size_t, std::size_t) { return std::int64_t{1}; });
    ScalarField out(img.width(), img.height());
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            const Rect rect = mean_window(win, img.width(), img.height(), r, c);
            out(r, c) = static_cast<double>(sums.sum(rect)) / static_cast<double>(rect.count());
        }
    }
    return out;
}

ScalarField charge_map(const GrayImage& img, const Window& win) {
    ScalarField out = local_mean(img, win);
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            out(r, c) = static_cast<double>(img(r, c)) - out(r, c);
        }
    }
    return out;
}

// Charges are carried scaled by N (N*q = N*b - S is an integer), so the
// accumulation is exact and the single division at the end is the only
// rounding step.
Dipole window_dipole(const GrayImage& img, const Rect& rect) {
    const double n = static_cast<double>(rect.count());
    double total = 0.0;
    for (std::size_t r = rect.row0; r <= rect.row1; ++r) {
        for (std::size_t c = rect.col0; c <= rect.col1; ++c) {
            total += img(r, c);
        }
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t r = rect.row0; r <= rect.row1; ++r) {
        for (std::size_t c = rect.col0; c <= rect.col1; ++c) {
            const double scaled_charge = n * img(r, c) - total;
            mx += scaled_charge * static_cast<double>(c - rect.col0);
            my += scaled_charge * static_cast<double>(r - rect.row0);
        }
    }
    return {mx / (n * n), my / (n * n)};
}

VectorField dipole_field(const GrayImage& img, const Window& win, Parallelism par) {
    check_window(img, win);
    VectorField out(img.width(), img.height());
    detail::for_each_band(img.height(), par.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t c = 0; c < img.width(); ++c) {
                if (const auto rect = dipole_window(win, img.width(), img.height(), r, c)) {
                    const Dipole d = window_dipole(img, *rect);
                    out.set(r, c, d.px, d.py);
                }
            }
        }
    });
    return out;
}

VectorField dipole_field_fast(const GrayImage& img, const Window& win, Parallelism par) {
    check_window(img, win);
    const IntegralImage mass(img, [](std::size_t, std::size_t) { return std::int64_t{1}; });
    const IntegralImage moment_x(img, [](std::size_t, std::size_t c) { return static_cast<std::int64_t>(c); });
    const IntegralImage moment_y(img, [](std::size_t r, std::size_t) { return static_cast<std::int64_t>(r); });

    VectorField out(img.width(), img.height());
    detail::for_each_band(img.height(), par.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t c = 0; c < img.width(); ++c) {
                const auto rect = dipole_window(win, img.width(), img.height(), r, c);
                if (!rect) {
                    continue;
                }
                // sum (N*b - S) * x over the window, in absolute coordinates;
                // the scaled charges sum to zero so the origin drops out.
                const auto n = static_cast<std::int64_t>(rect->count());
                const std::int64_t total = mass.sum(*rect);
                const std::int64_t col_sum = static_cast<std::int64_t>(rect->rows()) * index_sum(rect->col0, rect->col1);
                const std::int64_t row_sum = static_cast<std::int64_t>(rect->cols()) * index_sum(rect->row0, rect->row1);
                const std::int64_t mx = n * moment_x.sum(*rect) - total * col_sum;
                const std::int64_t my = n * moment_y.sum(*rect) - total * row_sum;
                const double nn = static_cast<double>(n) * static_cast<double>(n);
                out.set(r, c, static_cast<double>(mx) / nn, static_cast<double>(my) / nn);
            }
        }
    });
    return out;
}

ScalarField magnitude_field(const VectorField& field) {
    std::vector<double> values(field.size());
    const auto xs = field.xs();
    const auto ys = field.ys();
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = std::hypot(xs[k], ys[k]);
    }
    return ScalarField(field.width(), field.height(), std::move(values));
}

Dipole whole_image_dipole(const GrayImage& img) {
    if (img.empty()) {
        throw DimensionError("image is empty; minimum size is 1x1");
    }
    std::int64_t mx = 0;
    std::int64_t my = 0;
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            mx += static_cast<std::int64_t>(img(r, c)) * static_cast<std::int64_t>(c);
            my += static_cast<std::int64_t>(img(r, c)) * static_cast<std::int64_t>(r);
        }
    }
    const double area = static_cast<double>(img.size());
    return {static_cast<double>(mx) / area, static_cast<double>(my) / area};
}

}  // namespace dipole
